#pragma once

#include <atomic>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "riskgap/errors.hpp"

namespace riskgap::sim {

template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn, std::size_t index_offset) {
  jobs = resolve_jobs(jobs);
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t failed = std::numeric_limits<std::size_t>::max();
  std::string what;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      {
        std::lock_guard lock(mu);
        if (i > failed) return;  // a lower index already failed
      }
      try {
        fn(i);
      } catch (const std::exception& e) {
        std::lock_guard lock(mu);
        if (i < failed) {
          failed = i;
          what = e.what();
        }
      }
    }
  };

  if (jobs <= 1 || n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    const unsigned count = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
    pool.reserve(count);
    for (unsigned j = 0; j < count; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failed != std::numeric_limits<std::size_t>::max()) throw TrialError(failed + index_offset, what);
}

}  // namespace riskgap::sim
