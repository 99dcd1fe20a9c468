#include "riskgap/sim/rng.hpp"

namespace riskgap::sim {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t trial_index,
                          Channel channel) noexcept {
  std::uint64_t h = mix64(master_seed);
  h = mix64(h ^ trial_index);
  h = mix64(h ^ static_cast<std::uint64_t>(channel));
  return h;
}

std::uint64_t Rng::below(std::uint64_t n) noexcept {
  if (n == 0) return 0;
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit = (~std::uint64_t{0} - (~std::uint64_t{0} % n));
  std::uint64_t v = engine_();
  while (v >= limit) v = engine_();
  return v % n;
}

}  // namespace riskgap::sim
