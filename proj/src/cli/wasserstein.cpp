#include "riskgap/cli/wasserstein.hpp"

#include <cmath>

namespace riskgap::cli {

double wasserstein_1d(const risk::SampleSet& a, const risk::SampleSet& b) {
  const auto& x = a.sorted();
  const auto& y = b.sorted();
  const std::size_t n = x.size(), m = y.size();
  if (n == m) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::abs(x[i] - y[i]);
    return s / static_cast<double>(n);
  }
  // Walk the merged breakpoints i/n and j/m; both quantile functions are constant in between.
  // Breakpoints are compared as integers i·m vs j·n to avoid rounding.
  double total = 0.0;
  std::size_t i = 0, j = 0;
  std::size_t prev = 0;  // previous breakpoint in units of 1/(n·m)
  while (i < n && j < m) {
    const std::size_t next_i = (i + 1) * m, next_j = (j + 1) * n;
    const std::size_t next = std::min(next_i, next_j);
    total += static_cast<double>(next - prev) * std::abs(x[i] - y[j]);
    prev = next;
    if (next_i == next) ++i;
    if (next_j == next) ++j;
  }
  return total / (static_cast<double>(n) * static_cast<double>(m));
}

}  // namespace riskgap::cli
