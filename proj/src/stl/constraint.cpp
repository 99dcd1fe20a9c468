#include "riskgap/stl/constraint.hpp"

#include <algorithm>
#include <limits>

#include "riskgap/errors.hpp"

namespace riskgap::stl {

double signed_distance(const ConstraintSpec& c, std::span<const double> state) {
  return c.atom.signed_distance(state);
}

double trace_robustness(const ConstraintSpec& c, const Trace& x) {
  if (x.empty()) throw EmptyHorizon();
  std::size_t first = 0;
  std::size_t last = x.last();
  if (c.horizon) {
    first = c.horizon->first;
    if (c.horizon->second < first) throw EmptyHorizon();
    if (c.horizon->second > x.last()) throw TraceTooShort(c.horizon->second, x.last());
    last = c.horizon->second;
  }
  double rho = std::numeric_limits<double>::infinity();
  for (std::size_t t = first; t <= last; ++t) rho = std::min(rho, c.atom.signed_distance(x[t]));
  return rho;
}

}  // namespace riskgap::stl
