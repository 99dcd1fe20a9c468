#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>

#include "riskgap/stl/predicate.hpp"
#include "riskgap/stl/trace.hpp"

namespace riskgap::stl {

/// Pointwise constraint c(x(t)) ≥ 0 required over a step range (inclusive).
struct ConstraintSpec {
  PredicateAtom atom;
  /// [first, last] steps; absent means the whole trace.
  std::optional<std::pair<std::size_t, std::size_t>> horizon;
};

/// Dist^c: positive distance to the boundary when the constraint holds, negative otherwise.
double signed_distance(const ConstraintSpec& c, std::span<const double> state);

/// ρ^c(x) = min over the horizon of the signed distance. Throws EmptyHorizon.
double trace_robustness(const ConstraintSpec& c, const Trace& x);

}  // namespace riskgap::stl
