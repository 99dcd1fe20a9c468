#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "riskgap/stl/formula.hpp"
#include "riskgap/stl/trace.hpp"

namespace riskgap::stl {

/// Range of the inner infimum in the Until recursion: (t, t'') or [t, t''].
enum class UntilInner { Open, Closed };

struct SemanticsOptions {
  UntilInner until_inner = UntilInner::Open;
};

std::string describe(const SemanticsOptions& opts);

/// Result of evaluating a formula at one time step. `marginal` marks ρ = 0.
struct Verdict {
  bool satisfied = false;
  bool marginal = false;
  double robustness = 0.0;
};

/// Robust semantics ρ^φ(x, t); ±∞ encode true/false.
/// Unbounded intervals range up to the last step at which their operands can be evaluated.
/// Throws TraceTooShort when t + horizon_length(f) exceeds the last step.
double robustness(const Formula& f, const Trace& x, std::size_t t = 0,
                  const SemanticsOptions& opts = {});

/// Boolean semantics β^φ(x, t).
bool boolean_sat(const Formula& f, const Trace& x, std::size_t t = 0,
                 const SemanticsOptions& opts = {});

/// Both semantics at t. ρ = 0 counts as satisfied and is flagged marginal.
Verdict evaluate(const Formula& f, const Trace& x, std::size_t t = 0,
                 const SemanticsOptions& opts = {});

/// ρ^φ(x, t) for every t in [0, T − horizon_length(f)].
std::vector<double> robustness_signal(const Formula& f, const Trace& x,
                                      const SemanticsOptions& opts = {});

}  // namespace riskgap::stl
