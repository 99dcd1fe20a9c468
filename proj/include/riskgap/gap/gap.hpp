#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "riskgap/risk/estimators.hpp"
#include "riskgap/risk/sample_set.hpp"
#include "riskgap/stl/trace.hpp"

namespace riskgap::gap {

/// Lipschitz constants of f (state, input, process noise), u, and g (state, measurement noise).
struct LipschitzConstants {
  double l_f1 = 0.0;
  double l_f2 = 0.0;
  double l_f3 = 0.0;
  double l_u = 0.0;
  double l_g1 = 0.0;
  double l_g2 = 0.0;

  void validate() const;
};

/// v* = 2 max‖v‖ over D_v, w* = 2 max‖w‖ over D_w.
struct DisturbanceBounds {
  double v_star = 0.0;
  double w_star = 0.0;

  static DisturbanceBounds from_max_norms(double max_v, double max_w) {
    return {2.0 * max_v, 2.0 * max_w};
  }
  void validate() const;
};

struct LipschitzSchedule {
  std::vector<double> delta;  ///< Δ(0..T), nondecreasing, Δ(0) = 0
};

enum class ConstantSource { Iiss, Assumed };

struct ConstantDelta {
  double delta = 0.0;
  ConstantSource source = ConstantSource::Assumed;
};

/// Γ(ω) = sup_t ‖X̄(t,ω) − X(t,ω)‖ samples.
struct StochasticGamma {
  risk::SampleSet gamma;
};

struct GapBound {
  std::variant<LipschitzSchedule, ConstantDelta, StochasticGamma> kind;
  std::size_t horizon = 0;
};

/// Class-K∞ gain γ: either γ(s) = k·s or a piecewise-linear table through (0, 0).
class IissGain {
 public:
  static IissGain linear(double k);
  /// Points must start at (0, 0) and be strictly increasing in both s and γ(s).
  /// Throws GainNotKInf. Beyond the last point the final segment's slope is extended.
  static IissGain tabulated(std::vector<std::pair<double, double>> points);

  double operator()(double s) const;
  bool is_linear() const noexcept { return points_.empty(); }
  double slope() const noexcept { return k_; }

 private:
  double k_ = 0.0;
  std::vector<std::pair<double, double>> points_;
};

/// Δ(0) = 0, Δ(t+1) = L_f1 Δ(t) + L_f2 L_u (L_g1 Δ(t) + L_g2 w*) + L_f3 v*.
GapBound lipschitz_delta(const LipschitzConstants& lip, const DisturbanceBounds& dist,
                         std::size_t horizon);

/// Fixed point of the recursion when L_f1 + L_f2 L_u L_g1 < 1. Throws InvalidArgument otherwise.
double lipschitz_fixed_point(const LipschitzConstants& lip, const DisturbanceBounds& dist);

/// Δ = γ(diameter of the disturbance set).
GapBound iiss_delta(const IissGain& gain, double d_diameter);

/// γ(s) = s / (1 − ‖A_cl‖₂). Throws NormNotContractive when the induced 2-norm is ≥ 1.
IissGain linear_iiss_gain(const std::vector<std::vector<double>>& a_cl);

/// Induced 2-norm (largest singular value).
double induced_two_norm(const std::vector<std::vector<double>>& a);

/// One Γ sample per pair: max over t of the (optionally weighted) Euclidean state difference.
/// Throws PairMismatch.
risk::SampleSet gamma_samples(const std::vector<std::pair<stl::Trace, stl::Trace>>& pairs,
                              const std::vector<double>& weights = {});
double trace_difference(const stl::Trace& a, const stl::Trace& b,
                        const std::vector<double>& weights = {});

/// R(Γ) as used by the stochastic gap bound: high-confidence upper bound when available.
struct GammaRisk {
  double point = 0.0;
  std::optional<double> upper_bound;
  /// Value added to the nominal risk: the upper bound when present, else the point estimate.
  double used() const { return upper_bound ? *upper_bound : point; }
};

GammaRisk gamma_risk(const risk::SampleSet& gamma, risk::Metric metric, const risk::RiskQuery& q);

/// Perturbed-risk bound for a constraint specification:
/// Constant → nominal + Δ; schedule → nominal + Δ(T); stochastic → nominal + R(Γ).
/// `constraint_horizon` is T; HorizonExceeded when a schedule is too short.
double gap_bound_constraint(double nominal_risk, const GapBound& bound, risk::Metric metric,
                            const risk::RiskQuery& q, std::size_t constraint_horizon);
/// Same with T taken as the bound's horizon.
double gap_bound_constraint(double nominal_risk, const GapBound& bound, risk::Metric metric,
                            const risk::RiskQuery& q);

/// nominal + Δ(t + L) for a PNF formula with length L; constant Δ ignores t and L.
double gap_bound_stl(double nominal_risk_at_t, const GapBound& bound, std::size_t t,
                     std::size_t formula_len);

enum class Comparison { Certified, Inconclusive };
std::string to_string(Comparison c);

/// Certified iff risk_1 ≤ risk_2 − 2Δ: controller 1 is then no riskier on the perturbed system.
Comparison compare_controllers(double risk_1, double risk_2, double delta);

}  // namespace riskgap::gap
