#include "riskgap/gap/gap.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "riskgap/errors.hpp"

namespace riskgap::gap {

void LipschitzConstants::validate() const {
  for (double v : {l_f1, l_f2, l_f3, l_u, l_g1, l_g2})
    if (!(v >= 0.0) || !std::isfinite(v))
      throw InvalidArgument("Lipschitz constants must be finite and nonnegative");
}

void DisturbanceBounds::validate() const {
  if (!(v_star >= 0.0) || !(w_star >= 0.0) || !std::isfinite(v_star) || !std::isfinite(w_star))
    throw InvalidArgument("disturbance bounds must be finite and nonnegative");
}

IissGain IissGain::linear(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw GainNotKInf("linear gain must be positive");
  IissGain g;
  g.k_ = k;
  return g;
}

IissGain IissGain::tabulated(std::vector<std::pair<double, double>> points) {
  if (points.size() < 2) throw GainNotKInf("tabulated gain needs at least two points");
  if (points.front().first != 0.0 || points.front().second != 0.0)
    throw GainNotKInf("tabulated gain must satisfy gamma(0) = 0");
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i].first > points[i - 1].first))
      throw GainNotKInf("tabulated gain abscissae must be strictly increasing");
    if (!(points[i].second > points[i - 1].second))
      throw GainNotKInf("tabulated gain must be strictly increasing");
  }
  IissGain g;
  const auto& [s0, g0] = points[points.size() - 2];
  const auto& [s1, g1] = points.back();
  g.k_ = (g1 - g0) / (s1 - s0);
  g.points_ = std::move(points);
  return g;
}

double IissGain::operator()(double s) const {
  if (!(s >= 0.0)) throw InvalidArgument("gain argument must be nonnegative");
  if (points_.empty()) return k_ * s;
  if (s >= points_.back().first) return points_.back().second + k_ * (s - points_.back().first);
  auto it = std::upper_bound(points_.begin(), points_.end(), s,
                             [](double v, const auto& p) { return v < p.first; });
  const auto& [s1, g1] = *it;
  const auto& [s0, g0] = *(it - 1);
  return g0 + (g1 - g0) * (s - s0) / (s1 - s0);
}

GapBound lipschitz_delta(const LipschitzConstants& lip, const DisturbanceBounds& dist,
                         std::size_t horizon) {
  lip.validate();
  dist.validate();
  LipschitzSchedule sched;
  sched.delta.assign(horizon + 1, 0.0);
  for (std::size_t t = 0; t < horizon; ++t) {
    const double d = sched.delta[t];
    sched.delta[t + 1] =
        lip.l_f1 * d + lip.l_f2 * lip.l_u * (lip.l_g1 * d + lip.l_g2 * dist.w_star) + lip.l_f3 * dist.v_star;
  }
  return GapBound{std::move(sched), horizon};
}

double lipschitz_fixed_point(const LipschitzConstants& lip, const DisturbanceBounds& dist) {
  const double rate = lip.l_f1 + lip.l_f2 * lip.l_u * lip.l_g1;
  if (!(rate < 1.0)) throw InvalidArgument("recursion rate L_f1 + L_f2 L_u L_g1 must be < 1");
  return (lip.l_f2 * lip.l_u * lip.l_g2 * dist.w_star + lip.l_f3 * dist.v_star) / (1.0 - rate);
}

GapBound iiss_delta(const IissGain& gain, double d_diameter) {
  if (!(d_diameter >= 0.0)) throw InvalidArgument("disturbance diameter must be nonnegative");
  return GapBound{ConstantDelta{gain(d_diameter), ConstantSource::Iiss}, 0};
}

double induced_two_norm(const std::vector<std::vector<double>>& a) {
  if (a.empty()) throw InvalidArgument("matrix is empty");
  const std::size_t rows = a.size();
  const std::size_t cols = a.front().size();
  Eigen::MatrixXd m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (a[i].size() != cols) throw DimensionMismatch(cols, a[i].size());
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = a[i][j];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

IissGain linear_iiss_gain(const std::vector<std::vector<double>>& a_cl) {
  if (a_cl.empty() || a_cl.size() != a_cl.front().size())
    throw InvalidArgument("closed-loop matrix must be square");
  const double norm = induced_two_norm(a_cl);
  if (!(norm < 1.0)) throw NormNotContractive(norm);
  return IissGain::linear(1.0 / (1.0 - norm));
}

double trace_difference(const stl::Trace& a, const stl::Trace& b,
                        const std::vector<double>& weights) {
  if (a.size() != b.size() || a.dim() != b.dim())
    throw PairMismatch("paired traces differ in length or dimension");
  if (!weights.empty() && weights.size() != a.dim())
    throw PairMismatch("weight vector does not match state dimension");
  double sup = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    const auto x = a[t];
    const auto y = b[t];
    double sq = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double w = weights.empty() ? 1.0 : weights[i];
      const double d = w * (x[i] - y[i]);
      sq += d * d;
    }
    sup = std::max(sup, std::sqrt(sq));
  }
  return sup;
}

risk::SampleSet gamma_samples(const std::vector<std::pair<stl::Trace, stl::Trace>>& pairs,
                              const std::vector<double>& weights) {
  if (pairs.empty()) throw PairMismatch("no trace pairs");
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const auto& [nominal, perturbed] : pairs) out.push_back(trace_difference(nominal, perturbed, weights));
  return risk::SampleSet(std::move(out));
}

GammaRisk gamma_risk(const risk::SampleSet& gamma, risk::Metric metric, const risk::RiskQuery& q) {
  GammaRisk r;
  switch (metric) {
    case risk::Metric::VaR:
      r.point = risk::empirical_var(gamma, q.beta);
      try {
        r.upper_bound = risk::var_upper_bound(gamma, q).upper_bound;
      } catch (const InsufficientSamples&) {
      }
      break;
    case risk::Metric::CVaR:
      r.point = risk::empirical_cvar(gamma, q.beta);
      if (gamma.support_bound()) r.upper_bound = risk::cvar_upper_bound(gamma, q).upper_bound;
      break;
    case risk::Metric::Mean: r.point = risk::mean_risk(gamma); break;
    case risk::Metric::WorstCase: r.point = risk::worst_case_risk(gamma); break;
  }
  return r;
}

double gap_bound_constraint(double nominal_risk, const GapBound& bound, risk::Metric metric,
                            const risk::RiskQuery& q, std::size_t constraint_horizon) {
  return std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, ConstantDelta>) {
          return nominal_risk + k.delta;
        } else if constexpr (std::is_same_v<K, LipschitzSchedule>) {
          if (constraint_horizon >= k.delta.size())
            throw HorizonExceeded(constraint_horizon, k.delta.size() - 1);
          return nominal_risk + k.delta[constraint_horizon];
        } else {
          return nominal_risk + gamma_risk(k.gamma, metric, q).used();
        }
      },
      bound.kind);
}

double gap_bound_constraint(double nominal_risk, const GapBound& bound, risk::Metric metric,
                            const risk::RiskQuery& q) {
  return gap_bound_constraint(nominal_risk, bound, metric, q, bound.horizon);
}

double gap_bound_stl(double nominal_risk_at_t, const GapBound& bound, std::size_t t,
                     std::size_t formula_len) {
  if (const auto* c = std::get_if<ConstantDelta>(&bound.kind)) return nominal_risk_at_t + c->delta;
  const auto* s = std::get_if<LipschitzSchedule>(&bound.kind);
  if (s == nullptr) throw InvalidArgument("STL gap bound needs a Lipschitz schedule or constant Δ");
  const std::size_t step = t + formula_len;
  if (step >= s->delta.size()) throw HorizonExceeded(step, s->delta.size() - 1);
  return nominal_risk_at_t + s->delta[step];
}

std::string to_string(Comparison c) {
  return c == Comparison::Certified ? "Certified" : "Inconclusive";
}

Comparison compare_controllers(double risk_1, double risk_2, double delta) {
  if (!(delta >= 0.0)) throw InvalidArgument("delta must be nonnegative");
  return risk_1 <= risk_2 - 2.0 * delta ? Comparison::Certified : Comparison::Inconclusive;
}

}  // namespace riskgap::gap
