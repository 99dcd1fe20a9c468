#include "riskgap/risk/estimators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

#include "riskgap/errors.hpp"

namespace riskgap::risk {

std::string to_string(Metric m) {
  switch (m) {
    case Metric::VaR: return "VaR";
    case Metric::CVaR: return "CVaR";
    case Metric::Mean: return "Mean";
    case Metric::WorstCase: return "WorstCase";
  }
  return "?";
}

Metric metric_from_string(const std::string& s) {
  std::string lower;
  for (char c : s) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "var") return Metric::VaR;
  if (lower == "cvar") return Metric::CVaR;
  if (lower == "mean") return Metric::Mean;
  if (lower == "worstcase" || lower == "worst_case" || lower == "max") return Metric::WorstCase;
  throw InvalidArgument("unknown risk metric '" + s + "'");
}

void RiskQuery::validate() const {
  if (!(beta > 0.0 && beta < 1.0)) throw InvalidArgument("beta must lie in (0,1)");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0,1)");
}

double empirical_cdf(const SampleSet& s, double alpha) {
  const auto sorted = s.sorted();
  const auto count = std::upper_bound(sorted.begin(), sorted.end(), alpha) - sorted.begin();
  return static_cast<double>(count) / static_cast<double>(sorted.size());
}

double empirical_var(const SampleSet& s, double level) {
  if (!(level > 0.0 && level <= 1.0)) throw InvalidArgument("VaR level must lie in (0,1]");
  const std::size_t n = s.size();
  const double nd = static_cast<double>(n);
  // Smallest k with k/N >= level, evaluated the same way the CDF is.
  auto k = static_cast<std::size_t>(std::ceil(level * nd));
  k = std::clamp<std::size_t>(k, 1, n);
  while (k > 1 && static_cast<double>(k - 1) / nd >= level) --k;
  while (k < n && static_cast<double>(k) / nd < level) ++k;
  return s.order_statistic(k);
}

double confidence_margin(std::size_t n, double delta) {
  if (n == 0) throw InvalidArgument("confidence margin needs n >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0,1)");
  const double nd = static_cast<double>(n);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return std::sqrt(std::log(pi2 * nd * nd / (3.0 * delta)) / (2.0 * nd));
}

RiskEstimate var_upper_bound(const SampleSet& s, const RiskQuery& q) {
  q.validate();
  const double level = q.beta + confidence_margin(s.size(), q.delta);
  if (level > 1.0) throw InsufficientSamples(s.size(), level);
  RiskEstimate e;
  e.metric = Metric::VaR;
  e.point = empirical_var(s, q.beta);
  e.upper_bound = empirical_var(s, level);
  e.effective_level = level;
  e.n = s.size();
  return e;
}

double empirical_cvar(const SampleSet& s, double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw InvalidArgument("beta must lie in (0,1)");
  const auto o = s.sorted();
  const std::size_t n = o.size();
  const double scale = 1.0 / (static_cast<double>(n) * (1.0 - beta));
  // excess = Σ_{i>k} (O_i − O_k), accumulated from the top so every term is nonnegative.
  double excess = 0.0;
  double best = o[n - 1];
  for (std::size_t k = n - 1; k-- > 0;) {
    excess += static_cast<double>(n - 1 - k) * (o[k + 1] - o[k]);
    best = std::min(best, o[k] + excess * scale);
  }
  return best;
}

RiskEstimate cvar_upper_bound(const SampleSet& s, const RiskQuery& q, CvarBoundForm form) {
  q.validate();
  if (!s.support_bound()) throw MissingSupportBound();
  if (!(q.delta > 0.0 && q.delta <= 0.5)) throw DeltaOutOfRange(q.delta);
  const auto o = s.sorted();
  const std::size_t n = o.size();
  const double nd = static_cast<double>(n);
  const double b = *s.support_bound();
  const double eps = std::sqrt(std::log(1.0 / q.delta) / (2.0 * nd));
  const double offset = form == CvarBoundForm::TailMass ? q.beta : 1.0 - q.beta;
  const double factor = form == CvarBoundForm::TailMass ? 1.0 / (1.0 - q.beta) : 1.0 / q.beta;
  double sum = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const double next = i < n ? o[i] : b;
    const double weight = std::max(static_cast<double>(i) / nd - eps - offset, 0.0);
    sum += (next - o[i - 1]) * weight;
  }
  RiskEstimate e;
  e.metric = Metric::CVaR;
  e.point = empirical_cvar(s, q.beta);
  e.upper_bound = b - factor * sum;
  e.effective_level = q.beta;
  e.n = n;
  return e;
}

double mean_risk(const SampleSet& s) {
  double sum = 0.0;
  for (double v : s.sorted()) sum += v;
  return sum / static_cast<double>(s.size());
}

double worst_case_risk(const SampleSet& s) { return s.max(); }

}  // namespace riskgap::risk
