#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "riskgap/risk/sample_set.hpp"

namespace riskgap::risk {

enum class Metric { VaR, CVaR, Mean, WorstCase };

std::string to_string(Metric m);
/// Accepts "VaR", "CVaR", "Mean", "WorstCase" (case-insensitive). Throws InvalidArgument.
Metric metric_from_string(const std::string& s);

/// Risk level beta in (0,1) and confidence complement delta in (0,1).
struct RiskQuery {
  double beta = 0.9;
  double delta = 0.05;

  void validate() const;
};

struct RiskEstimate {
  Metric metric = Metric::VaR;
  double point = 0.0;
  std::optional<double> upper_bound;
  /// beta + c_N(delta) for the VaR bound; beta otherwise.
  double effective_level = 0.0;
  std::size_t n = 0;
};

/// Which β convention the CVaR concentration bound uses.
///  TailMass:  b − 1/(1−β) Σ (O_{i+1} − O_i)[i/N − ε − β]⁺  (tail of mass 1−β, the default)
///  AsPrinted: b − 1/β     Σ (O_{i+1} − O_i)[i/N − ε − (1−β)]⁺
enum class CvarBoundForm { TailMass, AsPrinted };

/// F̂(α) = #{Z^i ≤ α} / N.
double empirical_cdf(const SampleSet& s, double alpha);

/// inf{α : F̂(α) ≥ level}, an order statistic. level in (0, 1].
double empirical_var(const SampleSet& s, double level);

/// c_N(δ) = sqrt( log(π² N² / (3δ)) / (2N) ).
double confidence_margin(std::size_t n, double delta);

/// Upper bound on VaR_β holding with probability ≥ 1 − δ: the empirical quantile at level β + c_N(δ).
/// Throws InsufficientSamples when β + c_N(δ) > 1.
RiskEstimate var_upper_bound(const SampleSet& s, const RiskQuery& q);

/// Plug-in CVaR: min over order statistics α of α + mean([Z − α]⁺) / (1 − β).
double empirical_cvar(const SampleSet& s, double beta);

/// Upper bound on CVaR_β holding with probability ≥ 1 − δ, using the sample's support bound
/// as O_{N+1}. Throws MissingSupportBound, DeltaOutOfRange.
RiskEstimate cvar_upper_bound(const SampleSet& s, const RiskQuery& q,
                              CvarBoundForm form = CvarBoundForm::TailMass);

double mean_risk(const SampleSet& s);
double worst_case_risk(const SampleSet& s);

}  // namespace riskgap::risk
