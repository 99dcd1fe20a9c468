#pragma once

#include "riskgap/risk/sample_set.hpp"

namespace riskgap::cli {

/// W1 between two empirical distributions: ∫ |F_a⁻¹(q) − F_b⁻¹(q)| dq, computed by merging the
/// quantile breakpoints. Equal sizes reduce to the mean of |sorted a − sorted b|.
double wasserstein_1d(const risk::SampleSet& a, const risk::SampleSet& b);

}  // namespace riskgap::cli
