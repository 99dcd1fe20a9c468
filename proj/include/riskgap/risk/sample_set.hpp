#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace riskgap::risk {

/// Immutable batch of cost samples Z^i = −ρ(X^i) with cached ascending order statistics.
class SampleSet {
 public:
  /// Throws InvalidArgument on an empty set, NaN samples, or samples above the support bound.
  explicit SampleSet(std::vector<double> values, std::optional<double> support_bound = std::nullopt);

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  /// O_1..O_N ascending.
  std::span<const double> sorted() const noexcept { return sorted_; }
  /// O_k with 1-based k.
  double order_statistic(std::size_t k) const;
  const std::optional<double>& support_bound() const noexcept { return support_bound_; }

  SampleSet with_support_bound(double b) const;
  double min() const noexcept { return sorted_.front(); }
  double max() const noexcept { return sorted_.back(); }

 private:
  std::vector<double> values_;
  std::vector<double> sorted_;
  std::optional<double> support_bound_;
};

/// One value per line, optional header `z`.
SampleSet read_samples_csv(std::istream& in, std::optional<double> support_bound = std::nullopt);
void write_samples_csv(std::ostream& out, const SampleSet& s);

}  // namespace riskgap::risk
