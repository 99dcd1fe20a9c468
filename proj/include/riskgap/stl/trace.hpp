#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace riskgap::stl {

/// Discrete-time signal: states x(0..T) of uniform dimension, sampled every dt seconds.
class Trace {
 public:
  Trace(double dt, std::size_t dim);
  Trace(double dt, const std::vector<std::vector<double>>& states);

  void push_back(std::span<const double> state);

  double dt() const noexcept { return dt_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return dim_ == 0 ? 0 : data_.size() / dim_; }
  bool empty() const noexcept { return data_.empty(); }
  /// Index of the final step T.
  std::size_t last() const;

  std::span<const double> operator[](std::size_t t) const {
    return {data_.data() + t * dim_, dim_};
  }
  std::span<const double> at(std::size_t t) const;

 private:
  double dt_;
  std::size_t dim_;
  std::vector<double> data_;
};

/// Writes `t,s0,s1,...` header and one row per step.
void write_trace_csv(std::ostream& out, const Trace& trace);
Trace read_trace_csv(std::istream& in, double dt);

}  // namespace riskgap::stl
