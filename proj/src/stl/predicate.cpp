#include "riskgap/stl/predicate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "riskgap/errors.hpp"

namespace riskgap::stl {
namespace {

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

bool box_holds(std::span<const double> x, std::span<const double> lo, std::span<const double> hi) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  return true;
}

double box_distance(std::span<const double> x, std::span<const double> lo,
                    std::span<const double> hi) {
  if (box_holds(x, lo, hi)) {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < x.size(); ++i) d = std::min({d, x[i] - lo[i], hi[i] - x[i]});
    return d;
  }
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = std::max({lo[i] - x[i], 0.0, x[i] - hi[i]});
    s += e * e;
  }
  return -std::sqrt(s);
}

struct LinfBox {
  std::vector<double> lo, hi;
  explicit LinfBox(const NormBall& b) {
    for (double c : b.center) {
      lo.push_back(c - b.radius);
      hi.push_back(c + b.radius);
    }
  }
};

}  // namespace

PredicateAtom::PredicateAtom(std::string name, PredicateShape shape)
    : name_(std::move(name)), shape_(std::move(shape)) {}

PredicateAtom PredicateAtom::halfspace(std::string name, std::vector<double> a, double b) {
  if (a.empty() || !(norm2(a) > 0.0)) throw InvalidArgument("halfspace '" + name + "' needs ‖a‖ > 0");
  return PredicateAtom(std::move(name), Halfspace{std::move(a), b});
}

PredicateAtom PredicateAtom::axis_box(std::string name, std::vector<double> lo,
                                      std::vector<double> hi) {
  if (lo.empty() || lo.size() != hi.size())
    throw InvalidArgument("axis_box '" + name + "' needs lo/hi of equal nonzero length");
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (!(lo[i] <= hi[i])) throw InvalidArgument("axis_box '" + name + "' needs lo <= hi");
  return PredicateAtom(std::move(name), AxisBox{std::move(lo), std::move(hi)});
}

PredicateAtom PredicateAtom::norm_ball(std::string name, std::vector<double> center, double radius,
                                       BallNorm norm) {
  if (center.empty()) throw InvalidArgument("norm_ball '" + name + "' needs a center");
  if (!(radius >= 0.0)) throw InvalidArgument("norm_ball '" + name + "' needs radius >= 0");
  return PredicateAtom(std::move(name), NormBall{std::move(center), radius, norm});
}

PredicateAtom PredicateAtom::functional(std::string name, std::string function_name,
                                        ScalarFunction fn, double threshold, Direction direction) {
  if (!fn) throw InvalidArgument("functional '" + name + "' has no function");
  return PredicateAtom(std::move(name),
                       Functional{std::move(function_name),
                                  std::make_shared<const ScalarFunction>(std::move(fn)), threshold,
                                  direction});
}

PredicateAtom PredicateAtom::with_indices(std::vector<std::size_t> indices) const {
  const std::size_t d = shape_dim();
  if (d != 0 && !indices.empty() && indices.size() != d)
    throw DimensionMismatch(d, indices.size());
  PredicateAtom out = *this;
  out.indices_ = std::move(indices);
  return out;
}

PredicateAtom PredicateAtom::complement() const {
  PredicateAtom out = *this;
  out.negated_ = !negated_;
  return out;
}

std::size_t PredicateAtom::shape_dim() const noexcept {
  return std::visit(
      [](const auto& s) -> std::size_t {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Halfspace>) return s.a.size();
        else if constexpr (std::is_same_v<S, AxisBox>) return s.lo.size();
        else if constexpr (std::is_same_v<S, NormBall>) return s.center.size();
        else return 0;
      },
      shape_);
}

template <typename F>
auto PredicateAtom::with_projection(std::span<const double> state, F&& f) const {
  if (indices_.empty()) {
    const std::size_t d = shape_dim();
    if (d != 0 && state.size() != d) throw DimensionMismatch(d, state.size());
    return f(state);
  }
  // Small fixed buffer covers every shipped predicate; fall back to the heap otherwise.
  constexpr std::size_t kInline = 8;
  double inline_buf[kInline];
  std::vector<double> heap;
  double* buf = inline_buf;
  if (indices_.size() > kInline) {
    heap.resize(indices_.size());
    buf = heap.data();
  }
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] >= state.size()) throw DimensionMismatch(indices_[i] + 1, state.size());
    buf[i] = state[indices_[i]];
  }
  return f(std::span<const double>(buf, indices_.size()));
}

double PredicateAtom::raw_distance(std::span<const double> x) const {
  return std::visit(
      [&](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Halfspace>) {
          double dot = 0.0;
          for (std::size_t i = 0; i < x.size(); ++i) dot += s.a[i] * x[i];
          return (dot - s.b) / norm2(s.a);
        } else if constexpr (std::is_same_v<S, AxisBox>) {
          return box_distance(x, s.lo, s.hi);
        } else if constexpr (std::is_same_v<S, NormBall>) {
          if (s.norm == BallNorm::Linf) {
            const LinfBox box(s);
            return box_distance(x, box.lo, box.hi);
          }
          double sq = 0.0;
          for (std::size_t i = 0; i < x.size(); ++i) sq += (x[i] - s.center[i]) * (x[i] - s.center[i]);
          return s.radius - std::sqrt(sq);
        } else {
          const double v = (*s.function)(x);
          return s.direction == Direction::GreaterEqual ? v - s.threshold : s.threshold - v;
        }
      },
      shape_);
}

bool PredicateAtom::raw_holds(std::span<const double> x) const {
  return std::visit(
      [&](const auto& s) -> bool {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Halfspace>) {
          double dot = 0.0;
          for (std::size_t i = 0; i < x.size(); ++i) dot += s.a[i] * x[i];
          return dot - s.b >= 0.0;
        } else if constexpr (std::is_same_v<S, AxisBox>) {
          return box_holds(x, s.lo, s.hi);
        } else if constexpr (std::is_same_v<S, NormBall>) {
          if (s.norm == BallNorm::Linf) {
            const LinfBox box(s);
            return box_holds(x, box.lo, box.hi);
          }
          double sq = 0.0;
          for (std::size_t i = 0; i < x.size(); ++i) sq += (x[i] - s.center[i]) * (x[i] - s.center[i]);
          return s.radius - std::sqrt(sq) >= 0.0;
        } else {
          const double v = (*s.function)(x);
          return (s.direction == Direction::GreaterEqual ? v - s.threshold : s.threshold - v) >= 0.0;
        }
      },
      shape_);
}

bool PredicateAtom::holds(std::span<const double> state) const {
  const bool in = with_projection(state, [&](std::span<const double> x) { return raw_holds(x); });
  return negated_ ? !in : in;
}

double PredicateAtom::signed_distance(std::span<const double> state) const {
  const double d = with_projection(state, [&](std::span<const double> x) { return raw_distance(x); });
  return negated_ ? -d : d;
}

}  // namespace riskgap::stl
