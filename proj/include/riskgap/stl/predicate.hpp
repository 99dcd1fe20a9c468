#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace riskgap::stl {

/// a·x − b ≥ 0
struct Halfspace {
  std::vector<double> a;
  double b = 0.0;
};

/// lo ≤ x ≤ hi componentwise
struct AxisBox {
  std::vector<double> lo;
  std::vector<double> hi;
};

enum class BallNorm { L2, Linf };

/// ‖x − center‖ ≤ radius (set membership in the given norm, distances always Euclidean)
struct NormBall {
  std::vector<double> center;
  double radius = 0.0;
  BallNorm norm = BallNorm::L2;
};

using ScalarFunction = std::function<double(std::span<const double>)>;

enum class Direction { GreaterEqual, LessEqual };

/// h(x) = fn(x) − threshold (or threshold − fn(x)); robustness is h itself.
struct Functional {
  std::string function_name;
  std::shared_ptr<const ScalarFunction> function;
  double threshold = 0.0;
  Direction direction = Direction::GreaterEqual;
};

using PredicateShape = std::variant<Halfspace, AxisBox, NormBall, Functional>;

/// Named predicate over (a projection of) the state vector. Geometric shapes carry an
/// exact Euclidean signed distance; `negated` selects the complement set.
class PredicateAtom {
 public:
  static PredicateAtom halfspace(std::string name, std::vector<double> a, double b);
  static PredicateAtom axis_box(std::string name, std::vector<double> lo, std::vector<double> hi);
  static PredicateAtom norm_ball(std::string name, std::vector<double> center, double radius,
                                 BallNorm norm = BallNorm::L2);
  static PredicateAtom functional(std::string name, std::string function_name,
                                  ScalarFunction fn, double threshold = 0.0,
                                  Direction direction = Direction::GreaterEqual);

  /// Restrict the atom to the listed state coordinates.
  PredicateAtom with_indices(std::vector<std::size_t> indices) const;
  PredicateAtom complement() const;

  const std::string& name() const noexcept { return name_; }
  const PredicateShape& shape() const noexcept { return shape_; }
  const std::vector<std::size_t>& indices() const noexcept { return indices_; }
  bool negated() const noexcept { return negated_; }
  bool is_geometric() const noexcept { return !std::holds_alternative<Functional>(shape_); }
  /// Dimension the shape acts on; 0 for functional atoms.
  std::size_t shape_dim() const noexcept;

  /// Membership x ∈ O^μ (or its complement when negated).
  bool holds(std::span<const double> state) const;
  /// Signed distance to the boundary: positive inside, negative outside.
  double signed_distance(std::span<const double> state) const;

 private:
  PredicateAtom(std::string name, PredicateShape shape);
  double raw_distance(std::span<const double> projected) const;
  bool raw_holds(std::span<const double> projected) const;
  template <typename F>
  auto with_projection(std::span<const double> state, F&& f) const;

  std::string name_;
  PredicateShape shape_;
  std::vector<std::size_t> indices_;
  bool negated_ = false;
};

}  // namespace riskgap::stl
