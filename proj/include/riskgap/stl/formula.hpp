#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "riskgap/stl/predicate.hpp"

namespace riskgap::stl {

/// Discrete-time interval [lo, hi] in steps; hi absent means unbounded.
struct Interval {
  std::size_t lo = 0;
  std::optional<std::size_t> hi;

  static Interval bounded(std::size_t lo, std::size_t hi);
  static Interval unbounded(std::size_t lo = 0) { return Interval{lo, std::nullopt}; }
  bool is_bounded() const noexcept { return hi.has_value(); }
  bool operator==(const Interval&) const = default;
};

enum class NodeKind { True, False, Pred, Not, And, Or, Until, Release, Eventually, Globally };

/// Immutable STL syntax tree. Copies share structure.
class Formula {
 public:
  static Formula truth();
  static Formula falsity();
  static Formula pred(PredicateAtom atom);
  static Formula negation(Formula f);
  static Formula conj(Formula lhs, Formula rhs);
  static Formula disj(Formula lhs, Formula rhs);
  static Formula until(Interval i, Formula lhs, Formula rhs);
  /// Dual of until: ¬(¬lhs U ¬rhs).
  static Formula release(Interval i, Formula lhs, Formula rhs);
  static Formula eventually(Interval i, Formula f);
  static Formula globally(Interval i, Formula f);

  NodeKind kind() const noexcept;
  const PredicateAtom& atom() const;
  /// Operand of unary nodes, left operand of binary ones.
  const Formula& lhs() const;
  const Formula& rhs() const;
  const Interval& interval() const;

  bool is_temporal() const noexcept;
  /// True iff every interval in the tree is bounded.
  bool bounded() const;

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Formula::Node {
  NodeKind kind;
  std::optional<PredicateAtom> atom;
  Interval interval;
  std::vector<Formula> children;
};

/// Formula length L^φ. Throws UnboundedFormula.
std::size_t formula_length(const Formula& f);

/// Steps of lookahead needed at evaluation time, with unbounded intervals clipped to the
/// trace end (they contribute only their lower bound). Equals formula_length when bounded.
std::size_t horizon_length(const Formula& f);

/// Positive normal form: negations pushed into predicate atoms.
Formula to_pnf(const Formula& f);

/// Structural equality (atoms compared by name and polarity).
bool same_structure(const Formula& a, const Formula& b);

/// Fully parenthesized text in the parser's grammar.
std::string to_string(const Formula& f);

}  // namespace riskgap::stl
