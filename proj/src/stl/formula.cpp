#include "riskgap/stl/formula.hpp"

#include <algorithm>

#include "riskgap/errors.hpp"

namespace riskgap::stl {

Interval Interval::bounded(std::size_t lo, std::size_t hi) {
  if (lo > hi) throw InvalidArgument("interval lower bound exceeds upper bound");
  return Interval{lo, hi};
}

namespace {

void check_interval(const Interval& i) {
  if (i.hi && i.lo > *i.hi) throw InvalidArgument("interval lower bound exceeds upper bound");
}

}  // namespace

Formula Formula::truth() { return Formula(std::make_shared<const Node>(Node{NodeKind::True, {}, {}, {}})); }

Formula Formula::falsity() {
  return Formula(std::make_shared<const Node>(Node{NodeKind::False, {}, {}, {}}));
}

Formula Formula::pred(PredicateAtom atom) {
  return Formula(std::make_shared<const Node>(Node{NodeKind::Pred, std::move(atom), {}, {}}));
}

Formula Formula::negation(Formula f) {
  return Formula(std::make_shared<const Node>(Node{NodeKind::Not, {}, {}, {std::move(f)}}));
}

Formula Formula::conj(Formula lhs, Formula rhs) {
  return Formula(
      std::make_shared<const Node>(Node{NodeKind::And, {}, {}, {std::move(lhs), std::move(rhs)}}));
}

Formula Formula::disj(Formula lhs, Formula rhs) {
  return Formula(
      std::make_shared<const Node>(Node{NodeKind::Or, {}, {}, {std::move(lhs), std::move(rhs)}}));
}

Formula Formula::until(Interval i, Formula lhs, Formula rhs) {
  check_interval(i);
  return Formula(
      std::make_shared<const Node>(Node{NodeKind::Until, {}, i, {std::move(lhs), std::move(rhs)}}));
}

Formula Formula::release(Interval i, Formula lhs, Formula rhs) {
  check_interval(i);
  return Formula(std::make_shared<const Node>(
      Node{NodeKind::Release, {}, i, {std::move(lhs), std::move(rhs)}}));
}

Formula Formula::eventually(Interval i, Formula f) {
  check_interval(i);
  return Formula(std::make_shared<const Node>(Node{NodeKind::Eventually, {}, i, {std::move(f)}}));
}

Formula Formula::globally(Interval i, Formula f) {
  check_interval(i);
  return Formula(std::make_shared<const Node>(Node{NodeKind::Globally, {}, i, {std::move(f)}}));
}

NodeKind Formula::kind() const noexcept { return node_->kind; }

const PredicateAtom& Formula::atom() const {
  if (node_->kind != NodeKind::Pred) throw InvalidArgument("not a predicate node");
  return *node_->atom;
}

const Formula& Formula::lhs() const {
  if (node_->children.empty()) throw InvalidArgument("node has no operands");
  return node_->children[0];
}

const Formula& Formula::rhs() const {
  if (node_->children.size() < 2) throw InvalidArgument("node has no right operand");
  return node_->children[1];
}

const Interval& Formula::interval() const {
  if (!is_temporal()) throw InvalidArgument("node has no interval");
  return node_->interval;
}

bool Formula::is_temporal() const noexcept {
  switch (node_->kind) {
    case NodeKind::Until:
    case NodeKind::Release:
    case NodeKind::Eventually:
    case NodeKind::Globally: return true;
    default: return false;
  }
}

bool Formula::bounded() const {
  if (is_temporal() && !node_->interval.is_bounded()) return false;
  return std::all_of(node_->children.begin(), node_->children.end(),
                     [](const Formula& c) { return c.bounded(); });
}

namespace {

std::size_t length_impl(const Formula& f, bool clip) {
  switch (f.kind()) {
    case NodeKind::True:
    case NodeKind::False:
    case NodeKind::Pred: return 0;
    case NodeKind::Not: return length_impl(f.lhs(), clip);
    case NodeKind::And:
    case NodeKind::Or: return std::max(length_impl(f.lhs(), clip), length_impl(f.rhs(), clip));
    case NodeKind::Until:
    case NodeKind::Release:
    case NodeKind::Eventually:
    case NodeKind::Globally: {
      const Interval& i = f.interval();
      if (!i.is_bounded() && !clip) throw UnboundedFormula();
      std::size_t inner = length_impl(f.lhs(), clip);
      if (f.kind() == NodeKind::Until || f.kind() == NodeKind::Release)
        inner = std::max(inner, length_impl(f.rhs(), clip));
      return (i.is_bounded() ? *i.hi : i.lo) + inner;
    }
  }
  return 0;
}

Formula push_negation(const Formula& f, bool negate);

Formula pnf_impl(const Formula& f) { return push_negation(f, false); }

Formula push_negation(const Formula& f, bool neg) {
  switch (f.kind()) {
    case NodeKind::True: return neg ? Formula::falsity() : f;
    case NodeKind::False: return neg ? Formula::truth() : f;
    case NodeKind::Pred: return neg ? Formula::pred(f.atom().complement()) : f;
    case NodeKind::Not: return push_negation(f.lhs(), !neg);
    case NodeKind::And:
    case NodeKind::Or: {
      Formula l = push_negation(f.lhs(), neg);
      Formula r = push_negation(f.rhs(), neg);
      const bool is_and = (f.kind() == NodeKind::And) != neg;
      return is_and ? Formula::conj(std::move(l), std::move(r))
                    : Formula::disj(std::move(l), std::move(r));
    }
    case NodeKind::Until:
    case NodeKind::Release: {
      Formula l = push_negation(f.lhs(), neg);
      Formula r = push_negation(f.rhs(), neg);
      const bool is_until = (f.kind() == NodeKind::Until) != neg;
      return is_until ? Formula::until(f.interval(), std::move(l), std::move(r))
                      : Formula::release(f.interval(), std::move(l), std::move(r));
    }
    case NodeKind::Eventually:
    case NodeKind::Globally: {
      Formula c = push_negation(f.lhs(), neg);
      const bool is_ev = (f.kind() == NodeKind::Eventually) != neg;
      return is_ev ? Formula::eventually(f.interval(), std::move(c))
                   : Formula::globally(f.interval(), std::move(c));
    }
  }
  return f;
}

std::string interval_text(const Interval& i) {
  if (!i.is_bounded()) {
    if (i.lo == 0) return "";
    return "[" + std::to_string(i.lo) + ",inf]";
  }
  return "[" + std::to_string(i.lo) + "," + std::to_string(*i.hi) + "]";
}

}  // namespace

std::size_t formula_length(const Formula& f) { return length_impl(f, false); }

std::size_t horizon_length(const Formula& f) { return length_impl(f, true); }

Formula to_pnf(const Formula& f) { return pnf_impl(f); }

bool same_structure(const Formula& a, const Formula& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case NodeKind::True:
    case NodeKind::False: return true;
    case NodeKind::Pred:
      return a.atom().name() == b.atom().name() && a.atom().negated() == b.atom().negated();
    case NodeKind::Not: return same_structure(a.lhs(), b.lhs());
    case NodeKind::And:
    case NodeKind::Or: return same_structure(a.lhs(), b.lhs()) && same_structure(a.rhs(), b.rhs());
    case NodeKind::Until:
    case NodeKind::Release:
      return a.interval() == b.interval() && same_structure(a.lhs(), b.lhs()) &&
             same_structure(a.rhs(), b.rhs());
    case NodeKind::Eventually:
    case NodeKind::Globally:
      return a.interval() == b.interval() && same_structure(a.lhs(), b.lhs());
  }
  return false;
}

std::string to_string(const Formula& f) {
  switch (f.kind()) {
    case NodeKind::True: return "T";
    case NodeKind::False: return "false";
    case NodeKind::Pred: return (f.atom().negated() ? "!" : "") + f.atom().name();
    case NodeKind::Not: {
      const NodeKind k = f.lhs().kind();
      if ((k == NodeKind::Pred && !f.lhs().atom().negated()) || k == NodeKind::True ||
          k == NodeKind::False)
        return "!" + to_string(f.lhs());
      return "!(" + to_string(f.lhs()) + ")";
    }
    case NodeKind::And: return "(" + to_string(f.lhs()) + " & " + to_string(f.rhs()) + ")";
    case NodeKind::Or: return "(" + to_string(f.lhs()) + " | " + to_string(f.rhs()) + ")";
    case NodeKind::Until:
      return "(" + to_string(f.lhs()) + " U" + interval_text(f.interval()) + " " +
             to_string(f.rhs()) + ")";
    case NodeKind::Release:
      return "(" + to_string(f.lhs()) + " R" + interval_text(f.interval()) + " " +
             to_string(f.rhs()) + ")";
    case NodeKind::Eventually: return "F" + interval_text(f.interval()) + "(" + to_string(f.lhs()) + ")";
    case NodeKind::Globally: return "G" + interval_text(f.interval()) + "(" + to_string(f.lhs()) + ")";
  }
  return "";
}

}  // namespace riskgap::stl
