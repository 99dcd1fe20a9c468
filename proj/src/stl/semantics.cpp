#include "riskgap/stl/semantics.hpp"

#include <algorithm>
#include <limits>

#include "riskgap/errors.hpp"

namespace riskgap::stl {
namespace {

struct RobustAlgebra {
  using Value = double;
  static Value top() { return std::numeric_limits<double>::infinity(); }
  static Value bot() { return -std::numeric_limits<double>::infinity(); }
  static Value meet(Value a, Value b) { return std::min(a, b); }
  static Value join(Value a, Value b) { return std::max(a, b); }
  static Value atom(const PredicateAtom& p, std::span<const double> x) {
    return p.signed_distance(x);
  }
  static Value negate(Value a) { return -a; }
};

// char instead of bool to keep std::vector contiguous.
struct BoolAlgebra {
  using Value = char;
  static Value top() { return 1; }
  static Value bot() { return 0; }
  static Value meet(Value a, Value b) { return a && b; }
  static Value join(Value a, Value b) { return a || b; }
  static Value atom(const PredicateAtom& p, std::span<const double> x) { return p.holds(x); }
  static Value negate(Value a) { return !a; }
};

template <typename Alg>
class SignalEvaluator {
 public:
  using V = typename Alg::Value;

  SignalEvaluator(const Trace& x, const SemanticsOptions& opts) : x_(x), opts_(opts), last_(x.last()) {}

  /// Values for t in [0, last − horizon_length(f)].
  std::vector<V> eval(const Formula& f) {
    const std::size_t len = last_ - horizon_length(f) + 1;
    switch (f.kind()) {
      case NodeKind::True: return std::vector<V>(len, Alg::top());
      case NodeKind::False: return std::vector<V>(len, Alg::bot());
      case NodeKind::Pred: {
        std::vector<V> out(len);
        for (std::size_t t = 0; t < len; ++t) out[t] = Alg::atom(f.atom(), x_[t]);
        return out;
      }
      case NodeKind::Not: {
        std::vector<V> out = eval(f.lhs());
        for (auto& v : out) v = Alg::negate(v);
        return out;
      }
      case NodeKind::And:
      case NodeKind::Or: {
        const std::vector<V> l = eval(f.lhs());
        const std::vector<V> r = eval(f.rhs());
        std::vector<V> out(len);
        const bool is_and = f.kind() == NodeKind::And;
        for (std::size_t t = 0; t < len; ++t)
          out[t] = is_and ? Alg::meet(l[t], r[t]) : Alg::join(l[t], r[t]);
        return out;
      }
      case NodeKind::Eventually:
      case NodeKind::Globally:
        return window(f.kind() == NodeKind::Eventually, f.interval(), eval(f.lhs()),
                      horizon_length(f.lhs()), len);
      case NodeKind::Until:
      case NodeKind::Release: {
        const std::size_t inner = std::max(horizon_length(f.lhs()), horizon_length(f.rhs()));
        return until(f.kind() == NodeKind::Release, f.interval(), eval(f.lhs()), eval(f.rhs()),
                     inner, len);
      }
    }
    return {};
  }

 private:
  // sup (eventually) or inf (globally) of the operand over (t ⊕ I), clipped when unbounded.
  std::vector<V> window(bool is_sup, const Interval& iv, const std::vector<V>& c,
                        std::size_t child_horizon, std::size_t len) const {
    auto op = [is_sup](V a, V b) { return is_sup ? Alg::join(a, b) : Alg::meet(a, b); };
    const V unit = is_sup ? Alg::bot() : Alg::top();
    std::vector<V> out(len);
    if (iv.is_bounded()) {
      for (std::size_t t = 0; t < len; ++t) {
        V acc = unit;
        for (std::size_t s = t + iv.lo; s <= t + *iv.hi; ++s) acc = op(acc, c[s]);
        out[t] = acc;
      }
      return out;
    }
    // Unbounded: every window ends at the same step, so fold suffixes.
    const std::size_t hi = last_ - child_horizon;
    V acc = unit;
    for (std::size_t s = len - 1 + iv.lo; s <= hi; ++s) acc = op(acc, c[s]);
    out[len - 1] = acc;
    for (std::size_t t = len - 1; t-- > 0;) out[t] = op(c[t + iv.lo], out[t + 1]);
    return out;
  }

  // Until: sup over t'' of min(rhs(t''), inf over inner range of lhs).
  // Release is the same recursion with the lattice flipped.
  std::vector<V> until(bool release, const Interval& iv, const std::vector<V>& l,
                       const std::vector<V>& r, std::size_t inner_horizon, std::size_t len) const {
    auto outer = [release](V a, V b) { return release ? Alg::meet(a, b) : Alg::join(a, b); };
    auto inner = [release](V a, V b) { return release ? Alg::join(a, b) : Alg::meet(a, b); };
    const V outer_unit = release ? Alg::top() : Alg::bot();
    const V inner_unit = release ? Alg::bot() : Alg::top();
    const bool closed = opts_.until_inner == UntilInner::Closed;
    std::vector<V> out(len);
    for (std::size_t t = 0; t < len; ++t) {
      const std::size_t first = t + iv.lo;
      const std::size_t hi = iv.is_bounded() ? t + *iv.hi : last_ - inner_horizon;
      V running = inner_unit;
      for (std::size_t s = closed ? t : t + 1; s < first; ++s) running = inner(running, l[s]);
      V acc = outer_unit;
      for (std::size_t s = first; s <= hi; ++s) {
        if (closed) running = inner(running, l[s]);
        acc = outer(acc, inner(r[s], running));
        if (!closed && s > t) running = inner(running, l[s]);
      }
      out[t] = acc;
    }
    return out;
  }

  const Trace& x_;
  SemanticsOptions opts_;
  std::size_t last_;
};

void check_length(const Formula& f, const Trace& x, std::size_t t) {
  if (x.empty()) throw TraceTooShort(t, 0);
  const std::size_t needed = t + horizon_length(f);
  if (needed > x.last()) throw TraceTooShort(needed, x.last());
}

}  // namespace

std::string describe(const SemanticsOptions& opts) {
  return std::string("until_inner=") + (opts.until_inner == UntilInner::Open ? "open" : "closed") +
         " unbounded=clip_to_trace_end";
}

double robustness(const Formula& f, const Trace& x, std::size_t t, const SemanticsOptions& opts) {
  check_length(f, x, t);
  return SignalEvaluator<RobustAlgebra>(x, opts).eval(f)[t];
}

bool boolean_sat(const Formula& f, const Trace& x, std::size_t t, const SemanticsOptions& opts) {
  check_length(f, x, t);
  return SignalEvaluator<BoolAlgebra>(x, opts).eval(f)[t] != 0;
}

Verdict evaluate(const Formula& f, const Trace& x, std::size_t t, const SemanticsOptions& opts) {
  Verdict v;
  v.robustness = robustness(f, x, t, opts);
  v.marginal = v.robustness == 0.0;
  v.satisfied = v.marginal || boolean_sat(f, x, t, opts);
  return v;
}

std::vector<double> robustness_signal(const Formula& f, const Trace& x,
                                      const SemanticsOptions& opts) {
  check_length(f, x, 0);
  return SignalEvaluator<RobustAlgebra>(x, opts).eval(f);
}

}  // namespace riskgap::stl
