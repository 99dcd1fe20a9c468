#pragma once
// Direct-recursion STL evaluator over its own tiny AST, plus a random generator that builds the
// same formula for the library. Only halfspace atoms, so the atom distance has a closed form.

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "riskgap/stl/formula.hpp"
#include "riskgap/stl/predicate.hpp"
#include "riskgap/stl/trace.hpp"

namespace ref {

enum class K { True, False, Pred, Not, And, Or, Until, Release, Ev, Alw };

struct Node {
  K k = K::True;
  std::vector<double> a;
  double b = 0.0;
  bool neg = false;
  std::string name;
  std::size_t lo = 0, hi = 0;
  std::vector<std::shared_ptr<Node>> c;
};
using P = std::shared_ptr<Node>;

inline constexpr double inf = std::numeric_limits<double>::infinity();

inline double atom(const Node& n, const std::vector<double>& x) {
  double dot = 0.0, nn = 0.0;
  for (std::size_t i = 0; i < n.a.size(); ++i) {
    dot += n.a[i] * x[i];
    nn += n.a[i] * n.a[i];
  }
  const double d = (dot - n.b) / std::sqrt(nn);
  return n.neg ? -d : d;
}

inline bool atom_holds(const Node& n, const std::vector<double>& x) {
  double dot = 0.0;
  for (std::size_t i = 0; i < n.a.size(); ++i) dot += n.a[i] * x[i];
  return n.neg ? !(dot - n.b >= 0.0) : dot - n.b >= 0.0;
}

// closed = inner range [t, t''] instead of (t, t'')
inline double rob(const Node& n, const std::vector<std::vector<double>>& x, std::size_t t, bool closed = false) {
  switch (n.k) {
    case K::True: return inf;
    case K::False: return -inf;
    case K::Pred: return atom(n, x[t]);
    case K::Not: return -rob(*n.c[0], x, t, closed);
    case K::And: return std::min(rob(*n.c[0], x, t, closed), rob(*n.c[1], x, t, closed));
    case K::Or: return std::max(rob(*n.c[0], x, t, closed), rob(*n.c[1], x, t, closed));
    case K::Ev: {
      double s = -inf;
      for (std::size_t u = t + n.lo; u <= t + n.hi; ++u) s = std::max(s, rob(*n.c[0], x, u, closed));
      return s;
    }
    case K::Alw: {
      double s = inf;
      for (std::size_t u = t + n.lo; u <= t + n.hi; ++u) s = std::min(s, rob(*n.c[0], x, u, closed));
      return s;
    }
    case K::Until: {
      double s = -inf;
      for (std::size_t u = t + n.lo; u <= t + n.hi; ++u) {
        double in = inf;
        for (std::size_t v = closed ? t : t + 1; v < u + (closed ? 1 : 0); ++v) in = std::min(in, rob(*n.c[0], x, v, closed));
        s = std::max(s, std::min(rob(*n.c[1], x, u, closed), in));
      }
      return s;
    }
    case K::Release: {
      double s = inf;
      for (std::size_t u = t + n.lo; u <= t + n.hi; ++u) {
        double in = -inf;
        for (std::size_t v = closed ? t : t + 1; v < u + (closed ? 1 : 0); ++v) in = std::max(in, rob(*n.c[0], x, v, closed));
        s = std::min(s, std::max(rob(*n.c[1], x, u, closed), in));
      }
      return s;
    }
  }
  return 0.0;
}

inline bool sat(const Node& n, const std::vector<std::vector<double>>& x, std::size_t t) {
  switch (n.k) {
    case K::True: return true;
    case K::False: return false;
    case K::Pred: return atom_holds(n, x[t]);
    case K::Not: return !sat(*n.c[0], x, t);
    case K::And: return sat(*n.c[0], x, t) && sat(*n.c[1], x, t);
    case K::Or: return sat(*n.c[0], x, t) || sat(*n.c[1], x, t);
    case K::Ev:
      for (std::size_t u = t + n.lo; u <= t + n.hi; ++u)
        if (sat(*n.c[0], x, u)) return true;
      return false;
    case K::Alw:
      for (std::size_t u = t + n.lo; u <= t + n.hi; ++u)
        if (!sat(*n.c[0], x, u)) return false;
      return true;
    case K::Until:
      for (std::size_t u = t + n.lo; u <= t + n.hi; ++u) {
        bool all = true;
        for (std::size_t v = t + 1; v < u; ++v) all = all && sat(*n.c[0], x, v);
        if (all && sat(*n.c[1], x, u)) return true;
      }
      return false;
    case K::Release:
      for (std::size_t u = t + n.lo; u <= t + n.hi; ++u) {
        bool any = false;
        for (std::size_t v = t + 1; v < u; ++v) any = any || sat(*n.c[0], x, v);
        if (!any && !sat(*n.c[1], x, u)) return false;
      }
      return true;
  }
  return false;
}

inline std::size_t length(const Node& n) {
  std::size_t m = 0;
  for (const auto& c : n.c) m = std::max(m, length(*c));
  if (n.k == K::Until || n.k == K::Release || n.k == K::Ev || n.k == K::Alw) return n.hi + m;
  return m;
}

inline riskgap::stl::Formula build(const Node& n) {
  using riskgap::stl::Formula;
  using riskgap::stl::Interval;
  switch (n.k) {
    case K::True: return Formula::truth();
    case K::False: return Formula::falsity();
    case K::Pred: {
      auto atom = riskgap::stl::PredicateAtom::halfspace(n.name, n.a, n.b);
      return Formula::pred(n.neg ? atom.complement() : atom);
    }
    case K::Not: return Formula::negation(build(*n.c[0]));
    case K::And: return Formula::conj(build(*n.c[0]), build(*n.c[1]));
    case K::Or: return Formula::disj(build(*n.c[0]), build(*n.c[1]));
    case K::Ev: return Formula::eventually(Interval::bounded(n.lo, n.hi), build(*n.c[0]));
    case K::Alw: return Formula::globally(Interval::bounded(n.lo, n.hi), build(*n.c[0]));
    case K::Until: return Formula::until(Interval::bounded(n.lo, n.hi), build(*n.c[0]), build(*n.c[1]));
    case K::Release: return Formula::release(Interval::bounded(n.lo, n.hi), build(*n.c[0]), build(*n.c[1]));
  }
  return Formula::truth();
}

/// Random formula of depth ≤ max_depth over `dim`-dimensional halfspace atoms p0..p{atoms-1}.
class Generator {
 public:
  Generator(std::uint64_t seed, std::size_t dim = 2, std::size_t atoms = 3, std::size_t max_hi = 3)
      : rng_(seed), dim_(dim), max_hi_(max_hi) {
    std::normal_distribution<double> g(0.0, 1.0);
    for (std::size_t i = 0; i < atoms; ++i) {
      Node n;
      n.k = K::Pred;
      n.name = "p" + std::to_string(i);
      for (std::size_t d = 0; d < dim; ++d) n.a.push_back(g(rng_));
      n.b = 0.5 * g(rng_);
      atoms_.push_back(n);
    }
  }

  const std::vector<Node>& atoms() const { return atoms_; }

  P formula(std::size_t depth) {
    std::uniform_int_distribution<int> pick(0, depth == 0 ? 1 : 10);
    const int r = pick(rng_);
    auto n = std::make_shared<Node>();
    if (r <= 1) {
      // leaf: mostly atoms, now and then a constant
      std::uniform_int_distribution<int> leaf(0, 19);
      const int l = leaf(rng_);
      if (l == 0) { n->k = K::True; return n; }
      if (l == 1) { n->k = K::False; return n; }
      *n = atoms_[std::uniform_int_distribution<std::size_t>(0, atoms_.size() - 1)(rng_)];
      n->neg = std::bernoulli_distribution(0.3)(rng_);
      return n;
    }
    static constexpr K kinds[] = {K::Not, K::And, K::Or, K::Until, K::Release, K::Ev, K::Alw, K::Until, K::And};
    n->k = kinds[static_cast<std::size_t>(r - 2)];
    const bool binary = n->k == K::And || n->k == K::Or || n->k == K::Until || n->k == K::Release;
    n->c.push_back(formula(depth - 1));
    if (binary) n->c.push_back(formula(depth - 1));
    if (n->k == K::Until || n->k == K::Release || n->k == K::Ev || n->k == K::Alw) {
      std::uniform_int_distribution<std::size_t> lo(0, max_hi_);
      n->lo = lo(rng_);
      n->hi = std::uniform_int_distribution<std::size_t>(n->lo, max_hi_)(rng_);
    }
    return n;
  }

  std::vector<std::vector<double>> trace(std::size_t steps, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    std::vector<std::vector<double>> x(steps, std::vector<double>(dim_));
    for (auto& s : x)
      for (auto& v : s) v = g(rng_);
    return x;
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
  std::size_t dim_;
  std::size_t max_hi_;
  std::vector<Node> atoms_;
};

}  // namespace ref
