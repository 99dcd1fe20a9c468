#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "doctest.h"
#include "riskgap/errors.hpp"
#include "riskgap/stl/constraint.hpp"
#include "riskgap/stl/formula.hpp"
#include "riskgap/stl/parser.hpp"
#include "riskgap/stl/predicate.hpp"
#include "riskgap/stl/predicate_table.hpp"
#include "riskgap/stl/semantics.hpp"
#include "riskgap/stl/trace.hpp"
#include "support/stl_reference.hpp"

using namespace riskgap;
using namespace riskgap::stl;

namespace {

Trace scalar_trace(std::vector<double> v) {
  std::vector<std::vector<double>> s;
  for (double x : v) s.push_back({x});
  return Trace(1.0, s);
}

PredicateTable table_ab() {
  PredicateTable t;
  t.emplace("A", PredicateAtom::halfspace("A", {1.0, 0.0}, 0.0));
  t.emplace("B", PredicateAtom::halfspace("B", {0.0, 1.0}, 0.0));
  t.emplace("C", PredicateAtom::halfspace("C", {1.0, 1.0}, 0.0));
  t.emplace("D", PredicateAtom::halfspace("D", {1.0, -1.0}, 0.0));
  return t;
}

bool close(double a, double b, double tol = 1e-12) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

bool has_not(const Formula& f) {
  if (f.kind() == NodeKind::Not) return true;
  switch (f.kind()) {
    case NodeKind::True:
    case NodeKind::False:
    case NodeKind::Pred: return false;
    case NodeKind::Eventually:
    case NodeKind::Globally: return has_not(f.lhs());
    default: return has_not(f.lhs()) || has_not(f.rhs());
  }
}

}  // namespace

TEST_SUITE("parser") {
  TEST_CASE("structure of a nested formula") {
    const auto f = parse_formula("G[0,3](!(C & D)) & F[1,2](A & F[0,1](B))", table_ab());
    REQUIRE(f.kind() == NodeKind::And);
    const auto& g = f.lhs();
    CHECK(g.kind() == NodeKind::Globally);
    CHECK(g.interval() == Interval::bounded(0, 3));
    CHECK(g.lhs().kind() == NodeKind::Not);
    CHECK(g.lhs().lhs().kind() == NodeKind::And);
    CHECK(g.lhs().lhs().lhs().atom().name() == "C");
    const auto& e = f.rhs();
    CHECK(e.kind() == NodeKind::Eventually);
    CHECK(e.interval() == Interval::bounded(1, 2));
    CHECK(e.lhs().rhs().kind() == NodeKind::Eventually);
    CHECK(e.lhs().rhs().interval() == Interval::bounded(0, 1));
    CHECK(formula_length(f) == 3);
  }

  TEST_CASE("literals and until") {
    CHECK(parse_formula("T", {}).kind() == NodeKind::True);
    CHECK(parse_formula("true", {}).kind() == NodeKind::True);
    CHECK(parse_formula("false", {}).kind() == NodeKind::False);
    const auto u = parse_formula("A U[0,2] B", table_ab());
    REQUIRE(u.kind() == NodeKind::Until);
    CHECK(u.interval() == Interval::bounded(0, 2));
    CHECK(u.lhs().atom().name() == "A");
    CHECK(u.rhs().atom().name() == "B");
  }

  TEST_CASE("precedence: ! binds tighter than temporal, temporal tighter than &, & tighter than |") {
    const auto t = table_ab();
    const auto f = parse_formula("!A & F[0,1] B | C", t);
    REQUIRE(f.kind() == NodeKind::Or);
    CHECK(f.lhs().kind() == NodeKind::And);
    CHECK(f.lhs().lhs().kind() == NodeKind::Not);
    CHECK(f.lhs().rhs().kind() == NodeKind::Eventually);
    const auto g = parse_formula("F !A", t);
    CHECK(g.kind() == NodeKind::Eventually);
    CHECK_FALSE(g.interval().is_bounded());
  }

  TEST_CASE("errors") {
    CHECK_THROWS_AS(parse_formula("A &", table_ab()), SyntaxError);
    CHECK_THROWS_AS(parse_formula("F[2,1] A", table_ab()), SyntaxError);
    CHECK_THROWS_AS(parse_formula("(A", table_ab()), SyntaxError);
    CHECK_THROWS_AS(parse_formula("Q", table_ab()), UnknownPredicate);
  }

  TEST_CASE("printing round-trips through the parser") {
    ref::Generator gen(11);
    PredicateTable t;
    for (const auto& a : gen.atoms()) t.emplace(a.name, PredicateAtom::halfspace(a.name, a.a, a.b));
    for (int i = 0; i < 200; ++i) {
      const auto node = gen.formula(3);
      const auto f = ref::build(*node);
      const auto text = to_string(f);
      const auto g = parse_formula(text, t);
      CHECK(to_string(g) == text);
      const auto p = to_pnf(f);
      CHECK(to_string(parse_formula(to_string(p), t)) == to_string(p));
    }
  }
}

TEST_SUITE("formula") {
  TEST_CASE("formula length") {
    const auto t = table_ab();
    CHECK(formula_length(parse_formula("G[0,3] A", t)) == 3);
    CHECK(formula_length(parse_formula("A", t)) == 0);
    CHECK(formula_length(parse_formula("F[1,2](A & F[0,1] B)", t)) == 3);
    CHECK(formula_length(parse_formula("!(A U[2,4] G[0,1] B)", t)) == 5);
    CHECK_THROWS_AS(formula_length(parse_formula("G A", t)), UnboundedFormula);
    CHECK(horizon_length(parse_formula("G[2,inf] F[0,3] A", t)) == 5);
  }

  TEST_CASE("length is monotone under conjunction") {
    ref::Generator gen(5);
    for (int i = 0; i < 200; ++i) {
      const auto a = ref::build(*gen.formula(3));
      const auto b = ref::build(*gen.formula(3));
      CHECK(formula_length(Formula::conj(a, b)) >= std::max(formula_length(a), formula_length(b)));
    }
  }

  TEST_CASE("PNF examples") {
    const auto t = table_ab();
    const auto p = to_pnf(parse_formula("!(A & B)", t));
    REQUIRE(p.kind() == NodeKind::Or);
    CHECK(p.lhs().kind() == NodeKind::Pred);
    CHECK(p.lhs().atom().negated());
    CHECK(p.rhs().atom().negated());
    const auto q = to_pnf(parse_formula("!G[0,3] A", t));
    REQUIRE(q.kind() == NodeKind::Eventually);
    CHECK(q.interval() == Interval::bounded(0, 3));
    CHECK(q.lhs().atom().negated());
    CHECK(q.lhs().atom().name() == "A");
    CHECK(to_pnf(parse_formula("!T", t)).kind() == NodeKind::False);
    CHECK(to_pnf(parse_formula("!!A", t)).kind() == NodeKind::Pred);
    const auto u = to_pnf(parse_formula("!(A U[0,2] B)", t));
    CHECK(u.kind() == NodeKind::Release);
    CHECK_FALSE(has_not(u));
  }
}

TEST_SUITE("semantics") {
  TEST_CASE("Boolean examples") {
    PredicateTable t;
    t.emplace("pos", PredicateAtom::halfspace("pos", {1.0}, 0.0));
    CHECK(boolean_sat(parse_formula("G[0,2] pos", t), scalar_trace({5, 3, 4})));
    CHECK(boolean_sat(parse_formula("F[0,2] pos", t), scalar_trace({-1, -2, 4})));
    CHECK_FALSE(boolean_sat(parse_formula("F[0,1] pos", t), scalar_trace({-1, -2, 4})));
  }

  TEST_CASE("robustness examples") {
    PredicateTable t;
    t.emplace("pos", PredicateAtom::halfspace("pos", {1.0}, 0.0));
    CHECK(robustness(parse_formula("G[0,2] pos", t), scalar_trace({5, 3, 4})) == 3.0);
    CHECK(robustness(parse_formula("F[0,2] pos", t), scalar_trace({-1, -2, 4})) == 4.0);
  }

  TEST_CASE("until with A-rob [2,2,2] and B-rob [-1,-1,3]") {
    PredicateTable t;
    t.emplace("A", PredicateAtom::halfspace("A", {1.0, 0.0}, 0.0));
    t.emplace("B", PredicateAtom::halfspace("B", {0.0, 1.0}, 0.0));
    const Trace x(1.0, {{2, -1}, {2, -1}, {2, 3}});
    const auto f = parse_formula("A U[0,2] B", t);
    CHECK(boolean_sat(f, x));
    CHECK(robustness(f, x) == 2.0);
    // t''=0 gives min(-1, +inf) under the open inner range; the closed one adds A at t
    CHECK(robustness(f, x, 0, {UntilInner::Closed}) == 2.0);
    const Trace y(1.0, {{2, 1}, {-5, -1}, {-5, 3}});
    CHECK(robustness(f, y) == 1.0);
    CHECK(robustness(f, y, 0, {UntilInner::Closed}) == 1.0);
    const Trace z(1.0, {{-4, -1}, {2, -1}, {2, 3}});
    CHECK(robustness(f, z) == 2.0);
    CHECK(robustness(f, z, 0, {UntilInner::Closed}) == -4.0);
  }

  TEST_CASE("negation flips the atom distance") {
    PredicateTable t;
    t.emplace("A", PredicateAtom::halfspace("A", {1.0, 0.0}, 1.0));
    const Trace x(1.0, {{3, 0}});
    CHECK(robustness(parse_formula("!A", t), x) == -2.0);
    CHECK(robustness(parse_formula("A", t), x) == 2.0);
  }

  TEST_CASE("constants are infinite") {
    const Trace x(1.0, {{0.0}});
    CHECK(robustness(Formula::truth(), x) == std::numeric_limits<double>::infinity());
    CHECK(robustness(Formula::falsity(), x) == -std::numeric_limits<double>::infinity());
  }

  TEST_CASE("trace too short") {
    PredicateTable t;
    t.emplace("pos", PredicateAtom::halfspace("pos", {1.0}, 0.0));
    const auto f = parse_formula("G[0,3] pos", t);
    CHECK_THROWS_AS(robustness(f, scalar_trace({1, 2, 3})), TraceTooShort);
    CHECK_THROWS_AS(boolean_sat(f, scalar_trace({1, 2, 3, 4}), 1), TraceTooShort);
    CHECK_NOTHROW(robustness(f, scalar_trace({1, 2, 3, 4})));
  }

  TEST_CASE("unbounded operators clip to the trace end") {
    PredicateTable t;
    t.emplace("pos", PredicateAtom::halfspace("pos", {1.0}, 0.0));
    const auto x = scalar_trace({3, 2, 1, 4});
    CHECK(robustness(parse_formula("G pos", t), x) == 1.0);
    CHECK(robustness(parse_formula("G pos", t), x, 3) == 4.0);
    CHECK(robustness(parse_formula("G F[0,1] pos", t), x) == 2.0);
    CHECK(robustness(parse_formula("F[1,inf] pos", t), x) == 4.0);
  }

  TEST_CASE("marginal verdicts count as satisfied") {
    PredicateTable t;
    t.emplace("pos", PredicateAtom::halfspace("pos", {1.0}, 0.0));
    const auto v = evaluate(parse_formula("pos", t), scalar_trace({0.0}));
    CHECK(v.satisfied);
    CHECK(v.marginal);
    CHECK(v.robustness == 0.0);
    CHECK_FALSE(evaluate(parse_formula("pos", t), scalar_trace({0.5})).marginal);
  }

  TEST_CASE("robustness signal") {
    PredicateTable t;
    t.emplace("pos", PredicateAtom::halfspace("pos", {1.0}, 0.0));
    const auto s = robustness_signal(parse_formula("F[0,1] pos", t), scalar_trace({1, -2, 3, -4}));
    CHECK(s == std::vector<double>{1, 3, 3});
  }

  TEST_CASE("reference evaluator on random formulas") {
    ref::Generator gen(2024);
    std::uniform_int_distribution<std::size_t> len(1, 10);
    int checked = 0;
    for (int i = 0; i < 400; ++i) {
      const auto node = gen.formula(3);
      const std::size_t l = ref::length(*node);
      if (l > 9) continue;
      const std::size_t steps = std::max(l + 1, len(gen.rng()));
      const auto xs = gen.trace(steps);
      const Trace x(1.0, xs);
      const auto f = ref::build(*node);
      for (std::size_t t0 = 0; t0 + l < steps; ++t0) {
        CHECK(close(robustness(f, x, t0), ref::rob(*node, xs, t0)));
        CHECK(close(robustness(f, x, t0, {UntilInner::Closed}), ref::rob(*node, xs, t0, true)));
        CHECK(boolean_sat(f, x, t0) == ref::sat(*node, xs, t0));
        ++checked;
      }
    }
    CHECK(checked > 300);
  }

  TEST_CASE("PNF preserves both semantics") {
    ref::Generator gen(99);
    for (int i = 0; i < 300; ++i) {
      const auto node = gen.formula(3);
      const std::size_t l = ref::length(*node);
      const auto xs = gen.trace(l + 3);
      const Trace x(1.0, xs);
      const auto f = ref::build(*node);
      const auto p = to_pnf(f);
      CHECK_FALSE(has_not(p));
      CHECK(formula_length(p) == formula_length(f));
      for (std::size_t t0 = 0; t0 <= 2; ++t0) {
        CHECK(robustness(p, x, t0) == robustness(f, x, t0));
        CHECK(boolean_sat(p, x, t0) == boolean_sat(f, x, t0));
      }
    }
  }

  TEST_CASE("perturbations smaller than the robustness keep the verdict") {
    ref::Generator gen(314);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int tested = 0;
    for (int i = 0; i < 200; ++i) {
      const auto node = gen.formula(2);
      const auto xs = gen.trace(ref::length(*node) + 1);
      const auto f = ref::build(*node);
      const double r = robustness(f, Trace(1.0, xs));
      if (r == 0.0 || std::isinf(r)) continue;
      ++tested;
      for (int k = 0; k < 100; ++k) {
        auto ys = xs;
        for (auto& s : ys) {
          // random direction, norm below |r|
          double nx = u(gen.rng()), ny = u(gen.rng());
          const double n = std::hypot(nx, ny);
          const double m = 0.999 * std::abs(r) * std::abs(u(gen.rng()));
          if (n > 0.0) {
            s[0] += m * nx / n;
            s[1] += m * ny / n;
          }
        }
        CHECK(boolean_sat(f, Trace(1.0, ys)) == (r > 0.0));
      }
    }
    CHECK(tested > 50);
  }
}

TEST_SUITE("predicates") {
  TEST_CASE("signed distance closed forms") {
    const auto h = PredicateAtom::halfspace("h", {1.0, 0.0}, 1.0);
    CHECK(h.signed_distance(std::vector<double>{3, 0}) == 2.0);
    CHECK(h.signed_distance(std::vector<double>{0, 5}) == -1.0);
    CHECK(PredicateAtom::halfspace("h2", {3.0, 4.0}, 5.0).signed_distance(std::vector<double>{3, 4}) == doctest::Approx(4.0));
    const auto ball = PredicateAtom::norm_ball("b", {0.0, 0.0}, 1.0);
    CHECK(ball.signed_distance(std::vector<double>{2, 0}) == -1.0);
    CHECK(ball.signed_distance(std::vector<double>{0.25, 0}) == 0.75);
    const auto box = PredicateAtom::axis_box("x", {-1.0, -1.0}, {1.0, 1.0});
    CHECK(box.signed_distance(std::vector<double>{0.5, 0.0}) == 0.5);
    CHECK(box.signed_distance(std::vector<double>{4.0, 5.0}) == doctest::Approx(-5.0));  // corner (1,1)
    const auto linf = PredicateAtom::norm_ball("l", {0.0, 0.0}, 1.0, BallNorm::Linf);
    CHECK(linf.signed_distance(std::vector<double>{4.0, 5.0}) == doctest::Approx(-5.0));
    CHECK(box.complement().signed_distance(std::vector<double>{0.5, 0.0}) == -0.5);
    CHECK_THROWS_AS(h.signed_distance(std::vector<double>{1.0}), DimensionMismatch);
  }

  TEST_CASE("indices project the state") {
    const auto h = PredicateAtom::halfspace("h", {1.0}, 2.0).with_indices({2});
    CHECK(h.signed_distance(std::vector<double>{9, 9, 5}) == 3.0);
    CHECK(h.holds(std::vector<double>{9, 9, 5}));
  }

  TEST_CASE("functional atoms return h") {
    const auto f = PredicateAtom::functional("f", "sq", [](std::span<const double> x) { return x[0] * x[0]; }, 4.0,
                                             Direction::LessEqual);
    CHECK(f.signed_distance(std::vector<double>{1.0}) == 3.0);
    CHECK_FALSE(f.holds(std::vector<double>{3.0}));
  }

  TEST_CASE("signed distance is 1-Lipschitz and agrees with membership") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> g(0.0, 2.0);
    const std::vector<PredicateAtom> atoms = {
        PredicateAtom::halfspace("h", {0.3, -1.2, 0.5}, 0.4),
        PredicateAtom::axis_box("x", {-1.0, -0.5, 0.0}, {1.0, 2.0, 0.5}),
        PredicateAtom::norm_ball("b", {0.5, 0.0, -0.5}, 1.5),
        PredicateAtom::norm_ball("l", {0.0, 1.0, 0.0}, 0.8, BallNorm::Linf),
    };
    for (const auto& base : atoms) {
      for (const auto& a : {base, base.complement()}) {
        for (int i = 0; i < 10000; ++i) {
          std::vector<double> x(3), y(3);
          for (auto& v : x) v = g(rng);
          for (std::size_t k = 0; k < 3; ++k) y[k] = x[k] + 0.3 * g(rng);
          const double dxy = std::hypot(x[0] - y[0], x[1] - y[1], x[2] - y[2]);
          const double d = a.signed_distance(x);
          REQUIRE(std::abs(d - a.signed_distance(y)) <= dxy + 1e-12);
          if (d > 0.0) REQUIRE(a.holds(x));
          if (d < 0.0) REQUIRE_FALSE(a.holds(x));
        }
      }
    }
  }

  TEST_CASE("predicate table from JSON") {
    FunctionRegistry fns;
    fns["first"] = [](std::span<const double> x) { return x[0]; };
    const auto j = nlohmann::json::parse(R"({
      "h": {"shape": "halfspace", "a": [1, 0], "b": 1},
      "box": {"shape": "axis_box", "lo": [0], "hi": [1], "indices": [1]},
      "ball": {"shape": "norm_ball", "center": [0, 0], "radius": 2, "norm": "Linf", "negated": true},
      "f": {"shape": "functional", "function": "first", "threshold": 2, "direction": "le"}
    })");
    const auto t = predicate_table_from_json(j, fns);
    CHECK(t.size() == 4);
    CHECK(t.at("h").signed_distance(std::vector<double>{3, 0}) == 2.0);
    CHECK(t.at("box").signed_distance(std::vector<double>{7, 0.5}) == 0.5);
    CHECK(t.at("ball").negated());
    CHECK(t.at("f").signed_distance(std::vector<double>{0.5, 0}) == 1.5);
    CHECK_THROWS_AS(predicate_table_from_json(nlohmann::json::parse(R"({"h": {"shape": "halfspace", "a": [1], "b": 0, "x": 1}})"), fns),
                    InvalidArgument);
    CHECK_THROWS_AS(predicate_table_from_json(nlohmann::json::parse(R"({"f": {"shape": "functional", "function": "nope"}})"), fns),
                    InvalidArgument);
    CHECK_THROWS_AS(predicate_table_from_json(nlohmann::json::parse(R"({"s": {"shape": "star"}})"), fns), InvalidArgument);
  }
}

TEST_SUITE("constraint") {
  TEST_CASE("trace robustness is the minimum signed distance") {
    const ConstraintSpec c{PredicateAtom::halfspace("d", {1.0}, 0.0), std::nullopt};
    CHECK(trace_robustness(c, scalar_trace({3, 1, 2})) == 1.0);
    CHECK(trace_robustness(c, scalar_trace({3, -0.5, 2})) == -0.5);
    CHECK(signed_distance(c, std::vector<double>{4.0}) == 4.0);
    const ConstraintSpec w{PredicateAtom::halfspace("d", {1.0}, 0.0), std::make_pair<std::size_t, std::size_t>(1, 2)};
    CHECK(trace_robustness(w, scalar_trace({-9, 1, 2, -9})) == 1.0);
  }

  TEST_CASE("empty or out-of-range horizon") {
    const ConstraintSpec c{PredicateAtom::halfspace("d", {1.0}, 0.0), std::make_pair<std::size_t, std::size_t>(2, 1)};
    CHECK_THROWS_AS(trace_robustness(c, scalar_trace({1, 2, 3})), EmptyHorizon);
    const ConstraintSpec d{PredicateAtom::halfspace("d", {1.0}, 0.0), std::make_pair<std::size_t, std::size_t>(0, 5)};
    CHECK_THROWS_AS(trace_robustness(d, scalar_trace({1, 2, 3})), TraceTooShort);
  }

  TEST_CASE("matches a loop over random traces") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    const ConstraintSpec c{PredicateAtom::norm_ball("b", {0.0, 0.0}, 1.0), std::nullopt};
    for (int i = 0; i < 200; ++i) {
      std::vector<std::vector<double>> xs(1 + i % 17, std::vector<double>(2));
      for (auto& s : xs)
        for (auto& v : s) v = g(rng);
      double m = std::numeric_limits<double>::infinity();
      for (const auto& s : xs) m = std::min(m, 1.0 - std::hypot(s[0], s[1]));
      CHECK(trace_robustness(c, Trace(1.0, xs)) == doctest::Approx(m).epsilon(1e-14));
    }
  }
}

TEST_SUITE("trace") {
  TEST_CASE("csv round trip and dimension checks") {
    const Trace x(0.5, {{1.0, 2.0}, {3.5, -4.0}});
    std::stringstream ss;
    write_trace_csv(ss, x);
    CHECK(ss.str().rfind("t,s0,s1\n", 0) == 0);
    const auto y = read_trace_csv(ss, 0.5);
    REQUIRE(y.size() == 2);
    CHECK(y[1][0] == 3.5);
    CHECK(y[1][1] == -4.0);
    Trace z(1.0, 2);
    CHECK_THROWS_AS(z.push_back(std::vector<double>{1.0}), DimensionMismatch);
  }
}
