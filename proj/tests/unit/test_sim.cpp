#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "riskgap/errors.hpp"
#include "riskgap/gap/gap.hpp"
#include "riskgap/sim/bicycle.hpp"
#include "riskgap/sim/controllers.hpp"
#include "riskgap/sim/geometry.hpp"
#include "riskgap/sim/linear.hpp"
#include "riskgap/sim/nn.hpp"
#include "riskgap/sim/rng.hpp"
#include "riskgap/sim/trial.hpp"
#include "riskgap/sim/uuv.hpp"
#include "riskgap/stl/parser.hpp"

using namespace riskgap;
using namespace riskgap::sim;

namespace {

// Ray/segment intersection by solving o + r·dir = a + s·(b − a) with Cramer's rule.
double brute_ray(const WallMap& map, Vec2 o, double angle, double max_range) {
  double best = max_range;
  const long double dx = std::cos(angle), dy = std::sin(angle);
  for (const auto& w : map.walls()) {
    const long double ex = w.b.x - w.a.x, ey = w.b.y - w.a.y;
    // [dx  -ex] [r]   [ax - ox]
    // [dy  -ey] [s] = [ay - oy]
    const long double det = dx * -ey - (-ex) * dy;
    if (det == 0.0L) continue;
    const long double rx = w.a.x - o.x, ry = w.a.y - o.y;
    const long double r = (rx * -ey - (-ex) * ry) / det;
    const long double s = (dx * ry - dy * rx) / det;
    if (r >= 0.0L && s >= 0.0L && s <= 1.0L) best = std::min(best, static_cast<double>(r));
  }
  return best;
}

WallMap corridor(double half_width, double length) {
  return WallMap({{{0, -half_width}, {length, -half_width}},
                  {{length, -half_width}, {length, half_width}},
                  {{length, half_width}, {0, half_width}},
                  {{0, half_width}, {0, -half_width}}});
}

std::vector<double> forward_oracle(const NNWeights& w, const std::vector<double>& in) {
  std::vector<double> x = in;
  for (const auto& l : w.layers()) {
    std::vector<double> y;
    for (std::size_t o = 0; o < l.w.size(); ++o) {
      long double s = l.b[o];
      for (std::size_t i = 0; i < x.size(); ++i) s += static_cast<long double>(l.w[o][i]) * x[i];
      y.push_back(l.act == Activation::Tanh ? std::tanh(static_cast<double>(s)) : static_cast<double>(s));
    }
    x = y;
  }
  return x;
}

F110Config quiet_f110() {
  F110Config c;
  c.lidar.noise_halfwidth = 0.0;
  c.heading_noise = 0.0;
  return c;
}

sim::RobustnessSpec wall_spec(const F110Model& m) {
  const auto* map = &m.map();
  const auto atom = stl::PredicateAtom::functional(
      "clear", "wall_distance", [map](std::span<const double> x) { return map->signed_distance({x[0], x[1]}); });
  return {stl::ConstraintSpec{atom, std::nullopt}, {}};
}

}  // namespace

TEST_SUITE("rng") {
  TEST_CASE("streams are deterministic and separated") {
    Rng a(5, 7, Channel::ProcessNoise), b(5, 7, Channel::ProcessNoise);
    for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
    std::set<std::uint64_t> seeds;
    for (std::uint64_t t = 0; t < 100; ++t)
      for (auto c : {Channel::InitialState, Channel::ProcessNoise, Channel::MeasurementNoise, Channel::Perturbation})
        seeds.insert(stream_seed(5, t, c));
    CHECK(seeds.size() == 400);
    CHECK(stream_seed(1, 0, Channel::InitialState) != stream_seed(0, 1, Channel::InitialState));
  }

  TEST_CASE("ranges") {
    Rng r(3);
    for (int i = 0; i < 10000; ++i) {
      const double u = r.uniform();
      CHECK((u >= 0.0 && u < 1.0));
      const double v = r.uniform(-2.0, 5.0);
      CHECK((v >= -2.0 && v < 5.0));
      CHECK(r.below(7) < 7);
    }
    CHECK(r.below(1) == 0);
  }
}

TEST_SUITE("bicycle") {
  TEST_CASE("straight line and mirror symmetry") {
    const BicycleState s{1.0, 2.0, 1.5, 0.0};
    const auto n = bicycle_step(s, 0.0, 0.1);
    CHECK(n.x == doctest::Approx(1.15));
    CHECK(n.y == 2.0);
    CHECK(n.theta == 0.0);
    BicycleState l{0, 0, 1, 0}, r{0, 0, 1, 0};
    for (int i = 0; i < 30; ++i) {
      l = bicycle_step(l, 0.3, 0.1);
      r = bicycle_step(r, -0.3, 0.1);
    }
    CHECK(l.x == doctest::Approx(r.x));
    CHECK(l.y == doctest::Approx(-r.y));
    CHECK(l.theta == doctest::Approx(-r.theta));
    // steering clamp
    const auto c1 = bicycle_step(s, 5.0, 0.1), c2 = bicycle_step(s, std::numbers::pi / 6.0, 0.1);
    CHECK(c1.theta == c2.theta);
  }

  TEST_CASE("turning radius and constant speed") {
    const BicycleParams p;
    const double steer = 0.3;
    const double radius = p.wheelbase / std::tan(steer);
    BicycleState s{0, 0, 1.0, 0};
    double ymax = 0.0;
    // a bit more than half a circle at dt = 0.01
    const int steps = static_cast<int>(std::numbers::pi * radius / 0.01) + 5;
    for (int i = 0; i < steps; ++i) {
      s = bicycle_step(s, steer, 0.01, p);
      ymax = std::max(ymax, s.y);
      CHECK(s.v == 1.0);
    }
    CHECK(std::abs(ymax / 2.0 - radius) / radius < 0.01);
  }

  TEST_CASE("speed lag and angle wrapping") {
    BicycleParams p;
    p.speed_time_constant = 0.5;
    p.speed_command = 2.0;
    const auto n = bicycle_step({0, 0, 1.0, 0}, 0.0, 0.1, p);
    CHECK(n.v == doctest::Approx(2.0 - std::exp(-0.2)));
    CHECK(wrap_angle(std::numbers::pi) == doctest::Approx(std::numbers::pi));
    CHECK(wrap_angle(-std::numbers::pi) == doctest::Approx(std::numbers::pi));
    CHECK(wrap_angle(3.0 * std::numbers::pi / 2.0) == doctest::Approx(-std::numbers::pi / 2.0));
    CHECK(wrap_angle(0.25) == 0.25);
  }
}

TEST_SUITE("lidar") {
  TEST_CASE("corridor geometry") {
    const auto map = corridor(0.75, 100.0);
    LidarConfig cfg;
    cfg.rays = 3;
    cfg.fov = std::numbers::pi;
    cfg.noise_halfwidth = 0.0;
    cfg.max_range = 10.0;
    const auto r = lidar_ground_truth({5.0, 0.0, 1.0, 0.0}, map, cfg);
    CHECK(r[0] == doctest::Approx(0.75));
    CHECK(r[2] == doctest::Approx(0.75));
    CHECK(r[1] == 10.0);  // open corridor ahead, clipped
    CHECK(cfg.ray_angle(0) == doctest::Approx(-std::numbers::pi / 2.0));
  }

  TEST_CASE("noise, clipping and dropped rays") {
    const auto map = WallMap::hallway();
    LidarConfig cfg;
    cfg.dropped = {0, 4};
    Rng rng(1);
    const BicycleState s{3.0, 0.2, 1.0, 0.1};
    const auto truth = lidar_ground_truth(s, map, cfg);
    const auto scan = lidar_scan(s, map, cfg, rng);
    REQUIRE(scan.size() == 21);
    for (std::size_t i = 0; i < 21; ++i) {
      if (i == 0 || i == 4) {
        CHECK(scan[i] == cfg.max_range);
      } else {
        CHECK(std::abs(scan[i] - truth[i]) <= cfg.noise_halfwidth + 1e-12);
        CHECK(scan[i] <= cfg.max_range);
      }
    }
    CHECK_THROWS_AS(lidar_scan({-1.0, 0.0, 1.0, 0.0}, map, cfg, rng), OutsideMap);
    LidarConfig bad;
    bad.dropped = {21};
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  }

  TEST_CASE("raycaster matches the brute-force oracle") {
    const auto map = WallMap::hallway();
    const LidarConfig cfg;
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> ux(0.0, 10.0), uy(-10.75, 0.75), th(-3.2, 3.2);
    int poses = 0;
    while (poses < 10000) {
      const Vec2 p{ux(rng), uy(rng)};
      if (!map.inside(p)) continue;
      ++poses;
      const double heading = th(rng);
      const auto r = lidar_ground_truth({p.x, p.y, 1.0, heading}, map, cfg);
      for (std::size_t i = 0; i < cfg.rays; ++i)
        REQUIRE(std::abs(r[i] - brute_ray(map, p, heading + cfg.ray_angle(i), cfg.max_range)) <= 1e-9);
    }
  }
}

TEST_SUITE("map") {
  TEST_CASE("hallway layout and signed distance") {
    const auto m = WallMap::hallway();
    CHECK(m.walls().size() == 6);
    CHECK(m.inside({5.0, 0.0}));
    CHECK(m.inside({9.2, -5.0}));
    CHECK_FALSE(m.inside({5.0, -5.0}));
    CHECK(m.signed_distance({5.0, 0.0}) == doctest::Approx(0.75));
    CHECK(m.signed_distance({5.0, 1.0}) == doctest::Approx(-0.25));
    CHECK(m.signed_distance({9.25, -5.0}) == doctest::Approx(0.75));
    CHECK(point_segment_distance({0, 1}, {{-1, 0}, {1, 0}}) == 1.0);
    CHECK(point_segment_distance({3, 4}, {{0, 0}, {0, 0}}) == 5.0);
    CHECK_THROWS_AS(WallMap::hallway({1.0, 1.5, 10.0}), InvalidArgument);
  }

  TEST_CASE("csv round trip") {
    std::stringstream ss;
    write_map_csv(ss, WallMap::hallway());
    const auto m = read_map_csv(ss);
    CHECK(m.walls().size() == 6);
    CHECK(m.signed_distance({5.0, 0.0}) == doctest::Approx(0.75));
    std::istringstream bad("x1,y1,x2,y2\n1,2,3\n");
    CHECK_THROWS_AS(read_map_csv(bad), InvalidArgument);
  }
}

TEST_SUITE("f110") {
  TEST_CASE("dropped-ray fixtures pick distinct rays") {
    F110Config c;
    c.perturbation.kind = LidarPerturbation::Kind::DroppedRays;
    const F110Model m(c);
    for (std::uint64_t t = 0; t < 50; ++t) {
      Rng r(9, t, Channel::Perturbation);
      const auto f = m.fixture(r);
      REQUIRE(f.dropped_channels.size() == 5);
      CHECK(std::set<std::size_t>(f.dropped_channels.begin(), f.dropped_channels.end()).size() == 5);
      CHECK(std::is_sorted(f.dropped_channels.begin(), f.dropped_channels.end()));
      CHECK(f.dropped_channels.back() < 21);
    }
    c.perturbation.dropped_count = 22;
    CHECK_THROWS_AS(F110Model{c}, InvalidArgument);
  }

  TEST_CASE("zero steering, no noise: straight-line trace") {
    const F110Model m(quiet_f110());
    const ConstantController zero("zero", 21, {0.0});
    const auto r = run_trial(m, zero, {4, 2, 20});
    const auto& x = r.states;
    REQUIRE(x.size() == 21);
    for (std::size_t t = 1; t <= 20; ++t) {
      CHECK(x[t][0] == doctest::Approx(x[0][0] + 0.1 * t * std::cos(x[0][3])).epsilon(1e-12));
      CHECK(x[t][1] == doctest::Approx(x[0][1] + 0.1 * t * std::sin(x[0][3])).epsilon(1e-12));
      CHECK(x[t][2] == 1.0);
      CHECK(x[t][3] == x[0][3]);
    }
  }

  TEST_CASE("crash freezes the rest of the trace") {
    auto c = quiet_f110();
    c.x0_lo = c.x0_hi = 8.0;
    const F110Model m(c);
    const ConstantController zero("zero", 21, {0.0});
    const auto r = run_trial(m, zero, {0, 0, 40});
    CHECK(r.terminated);
    CHECK(r.terminal_step < 40);
    for (std::size_t t = r.terminal_step; t <= 40; ++t) CHECK(r.states[t][0] == r.states[r.terminal_step][0]);
    CHECK(m.terminal(r.states[40]));
  }

  TEST_CASE("scripted wall followers clear the turn without noise") {
    const F110Model m(quiet_f110());
    const auto spec = wall_spec(m);
    for (const char* id : {"wall_follow_wide", "wall_follow_mid", "wall_follow_tight"}) {
      const auto ctl = make_scripted(id, m);
      const auto costs = monte_carlo_costs(m, *ctl, spec, {1, 20, 110, 0, 1});
      for (double z : costs) CHECK(z < 0.0);
    }
  }

  TEST_CASE("wall distance from a scan") {
    LidarConfig l;
    l.noise_halfwidth = 0.0;
    const WallFollowController w("w", l, 0.75, {20.0, 0.0, 1.0});
    const auto map = corridor(0.75, 100.0);
    const auto scan = lidar_ground_truth({5.0, 0.0, 1.0, 0.0}, map, l);
    CHECK(w.wall_distance(scan) == doctest::Approx(0.75).epsilon(1e-3));
    std::vector<double> u(1);
    w.act(scan, u);
    CHECK(std::abs(u[0]) < 0.1);
    CHECK_THROWS_AS(w.wall_distance(std::vector<double>(3, 1.0)), DimensionMismatch);
  }
}

TEST_SUITE("uuv") {
  TEST_CASE("equilibrium and frozen position") {
    const UuvState s{1.0, 20.0, 0.2, 1.5, 45.0};
    const auto n = uuv_step(s, {0.2, 1.5, 45.0}, 0.5);
    CHECK(n.theta == 0.2);
    CHECK(n.v == 1.5);
    CHECK(n.depth == 45.0);
    CHECK(n.x == doctest::Approx(1.0 + 0.75 * std::cos(0.2)));
    CHECK(n.y == doctest::Approx(20.0 + 0.75 * std::sin(0.2)));
    const auto z = uuv_step({1.0, 2.0, 0.3, 0.0, 10.0}, {0.3, 0.0, 10.0}, 0.5);
    CHECK(z.x == 1.0);
    CHECK(z.y == 2.0);
  }

  TEST_CASE("first-order step response") {
    const UuvParams p;
    UuvState s{0, 0, 0, 1.0, 40.0};
    for (int k = 1; k <= 40; ++k) {
      s = uuv_step(s, {0.5, 2.0, 50.0}, 0.5, p);
      CHECK(std::abs(s.theta - 0.5 * (1.0 - std::exp(-0.5 * k / p.tau_heading))) <= 1e-9);
      CHECK(std::abs(s.v - (2.0 - std::exp(-0.5 * k / p.tau_speed))) <= 1e-9);
      CHECK(std::abs(s.depth - (50.0 - 10.0 * std::exp(-0.5 * k / p.tau_depth))) <= 1e-9);
    }
  }

  TEST_CASE("sonar") {
    Rng r(1);
    CHECK(sonar_observe({0, 0, 0.1, 1, 1}, 0.0, 0.0, r)[0] == 0.0);
    const auto o = sonar_observe({0, -30, 0.1, 1, 1}, 0.0, 0.0, r);
    CHECK(o[0] == 30.0);
    CHECK(o[1] == 0.1);
    CHECK_THROWS_AS(sonar_observe({}, -1.0, 0.0, r), InvalidArgument);
    const int n = 100000;
    double sd = 0, sd2 = 0, st = 0, st2 = 0;
    for (int i = 0; i < n; ++i) {
      const auto y = sonar_observe({0, 30, 0.2, 1, 1}, 0.5, 0.01, r);
      sd += y[0] - 30.0;
      sd2 += (y[0] - 30.0) * (y[0] - 30.0);
      st += y[1] - 0.2;
      st2 += (y[1] - 0.2) * (y[1] - 0.2);
    }
    CHECK(std::abs(sd / n) < 3.0 * 0.5 / std::sqrt(n));
    CHECK(std::abs(st / n) < 3.0 * 0.01 / std::sqrt(n));
    // variance of the sample variance for a normal is 2σ⁴/(n−1)
    CHECK(std::abs(sd2 / n - 0.25) < 3.0 * std::sqrt(2.0 / n) * 0.25);
    CHECK(std::abs(st2 / n - 1e-4) < 3.0 * std::sqrt(2.0 / n) * 1e-4);
  }

  TEST_CASE("trackers keep their standoff") {
    const UuvModel m;
    UuvConfig quiet;
    quiet.sigma_d = 0.0;
    quiet.sigma_theta = 0.0;
    const UuvModel q(quiet);
    for (auto [id, target] : {std::pair{"tracker_far", 30.0}, {"tracker_mid", 20.0}, {"tracker_near", 12.0}}) {
      const auto ctl = make_scripted(id, q);
      const auto r = run_trial(q, *ctl, {0, 0, 360});
      CHECK(std::abs(std::abs(r.states[360][1]) - target) < 1.0);
    }
    CHECK(m.name() == "uuv_linear");
  }
}

TEST_SUITE("nn") {
  TEST_CASE("zero and identity networks") {
    const NNWeights zero({{{{0, 0}, {0, 0}}, {0, 0}, Activation::Tanh}, {{{0, 0}}, {0}, Activation::Linear}});
    CHECK(nn_forward(zero, std::vector<double>{3, -1}) == std::vector<double>{0.0});
    const NNWeights id({{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {0, 0, 0}, Activation::Linear}});
    CHECK(nn_forward(id, std::vector<double>{1.5, -2, 7}) == std::vector<double>{1.5, -2, 7});
    CHECK_THROWS_AS(nn_forward(id, std::vector<double>{1.0}), DimensionMismatch);
    CHECK_THROWS_AS(NNWeights({{{{1.0}}, {0.0}, Activation::Tanh}}), InvalidArgument);
    CHECK_THROWS_AS(NNWeights({{{{1.0, 2.0}}, {0.0}, Activation::Tanh}, {{{1.0, 2.0}}, {0.0}, Activation::Linear}}),
                    DimensionMismatch);
  }

  TEST_CASE("random tanh networks against a duplicate evaluator") {
    Rng r(4);
    std::mt19937_64 g(4);
    std::normal_distribution<double> n;
    for (int k = 0; k < 50; ++k) {
      const auto w = random_tanh_network(21, {64, 64}, 1, r);
      CHECK(w.layers().size() == 3);
      std::vector<double> in(21);
      for (auto& v : in) v = n(g);
      const auto a = nn_forward(w, in);
      const auto b = forward_oracle(w, in);
      CHECK(std::abs(a[0] - b[0]) <= 1e-12);
    }
  }

  TEST_CASE("json round trip and controller") {
    Rng r(2);
    const auto w = random_tanh_network(2, {32, 32}, 3, r);
    const auto back = nn_from_json(nlohmann::json::parse(nn_to_json(w).dump()));
    CHECK(nn_forward(back, std::vector<double>{0.3, -0.2}) == nn_forward(w, std::vector<double>{0.3, -0.2}));
    const NNController c("nn", w);
    std::vector<double> u(3);
    c.act(std::vector<double>{0.3, -0.2}, u);
    CHECK(u == nn_forward(w, std::vector<double>{0.3, -0.2}));
    CHECK_THROWS_AS(nn_from_json(nlohmann::json::parse(R"({"layers": [{"w": [[1]], "b": [0], "act": "relu"}]})")),
                    InvalidArgument);
    CHECK_THROWS_AS(load_nn("/nonexistent/weights.json"), InvalidArgument);
  }
}

TEST_SUITE("linear systems") {
  TEST_CASE("ball sampling") {
    Rng r(6);
    double far = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const auto d = uniform_in_ball(2, 0.3, r);
      const double n = std::hypot(d[0], d[1]);
      CHECK(n <= 0.3 + 1e-15);
      far = std::max(far, n);
    }
    CHECK(far > 0.29);
  }

  TEST_CASE("perturbed disturbance stays in the nominal ball") {
    LinearConfig c;
    c.a = {{0.5, 0.0}, {0.0, 0.5}};
    c.perturbed = true;
    c.process_shift = {0.5, {0.08, 0.0}};
    const LinearModel m(c);
    CHECK(m.name() == "linear_perturbed");
    Rng p(1), q(2);
    std::vector<double> next(2);
    for (int i = 0; i < 5000; ++i) {
      m.step(std::vector<double>{0.0, 0.0}, std::vector<double>{0.0}, p, q, next);
      CHECK(std::hypot(next[0], next[1]) <= c.disturbance_radius + 1e-12);
    }
  }

  TEST_CASE("config from JSON") {
    const auto c = linear_config_from_json(nlohmann::json::parse(R"({"a": [[0.5]], "b": [[1]], "disturbance_radius": 0.2})"));
    CHECK(c.disturbance_radius == 0.2);
    CHECK_THROWS_AS(linear_config_from_json(nlohmann::json::parse(R"({"a": [[0.5]], "q": 1})")), InvalidArgument);
    CHECK_THROWS_AS(LinearModel(linear_config_from_json(nlohmann::json::parse(R"({"a": [[0.5, 1]]})"))), DimensionMismatch);
  }

  TEST_CASE("blow-up is reported with its trial index") {
    LinearConfig c;
    c.a = {{1e200}};
    const LinearModel m(c);
    const ConstantController zero("zero", 1, {0.0});
    CHECK_THROWS_AS(run_trial(m, zero, {0, 3, 10}), NumericBlowup);
    const RobustnessSpec spec{stl::ConstraintSpec{stl::PredicateAtom::halfspace("p", {1.0}, 0.0), std::nullopt}, {}};
    try {
      monte_carlo_costs(m, zero, spec, {0, 4, 10, 7, 2});
      FAIL("expected a TrialError");
    } catch (const TrialError& e) {
      CHECK(e.trial() == 7);
    }
  }
}

TEST_SUITE("trials") {
  TEST_CASE("determinism and index dependence") {
    const F110Model m;
    const auto ctl = make_scripted("wall_follow_mid", m);
    const auto a = run_trial(m, *ctl, {5, 3, 50});
    const auto b = run_trial(m, *ctl, {5, 3, 50});
    const auto c = run_trial(m, *ctl, {5, 4, 50});
    bool same = true, differ = false;
    for (std::size_t t = 0; t <= 50; ++t)
      for (std::size_t k = 0; k < 4; ++k) {
        same = same && a.states[t][k] == b.states[t][k];
        differ = differ || a.states[t][k] != c.states[t][k];
      }
    CHECK(same);
    CHECK(differ);
    CHECK_THROWS_AS(run_trial(m, *ctl, {5, 3, 0}), InvalidArgument);
    const ConstantController wrong("w", 3, {0.0});
    CHECK_THROWS_AS(run_trial(m, wrong, {5, 3, 5}), DimensionMismatch);
  }

  TEST_CASE("recorded controls") {
    const F110Model m;
    const auto ctl = make_scripted("wall_follow_mid", m);
    const auto r = run_trial(m, *ctl, {1, 1, 30}, true);
    CHECK(r.controls.size() == 30);
    CHECK(run_trial(m, *ctl, {1, 1, 30}).controls.empty());
  }

  TEST_CASE("paired rollouts share their randomness") {
    const F110Model nominal;
    const auto ctl = make_scripted("wall_follow_wide", nominal);
    const auto [x, y] = run_paired(nominal, nominal, *ctl, {2, 0, 110});
    CHECK(gap::trace_difference(x, y) == 0.0);

    F110Config oc;
    oc.perturbation.kind = LidarPerturbation::Kind::ObservationOffset;
    oc.perturbation.offset = 0.3;
    const F110Model offset(oc);
    const ConstantController zero("zero", 21, {0.2});
    const auto [p, q] = run_paired(nominal, offset, zero, {2, 1, 60});
    CHECK(gap::trace_difference(p, q) == 0.0);
  }

  TEST_CASE("dropped-ray gamma equals a loop over paired traces") {
    F110Config dc;
    dc.perturbation.kind = LidarPerturbation::Kind::DroppedRays;
    const F110Model nominal, dropped(dc);
    const auto ctl = make_scripted("wall_follow_mid", nominal);
    const auto spec = wall_spec(nominal);
    const auto pr = paired_monte_carlo(nominal, dropped, *ctl, spec, {8, 30, 110, 0, 2});
    REQUIRE(pr.gamma.size() == 30);
    int nonzero = 0;
    for (std::size_t i = 0; i < 30; ++i) {
      const auto [x, y] = run_paired(nominal, dropped, *ctl, {8, i, 110});
      double best = 0.0;
      for (std::size_t t = 0; t < x.size(); ++t) {
        double s = 0.0;
        for (std::size_t k = 0; k < 4; ++k) s += (x[t][k] - y[t][k]) * (x[t][k] - y[t][k]);
        best = std::max(best, std::sqrt(s));
      }
      CHECK(pr.gamma[i] == doctest::Approx(best).epsilon(1e-14));
      CHECK(pr.nominal_costs[i] == spec.cost(x));
      CHECK(pr.perturbed_costs[i] == spec.cost(y));
      nonzero += best > 0.0;
    }
    CHECK(nonzero > 0);
    const auto w = paired_monte_carlo(nominal, dropped, *ctl, spec, {8, 30, 110, 0, 2}, {1, 1, 0, 0});
    for (std::size_t i = 0; i < 30; ++i) CHECK(w.gamma[i] <= pr.gamma[i]);
  }

  TEST_CASE("monte carlo: serial equals parallel, n = 1, deterministic scene") {
    const F110Model m;
    const auto ctl = make_scripted("wall_follow_tight", m);
    const auto spec = wall_spec(m);
    const auto serial = monte_carlo_costs(m, *ctl, spec, {3, 40, 110, 0, 1});
    const auto parallel = monte_carlo_costs(m, *ctl, spec, {3, 40, 110, 0, 4});
    CHECK(serial == parallel);
    const auto tail = monte_carlo_costs(m, *ctl, spec, {3, 10, 110, 30, 3});
    CHECK(std::equal(tail.begin(), tail.end(), serial.begin() + 30));
    CHECK(monte_carlo(m, *ctl, spec, {3, 1, 110, 0, 1}).size() == 1);

    auto c = quiet_f110();
    c.x0_lo = c.x0_hi = 3.0;
    c.y0_halfwidth = 0.0;
    c.theta0_halfwidth = 0.0;
    const F110Model still(c);
    const ConstantController zero("zero", 21, {0.0});
    const auto costs = monte_carlo_costs(still, zero, wall_spec(still), {3, 25, 40, 0, 2});
    for (double z : costs) CHECK(z == costs.front());
    CHECK(costs.front() == doctest::Approx(-0.75));
    const auto cmds = monte_carlo_commands(still, zero, {3, 5, 40, 0, 1});
    CHECK(cmds.size() == 200);
  }

  TEST_CASE("STL cost on the UUV") {
    const UuvModel m;
    const auto ctl = make_scripted("tracker_mid", m);
    stl::PredicateTable t;
    t.emplace("far", stl::PredicateAtom::halfspace("far", {1.0}, 10.0).with_indices({1}));
    const RobustnessSpec spec{stl::parse_formula("G[0,20] far", t), {}};
    const auto r = run_trial(m, *ctl, {1, 0, 20});
    double m20 = INFINITY;
    for (std::size_t k = 0; k <= 20; ++k) m20 = std::min(m20, r.states[k][1] - 10.0);
    CHECK(spec.cost(r.states) == doctest::Approx(-m20));
  }

  TEST_CASE("scripted ids") {
    const F110Model f;
    const UuvModel u;
    const ScalarLipschitzModel s({});
    CHECK(scripted_ids(f).size() == 4);
    CHECK(make_scripted("tracker_far", u)->output_dim() == 3);
    CHECK(make_scripted("gain:0.5", s)->name() == "gain:0.5");
    CHECK_THROWS_AS(make_scripted("tracker_far", f), InvalidArgument);
    CHECK_THROWS_AS(make_scripted("gain:abc", s), InvalidArgument);
    CHECK(resolve_jobs(3) == 3);
    CHECK(resolve_jobs(0) >= 1);
  }
}
