#include "riskgap/sim/linear.hpp"

#include <algorithm>
#include <cmath>

#include "riskgap/errors.hpp"

namespace riskgap::sim {
namespace {

void apply_shift(std::vector<double>& d, const DisturbanceShift& s, double radius) {
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = s.scale * d[i] + (s.shift.empty() ? 0.0 : s.shift[i]);
  double n = 0.0;
  for (double v : d) n += v * v;
  n = std::sqrt(n);
  if (n > radius && n > 0.0)
    for (double& v : d) v *= radius / n;
}

std::vector<std::vector<double>> matrix(const nlohmann::json& j, const char* key) {
  try {
    return j.at(key).get<std::vector<std::vector<double>>>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("model file: bad '") + key + "': " + e.what());
  }
}

}  // namespace

std::vector<double> uniform_in_ball(std::size_t dim, double radius, Rng& rng) {
  std::vector<double> d(dim);
  double n = 0.0;
  for (double& v : d) {
    v = rng.normal(0.0, 1.0);
    n += v * v;
  }
  n = std::sqrt(n);
  const double r = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(dim));
  for (double& v : d) v = n > 0.0 ? v / n * r : 0.0;
  return d;
}

LinearModel::LinearModel(LinearConfig cfg) : cfg_(std::move(cfg)) {
  const std::size_t n = cfg_.a.size();
  if (n == 0) throw InvalidArgument("linear model needs a nonempty A");
  for (const auto& row : cfg_.a)
    if (row.size() != n) throw DimensionMismatch(n, row.size());
  if (!cfg_.b.empty()) {
    if (cfg_.b.size() != n) throw DimensionMismatch(n, cfg_.b.size());
    for (const auto& row : cfg_.b)
      if (row.size() != cfg_.b.front().size()) throw DimensionMismatch(cfg_.b.front().size(), row.size());
  }
  if (!(cfg_.disturbance_radius >= 0.0) || !(cfg_.measurement_radius >= 0.0))
    throw InvalidArgument("disturbance radii must be nonnegative");
  for (const auto* s : {&cfg_.process_shift, &cfg_.measurement_shift})
    if (!s->shift.empty() && s->shift.size() != n) throw DimensionMismatch(n, s->shift.size());
  if (!cfg_.observation_offset.empty() && cfg_.observation_offset.size() != n)
    throw DimensionMismatch(n, cfg_.observation_offset.size());
}

std::vector<double> LinearModel::initial_state(Rng& rng) const {
  std::vector<double> x(state_dim());
  for (double& v : x) v = rng.uniform(-cfg_.x0_halfwidth, cfg_.x0_halfwidth);
  return x;
}

void LinearModel::step(std::span<const double> x, std::span<const double> u, Rng& process,
                       Rng& /*perturbation*/, std::span<double> next) const {
  const std::size_t n = state_dim();
  auto d = uniform_in_ball(n, cfg_.disturbance_radius, process);
  if (cfg_.perturbed) apply_shift(d, cfg_.process_shift, cfg_.disturbance_radius);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = d[i];
    for (std::size_t j = 0; j < n; ++j) acc += cfg_.a[i][j] * x[j];
    if (!cfg_.b.empty())
      for (std::size_t j = 0; j < u.size(); ++j) acc += cfg_.b[i][j] * u[j];
    next[i] = acc;
  }
}

void LinearModel::observe(std::span<const double> x, const TrialFixture& /*fixture*/, Rng& measurement,
                          Rng& /*perturbation*/, std::span<double> y) const {
  auto w = uniform_in_ball(state_dim(), cfg_.measurement_radius, measurement);
  if (cfg_.perturbed) apply_shift(w, cfg_.measurement_shift, cfg_.measurement_radius);
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + w[i];
  if (cfg_.perturbed && !cfg_.observation_offset.empty())
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += cfg_.observation_offset[i];
}

LinearConfig linear_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidArgument("model file must be a JSON object");
  static const char* allowed[] = {"a", "b", "disturbance_radius", "measurement_radius",
                                  "x0_halfwidth", "dt"};
  for (const auto& [k, _] : j.items())
    if (std::find_if(std::begin(allowed), std::end(allowed), [&](const char* a) { return k == a; }) ==
        std::end(allowed))
      throw InvalidArgument("model file: unknown key '" + k + "'");
  LinearConfig c;
  c.a = matrix(j, "a");
  if (j.contains("b")) c.b = matrix(j, "b");
  c.disturbance_radius = j.value("disturbance_radius", c.disturbance_radius);
  c.measurement_radius = j.value("measurement_radius", c.measurement_radius);
  c.x0_halfwidth = j.value("x0_halfwidth", c.x0_halfwidth);
  c.dt = j.value("dt", c.dt);
  return c;
}

std::vector<double> ScalarLipschitzModel::initial_state(Rng& rng) const {
  return {rng.uniform(-cfg_.x0_halfwidth, cfg_.x0_halfwidth)};
}

double ScalarLipschitzModel::map_noise(double d, double bound) const {
  if (!cfg_.perturbed) return d;
  return std::clamp(cfg_.scale * d + cfg_.shift, -bound, bound);
}

void ScalarLipschitzModel::step(std::span<const double> x, std::span<const double> u, Rng& process,
                                Rng& /*perturbation*/, std::span<double> next) const {
  const double v = map_noise(process.uniform(-cfg_.v_max, cfg_.v_max), cfg_.v_max);
  next[0] = cfg_.a * std::sin(x[0]) + cfg_.b * u[0] + cfg_.c * v;
}

void ScalarLipschitzModel::observe(std::span<const double> x, const TrialFixture& /*fixture*/,
                                   Rng& measurement, Rng& /*perturbation*/, std::span<double> y) const {
  const double w = map_noise(measurement.uniform(-cfg_.w_max, cfg_.w_max), cfg_.w_max);
  y[0] = cfg_.g1 * std::cos(x[0]) + cfg_.g2 * w;
}

}  // namespace riskgap::sim
