#include "riskgap/sim/bicycle.hpp"

#include <algorithm>
#include <cmath>

#include "riskgap/errors.hpp"

namespace riskgap::sim {

double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  else if (a > std::numbers::pi) a -= two_pi;
  return a;
}

BicycleState bicycle_step(const BicycleState& s, double steering, double dt, const BicycleParams& p) {
  const double delta = std::clamp(steering, -p.max_steering, p.max_steering);
  BicycleState n = s;
  n.x += s.v * std::cos(s.theta) * dt;
  n.y += s.v * std::sin(s.theta) * dt;
  n.theta = wrap_angle(s.theta + s.v / p.wheelbase * std::tan(delta) * dt);
  if (p.speed_time_constant > 0.0)
    n.v = p.speed_command + (s.v - p.speed_command) * std::exp(-dt / p.speed_time_constant);
  return n;
}

double LidarConfig::ray_angle(std::size_t i) const {
  if (rays == 1) return 0.0;
  return -fov / 2.0 + fov * static_cast<double>(i) / static_cast<double>(rays - 1);
}

void LidarConfig::validate() const {
  if (rays == 0) throw InvalidArgument("lidar needs at least one ray");
  if (!(max_range > 0.0)) throw InvalidArgument("lidar max_range must be positive");
  if (!(noise_halfwidth >= 0.0)) throw InvalidArgument("lidar noise must be nonnegative");
  for (std::size_t d : dropped)
    if (d >= rays) throw InvalidArgument("dropped ray index out of range");
}

std::vector<double> lidar_ground_truth(const BicycleState& s, const WallMap& map,
                                       const LidarConfig& cfg) {
  if (!map.inside({s.x, s.y})) throw OutsideMap();
  std::vector<double> out(cfg.rays);
  for (std::size_t i = 0; i < cfg.rays; ++i)
    out[i] = map.ray_cast({s.x, s.y}, s.theta + cfg.ray_angle(i), cfg.max_range);
  return out;
}

std::vector<double> lidar_scan(const BicycleState& s, const WallMap& map, const LidarConfig& cfg,
                               Rng& rng) {
  std::vector<double> out = lidar_ground_truth(s, map, cfg);
  for (std::size_t i = 0; i < cfg.rays; ++i) {
    const double u = rng.uniform(-1.0, 1.0);
    out[i] = std::clamp(out[i] + cfg.noise_halfwidth * u, 0.0, cfg.max_range);
  }
  for (std::size_t d : cfg.dropped) out[d] = cfg.max_range;
  return out;
}

F110Model::F110Model(F110Config cfg, std::optional<WallMap> map)
    : cfg_(std::move(cfg)), map_(map ? std::move(*map) : WallMap::hallway(cfg_.hallway)) {
  cfg_.lidar.validate();
  if (!(cfg_.dt > 0.0)) throw InvalidArgument("dt must be positive");
  if (!(cfg_.command_scale > 0.0)) throw InvalidArgument("command_scale must be positive");
  if (cfg_.perturbation.kind == LidarPerturbation::Kind::DroppedRays &&
      cfg_.perturbation.dropped_count > cfg_.lidar.rays)
    throw InvalidArgument("cannot drop more rays than the lidar has");
}

std::string F110Model::name() const {
  switch (cfg_.perturbation.kind) {
    case LidarPerturbation::Kind::None: return "f110_nominal";
    case LidarPerturbation::Kind::DroppedRays: return "f110_dropped_rays";
    case LidarPerturbation::Kind::Structured: return "f110_structured";
    case LidarPerturbation::Kind::ObservationOffset: return "f110_offset";
  }
  return "f110";
}

double F110Model::steering_from_command(double command) const {
  const double c = std::clamp(command, -cfg_.command_scale, cfg_.command_scale);
  return c / cfg_.command_scale * cfg_.bicycle.max_steering;
}

std::vector<double> F110Model::initial_state(Rng& rng) const {
  const double x = rng.uniform(cfg_.x0_lo, cfg_.x0_hi);
  const double y = rng.uniform(-cfg_.y0_halfwidth, cfg_.y0_halfwidth);
  const double th = rng.uniform(-cfg_.theta0_halfwidth, cfg_.theta0_halfwidth);
  return {x, y, cfg_.bicycle.speed_command, th};
}

TrialFixture F110Model::fixture(Rng& perturbation) const {
  TrialFixture f;
  if (cfg_.perturbation.kind != LidarPerturbation::Kind::DroppedRays) return f;
  // Partial Fisher–Yates: the first k entries are a uniform k-subset.
  std::vector<std::size_t> idx(cfg_.lidar.rays);
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  for (std::size_t i = 0; i < cfg_.perturbation.dropped_count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(perturbation.below(idx.size() - i));
    std::swap(idx[i], idx[j]);
  }
  f.dropped_channels.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(cfg_.perturbation.dropped_count));
  std::sort(f.dropped_channels.begin(), f.dropped_channels.end());
  return f;
}

void F110Model::step(std::span<const double> x, std::span<const double> u, Rng& process,
                     Rng& /*perturbation*/, std::span<double> next) const {
  BicycleState s{x[0], x[1], x[2], x[3]};
  BicycleState n = bicycle_step(s, steering_from_command(u[0]), cfg_.dt, cfg_.bicycle);
  const double noise = process.uniform(-1.0, 1.0);
  n.theta = wrap_angle(n.theta + cfg_.heading_noise * cfg_.process_noise_scale * noise);
  next[0] = n.x;
  next[1] = n.y;
  next[2] = n.v;
  next[3] = n.theta;
}

void F110Model::observe(std::span<const double> x, const TrialFixture& fixture, Rng& measurement,
                        Rng& perturbation, std::span<double> y) const {
  const BicycleState s{x[0], x[1], x[2], x[3]};
  const auto truth = lidar_ground_truth(s, map_, cfg_.lidar);
  const auto& p = cfg_.perturbation;
  const double max_range = cfg_.lidar.max_range;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double u = measurement.uniform(-1.0, 1.0);
    double r = truth[i] + cfg_.lidar.noise_halfwidth * u;
    switch (p.kind) {
      case LidarPerturbation::Kind::None:
      case LidarPerturbation::Kind::DroppedRays: break;
      case LidarPerturbation::Kind::Structured: {
        const double phase = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(truth.size());
        r = truth[i] + p.bias_amplitude * std::cos(phase) +
            cfg_.lidar.noise_halfwidth * (1.0 + p.heteroscedastic_gain * truth[i]) * u;
        if (perturbation.uniform() < p.drop_probability) r = max_range;
        break;
      }
      case LidarPerturbation::Kind::ObservationOffset: r += p.offset; break;
    }
    y[i] = p.kind == LidarPerturbation::Kind::ObservationOffset ? r : std::clamp(r, 0.0, max_range);
  }
  for (std::size_t d : cfg_.lidar.dropped) y[d] = max_range;
  for (std::size_t d : fixture.dropped_channels) y[d] = max_range;
}

bool F110Model::terminal(std::span<const double> x) const {
  return map_.signed_distance({x[0], x[1]}) <= 0.0;
}

WallFollowController::WallFollowController(std::string name, LidarConfig lidar, double target,
                                           Gains gains)
    : name_(std::move(name)), lidar_(std::move(lidar)), target_(target), gains_(gains) {
  lidar_.validate();
  if (!(target_ > 0.0) || !(gains_.lookahead >= 0.0) || !(gains_.join_distance > 0.0))
    throw InvalidArgument("wall follower: target and join distance must be > 0, lookahead >= 0");
}

double WallFollowController::wall_distance(std::span<const double> y) const {
  if (y.size() != lidar_.rays) throw DimensionMismatch(lidar_.rays, y.size());
  const double lx = gains_.lookahead;
  double best = lidar_.max_range;
  bool have_prev = false;
  double qx = 0.0, qy = 0.0;
  for (std::size_t i = 0; i < lidar_.rays; ++i) {
    const double a = lidar_.ray_angle(i);
    if (a < 0.0 || !(y[i] < lidar_.max_range)) continue;
    const double px = y[i] * std::cos(a);
    const double py = y[i] * std::sin(a);
    best = std::min(best, std::hypot(px - lx, py));
    if (have_prev && std::hypot(px - qx, py - qy) < gains_.join_distance)
      best = std::min(best, point_segment_distance({lx, 0.0}, {{qx, qy}, {px, py}}));
    have_prev = true;
    qx = px;
    qy = py;
  }
  return best;
}

void WallFollowController::act(std::span<const double> y, std::span<double> u) const {
  u[0] = gains_.gain * (wall_distance(y) - target_);
}

}  // namespace riskgap::sim
