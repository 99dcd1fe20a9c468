#include "riskgap/sim/uuv.hpp"

#include <algorithm>
#include <cmath>

#include "riskgap/errors.hpp"

namespace riskgap::sim {
namespace {

double lag(double state, double command, double dt, double tau) {
  return command + (state - command) * std::exp(-dt / tau);
}

}  // namespace

UuvState uuv_step(const UuvState& s, const UuvCommands& c, double dt, const UuvParams& p) {
  UuvState n;
  n.x = s.x + s.v * std::cos(s.theta) * dt;
  n.y = s.y + s.v * std::sin(s.theta) * dt;
  n.theta = lag(s.theta, c.heading, dt, p.tau_heading);
  n.v = lag(s.v, c.speed, dt, p.tau_speed);
  n.depth = lag(s.depth, c.depth, dt, p.tau_depth);
  return n;
}

std::array<double, 2> sonar_observe(const UuvState& s, double sigma_d, double sigma_theta, Rng& rng) {
  if (!(sigma_d >= 0.0) || !(sigma_theta >= 0.0)) throw InvalidArgument("sonar sigma must be nonnegative");
  const double nd = rng.normal(0.0, 1.0);
  const double nt = rng.normal(0.0, 1.0);
  return {std::abs(s.y) + sigma_d * nd, s.theta + sigma_theta * nt};
}

UuvModel::UuvModel(UuvConfig cfg) : cfg_(cfg) {
  if (!(cfg_.dt > 0.0)) throw InvalidArgument("dt must be positive");
  const auto& p = cfg_.params;
  if (!(p.tau_heading > 0.0 && p.tau_speed > 0.0 && p.tau_depth > 0.0))
    throw InvalidArgument("UUV time constants must be positive");
}

std::string UuvModel::name() const {
  switch (cfg_.perturbation.kind) {
    case UuvPerturbation::Kind::None: return "uuv_linear";
    case UuvPerturbation::Kind::LagError: return "uuv_lag_error";
    case UuvPerturbation::Kind::ObservationOffset: return "uuv_offset";
  }
  return "uuv";
}

std::vector<double> UuvModel::initial_state(Rng& rng) const {
  const double y = rng.uniform(cfg_.y0_lo, cfg_.y0_hi);
  const double th = rng.uniform(-cfg_.theta0_halfwidth, cfg_.theta0_halfwidth);
  return {0.0, y, th, cfg_.speed0, cfg_.depth0};
}

void UuvModel::step(std::span<const double> x, std::span<const double> u, Rng& /*process*/,
                    Rng& perturbation, std::span<double> next) const {
  const UuvState s{x[0], x[1], x[2], x[3], x[4]};
  const UuvCommands c{u[0], u[1], u[2]};
  UuvParams p = cfg_.params;
  const auto& pert = cfg_.perturbation;
  if (pert.kind == UuvPerturbation::Kind::LagError) {
    p.tau_heading *= 1.0 + pert.lag_gain * std::abs(c.heading - s.theta);
    p.tau_speed *= 1.0 + pert.lag_gain * std::abs(c.speed - s.v);
    p.tau_depth *= 1.0 + pert.lag_gain * std::abs(c.depth - s.depth);
  }
  UuvState n = uuv_step(s, c, cfg_.dt, p);
  if (pert.kind == UuvPerturbation::Kind::LagError) {
    const double sigma = pert.position_sigma * cfg_.process_noise_scale;
    n.x += perturbation.normal(0.0, 1.0) * sigma;
    n.y += perturbation.normal(0.0, 1.0) * sigma;
  }
  next[0] = n.x;
  next[1] = n.y;
  next[2] = n.theta;
  next[3] = n.v;
  next[4] = n.depth;
}

void UuvModel::observe(std::span<const double> x, const TrialFixture& /*fixture*/, Rng& measurement,
                       Rng& /*perturbation*/, std::span<double> y) const {
  const UuvState s{x[0], x[1], x[2], x[3], x[4]};
  const auto obs = sonar_observe(s, cfg_.sigma_d, cfg_.sigma_theta, measurement);
  y[0] = obs[0];
  y[1] = obs[1];
  if (cfg_.perturbation.kind == UuvPerturbation::Kind::ObservationOffset) y[0] += cfg_.perturbation.offset;
}

PipelineTracker::PipelineTracker(std::string name, double target_distance, double gain,
                                 double max_heading, double speed, double depth)
    : name_(std::move(name)),
      target_(target_distance),
      gain_(gain),
      max_heading_(max_heading),
      speed_(speed),
      depth_(depth) {}

void PipelineTracker::act(std::span<const double> y, std::span<double> u) const {
  u[0] = std::clamp(-gain_ * (y[0] - target_), -max_heading_, max_heading_);
  u[1] = speed_;
  u[2] = depth_;
}

}  // namespace riskgap::sim
