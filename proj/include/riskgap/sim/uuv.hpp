#pragma once

#include <array>
#include <span>
#include <vector>

#include "riskgap/sim/system.hpp"

namespace riskgap::sim {

/// [x y θ v depth]; the pipeline is the line y = 0.
struct UuvState {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  double v = 0.0;
  double depth = 0.0;
};

struct UuvCommands {
  double heading = 0.0;
  double speed = 0.0;
  double depth = 0.0;
};

struct UuvParams {
  double tau_heading = 1.5;  ///< s
  double tau_speed = 2.0;    ///< s
  double tau_depth = 3.0;    ///< s
};

/// Heading, speed and depth follow their commands through exact first-order lags;
/// position integrates the pre-step speed and heading (forward Euler).
UuvState uuv_step(const UuvState& s, const UuvCommands& c, double dt, const UuvParams& p = {});

/// (d, θ) with d = |y| (distance to the pipeline) plus Gaussian noise on both channels.
/// Always draws two normals.
std::array<double, 2> sonar_observe(const UuvState& s, double sigma_d, double sigma_theta, Rng& rng);

/// Stand-in for the high-fidelity engine: lag time constants stretched in proportion to the
/// command error, plus Gaussian position noise drawn from the perturbation stream.
struct UuvPerturbation {
  enum class Kind { None, LagError, ObservationOffset };
  Kind kind = Kind::None;
  double lag_gain = 0.5;        ///< τ_eff = τ (1 + lag_gain·|command − state|)
  double position_sigma = 0.05; ///< m per step
  double offset = 0.0;          ///< added to the observed distance
};

struct UuvConfig {
  UuvParams params;
  double dt = 0.5;
  double sigma_d = 0.5;
  double sigma_theta = 0.01;
  double y0_lo = 20.0;
  double y0_hi = 40.0;
  double theta0_halfwidth = 0.2;
  double speed0 = 1.5;
  double depth0 = 45.0;
  double process_noise_scale = 1.0;
  UuvPerturbation perturbation;
};

/// Control [heading, speed, depth commands]; observation [d, θ].
class UuvModel final : public SystemModel {
 public:
  explicit UuvModel(UuvConfig cfg = {});

  std::string name() const override;
  std::size_t state_dim() const override { return 5; }
  std::size_t obs_dim() const override { return 2; }
  std::size_t control_dim() const override { return 3; }
  double dt() const override { return cfg_.dt; }

  std::vector<double> initial_state(Rng& rng) const override;
  void step(std::span<const double> x, std::span<const double> u, Rng& process, Rng& perturbation,
            std::span<double> next) const override;
  void observe(std::span<const double> x, const TrialFixture& fixture, Rng& measurement,
               Rng& perturbation, std::span<double> y) const override;

  const UuvConfig& config() const noexcept { return cfg_; }

 private:
  UuvConfig cfg_;
};

/// Proportional pipeline tracker: heading command −gain·(d − target), saturated.
class PipelineTracker final : public Controller {
 public:
  PipelineTracker(std::string name, double target_distance, double gain = 0.05,
                  double max_heading = 0.6, double speed = 1.5, double depth = 45.0);
  std::string name() const override { return name_; }
  std::size_t input_dim() const override { return 2; }
  std::size_t output_dim() const override { return 3; }
  void act(std::span<const double> y, std::span<double> u) const override;

 private:
  std::string name_;
  double target_;
  double gain_;
  double max_heading_;
  double speed_;
  double depth_;
};

}  // namespace riskgap::sim
