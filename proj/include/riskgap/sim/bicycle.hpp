#pragma once

#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "riskgap/sim/geometry.hpp"
#include "riskgap/sim/system.hpp"

namespace riskgap::sim {

/// Kinematic bicycle state [x y v θ].
struct BicycleState {
  double x = 0.0;
  double y = 0.0;
  double v = 0.0;
  double theta = 0.0;
};

struct BicycleParams {
  double wheelbase = 0.32;                       ///< m
  double max_steering = std::numbers::pi / 6.0;  ///< rad
  /// 0 keeps speed constant; otherwise v relaxes toward speed_command with this time constant.
  double speed_time_constant = 0.0;
  double speed_command = 1.0;
};

/// Wraps into (−π, π].
double wrap_angle(double a);

/// One forward-Euler step with the steering angle clamped to ±max_steering.
BicycleState bicycle_step(const BicycleState& s, double steering, double dt,
                          const BicycleParams& p = {});

struct LidarConfig {
  std::size_t rays = 21;
  double fov = 1.5 * std::numbers::pi;  ///< symmetric about the heading
  double max_range = 10.0;
  double noise_halfwidth = 0.05;        ///< uniform noise on every ray
  std::vector<std::size_t> dropped;     ///< rays reading max_range for the whole trial

  /// Heading-relative angle of ray i; ray 0 is rightmost.
  double ray_angle(std::size_t i) const;
  void validate() const;
};

/// Ground-truth ranges clipped to max_range, plus uniform noise; dropped rays read max_range.
/// Draws exactly one uniform per ray. Throws OutsideMap.
std::vector<double> lidar_scan(const BicycleState& s, const WallMap& map, const LidarConfig& cfg,
                               Rng& rng);

/// Ranges without noise or dropping.
std::vector<double> lidar_ground_truth(const BicycleState& s, const WallMap& map,
                                       const LidarConfig& cfg);

/// Observation models for the car.
struct LidarPerturbation {
  enum class Kind { None, DroppedRays, Structured, ObservationOffset };
  Kind kind = Kind::None;
  std::size_t dropped_count = 5;    ///< DroppedRays
  double bias_amplitude = 0.0;      ///< Structured: ray i biased by A·cos(2πi/rays)
  double heteroscedastic_gain = 0.0;///< Structured: noise halfwidth scales with (1 + k·range)
  double drop_probability = 0.0;    ///< Structured: per-step random drop
  double offset = 0.0;              ///< ObservationOffset
};

struct F110Config {
  HallwayConfig hallway;
  BicycleParams bicycle;
  LidarConfig lidar;
  double dt = 0.1;
  double command_scale = 15.0;  ///< commands in [−scale, scale] map to ±max_steering
  double x0_lo = 3.0;
  double x0_hi = 4.0;
  double y0_halfwidth = 0.1;
  double theta0_halfwidth = 0.05;
  double heading_noise = 0.0;  ///< uniform process noise on θ per step
  double process_noise_scale = 1.0;
  LidarPerturbation perturbation;
};

/// Car in the hallway observed through LiDAR. State [x y v θ], control [steering command].
class F110Model final : public SystemModel {
 public:
  explicit F110Model(F110Config cfg = {}, std::optional<WallMap> map = std::nullopt);

  std::string name() const override;
  std::size_t state_dim() const override { return 4; }
  std::size_t obs_dim() const override { return cfg_.lidar.rays; }
  std::size_t control_dim() const override { return 1; }
  double dt() const override { return cfg_.dt; }

  std::vector<double> initial_state(Rng& rng) const override;
  TrialFixture fixture(Rng& perturbation) const override;
  void step(std::span<const double> x, std::span<const double> u, Rng& process, Rng& perturbation,
            std::span<double> next) const override;
  void observe(std::span<const double> x, const TrialFixture& fixture, Rng& measurement,
               Rng& perturbation, std::span<double> y) const override;
  bool terminal(std::span<const double> x) const override;

  const WallMap& map() const noexcept { return map_; }
  const F110Config& config() const noexcept { return cfg_; }
  double steering_from_command(double command) const;

 private:
  F110Config cfg_;
  WallMap map_;
};

/// Outer-wall follower for right-hand turns. Hit points from the left half of the scan are joined
/// into a polyline (consecutive returns closer than `join_distance`; no-return rays are skipped),
/// and the command is gain·(d − target), with d the distance from a lookahead point on the car's
/// axis to that polyline. The front wall of a turn enters the polyline early, so the car turns in.
/// Larger targets keep the car nearer the middle of the turn.
class WallFollowController final : public Controller {
 public:
  struct Gains {
    double gain = 20.0;
    double lookahead = 0.7;
    double join_distance = 1.0;
  };
  WallFollowController(std::string name, LidarConfig lidar, double target, Gains gains);
  WallFollowController(std::string name, LidarConfig lidar, double target)
      : WallFollowController(std::move(name), std::move(lidar), target, Gains{}) {}

  std::string name() const override { return name_; }
  std::size_t input_dim() const override { return lidar_.rays; }
  std::size_t output_dim() const override { return 1; }
  void act(std::span<const double> y, std::span<double> u) const override;

  /// The lookahead distance d used by act().
  double wall_distance(std::span<const double> y) const;

 private:
  std::string name_;
  LidarConfig lidar_;
  double target_;
  Gains gains_;
};

}  // namespace riskgap::sim
