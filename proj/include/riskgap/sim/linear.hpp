#pragma once

#include <span>
#include <vector>

#include "json.hpp"
#include "riskgap/sim/system.hpp"

namespace riskgap::sim {

/// Maps a nominal disturbance draw d to the perturbed one, clamp(scale·d + shift) into the
/// nominal disturbance set, so both systems share the same disturbance bound.
struct DisturbanceShift {
  double scale = 1.0;
  std::vector<double> shift;  ///< empty means zero
};

struct LinearConfig {
  std::vector<std::vector<double>> a;  ///< n × n
  std::vector<std::vector<double>> b;  ///< n × m, may be empty (autonomous)
  double disturbance_radius = 0.1;     ///< process disturbance uniform in the Euclidean ball
  double measurement_radius = 0.0;     ///< y = x + w, w uniform in the Euclidean ball
  double x0_halfwidth = 1.0;           ///< x0 uniform in the box [−h, h]^n
  double dt = 1.0;
  bool perturbed = false;
  DisturbanceShift process_shift;
  DisturbanceShift measurement_shift;
  std::vector<double> observation_offset;  ///< added to y when perturbed; empty means zero
};

/// x(t+1) = A x + B u + d, y = x + w.
class LinearModel final : public SystemModel {
 public:
  explicit LinearModel(LinearConfig cfg);

  std::string name() const override { return cfg_.perturbed ? "linear_perturbed" : "linear"; }
  std::size_t state_dim() const override { return cfg_.a.size(); }
  std::size_t obs_dim() const override { return cfg_.a.size(); }
  std::size_t control_dim() const override { return cfg_.b.empty() ? 1 : cfg_.b.front().size(); }
  double dt() const override { return cfg_.dt; }

  std::vector<double> initial_state(Rng& rng) const override;
  void step(std::span<const double> x, std::span<const double> u, Rng& process, Rng& perturbation,
            std::span<double> next) const override;
  void observe(std::span<const double> x, const TrialFixture& fixture, Rng& measurement,
               Rng& perturbation, std::span<double> y) const override;

  const LinearConfig& config() const noexcept { return cfg_; }

 private:
  LinearConfig cfg_;
};

/// Model file for `custom` systems: {"a": [[..]], "b": [[..]], "disturbance_radius": r, ...}.
LinearConfig linear_config_from_json(const nlohmann::json& j);

/// Uniform draw from the Euclidean ball; consumes dim normals and one uniform.
std::vector<double> uniform_in_ball(std::size_t dim, double radius, Rng& rng);

/// Scalar system with known Lipschitz constants:
///   x(t+1) = a·sin(x) + b·u + c·v,   y = g1·cos(x) + g2·w,
/// v ~ U[−v_max, v_max], w ~ U[−w_max, w_max].
/// Perturbed variant maps v, w through clamp(scale·d + shift) inside the same intervals.
struct ScalarLipschitzConfig {
  double a = 0.5;
  double b = 1.0;
  double c = 1.0;
  double g1 = 0.5;
  double g2 = 1.0;
  double v_max = 0.0;
  double w_max = 0.05;
  double x0_halfwidth = 1.0;
  bool perturbed = false;
  double scale = 1.0;
  double shift = 0.0;
};

class ScalarLipschitzModel final : public SystemModel {
 public:
  explicit ScalarLipschitzModel(ScalarLipschitzConfig cfg) : cfg_(cfg) {}

  std::string name() const override { return cfg_.perturbed ? "scalar_perturbed" : "scalar"; }
  std::size_t state_dim() const override { return 1; }
  std::size_t obs_dim() const override { return 1; }
  std::size_t control_dim() const override { return 1; }
  double dt() const override { return 1.0; }

  std::vector<double> initial_state(Rng& rng) const override;
  void step(std::span<const double> x, std::span<const double> u, Rng& process, Rng& perturbation,
            std::span<double> next) const override;
  void observe(std::span<const double> x, const TrialFixture& fixture, Rng& measurement,
               Rng& perturbation, std::span<double> y) const override;

  const ScalarLipschitzConfig& config() const noexcept { return cfg_; }

 private:
  double map_noise(double d, double bound) const;
  ScalarLipschitzConfig cfg_;
};

}  // namespace riskgap::sim
