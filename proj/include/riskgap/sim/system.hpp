#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "riskgap/sim/rng.hpp"

namespace riskgap::sim {

/// Randomness drawn once per trial and held fixed for the whole rollout.
struct TrialFixture {
  std::vector<std::size_t> dropped_channels;
};

/// X(t+1) = f(X(t), u, V(t)), Y(t) = g(X(t), W(t)).
/// step/observe are deterministic given the streams they draw from. A perturbed variant must
/// draw the same count from each channel that its nominal counterpart draws, so paired rollouts
/// see common random numbers.
class SystemModel {
 public:
  virtual ~SystemModel() = default;

  virtual std::string name() const = 0;
  virtual std::size_t state_dim() const = 0;
  virtual std::size_t obs_dim() const = 0;
  virtual std::size_t control_dim() const = 0;
  virtual double dt() const = 0;

  virtual std::vector<double> initial_state(Rng& rng) const = 0;
  virtual TrialFixture fixture(Rng& /*perturbation*/) const { return {}; }
  virtual void step(std::span<const double> x, std::span<const double> u, Rng& process,
                    Rng& perturbation, std::span<double> next) const = 0;
  virtual void observe(std::span<const double> x, const TrialFixture& fixture, Rng& measurement,
                       Rng& perturbation, std::span<double> y) const = 0;
  /// A terminal state (e.g. a crash) freezes the rest of the rollout.
  virtual bool terminal(std::span<const double> /*x*/) const { return false; }
};

class Controller {
 public:
  virtual ~Controller() = default;
  virtual std::string name() const = 0;
  virtual std::size_t input_dim() const = 0;
  virtual std::size_t output_dim() const = 0;
  virtual void act(std::span<const double> y, std::span<double> u) const = 0;
};

}  // namespace riskgap::sim
