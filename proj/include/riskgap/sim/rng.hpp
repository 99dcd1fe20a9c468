#pragma once

#include <cstdint>
#include <random>

namespace riskgap::sim {

/// Independent randomness purposes within one trial.
enum class Channel : std::uint64_t {
  InitialState = 0,
  ProcessNoise = 1,
  MeasurementNoise = 2,
  Perturbation = 3,
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Stream seed for (master_seed, trial_index, channel). Each coordinate is folded in through
/// its own mixing round so neighbouring indices and channels give unrelated streams.
std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t trial_index, Channel channel) noexcept;

/// One random stream. Cheap to construct; owned by a single trial.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t master_seed, std::uint64_t trial_index, Channel channel)
      : Rng(stream_seed(master_seed, trial_index, channel)) {}

  /// Uniform in [0, 1) from the top 53 bits.
  double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  double normal(double mean, double sigma) { return std::normal_distribution<double>(mean, sigma)(engine_); }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) noexcept;

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// The four per-trial streams.
struct TrialStreams {
  TrialStreams(std::uint64_t master_seed, std::uint64_t trial_index)
      : initial(master_seed, trial_index, Channel::InitialState),
        process(master_seed, trial_index, Channel::ProcessNoise),
        measurement(master_seed, trial_index, Channel::MeasurementNoise),
        perturbation(master_seed, trial_index, Channel::Perturbation) {}

  Rng initial;
  Rng process;
  Rng measurement;
  Rng perturbation;
};

}  // namespace riskgap::sim
