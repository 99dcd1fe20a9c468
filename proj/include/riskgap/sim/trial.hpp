#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "riskgap/risk/sample_set.hpp"
#include "riskgap/sim/system.hpp"
#include "riskgap/stl/constraint.hpp"
#include "riskgap/stl/formula.hpp"
#include "riskgap/stl/semantics.hpp"
#include "riskgap/stl/trace.hpp"

namespace riskgap::sim {

/// Perturbations are carried by the model instances (a perturbed model is its own SystemModel),
/// so a trial is addressed by seed, index and length only.
struct TrialConfig {
  std::uint64_t master_seed = 0;
  std::uint64_t trial_index = 0;
  std::size_t horizon = 1;  ///< steps; the trace has horizon + 1 states

  void validate() const;
};

struct TrialResult {
  stl::Trace states;
  stl::Trace controls;  ///< u(0..horizon−1); empty unless requested
  bool terminated = false;
  std::size_t terminal_step = 0;
};

/// Closed-loop rollout. After a terminal state the remaining states repeat it.
/// Throws NumericBlowup, DimensionMismatch.
TrialResult run_trial(const SystemModel& model, const Controller& controller, const TrialConfig& cfg,
                      bool record_controls = false);

/// Both models driven by the same (seed, index) streams.
std::pair<stl::Trace, stl::Trace> run_paired(const SystemModel& nominal, const SystemModel& perturbed,
                                             const Controller& controller, const TrialConfig& cfg);

/// What a trial is scored against. Cost is −ρ at t = 0.
struct RobustnessSpec {
  std::variant<stl::Formula, stl::ConstraintSpec> spec;
  stl::SemanticsOptions opts;

  double cost(const stl::Trace& x) const;
};

struct MonteCarloConfig {
  std::uint64_t master_seed = 0;
  std::size_t trials = 1;
  std::size_t horizon = 1;
  std::size_t first_index = 0;
  unsigned jobs = 0;  ///< 0 → hardware concurrency
};

/// Runs fn(i) for i in [0, n) on a pool. Any exception is rethrown as TrialError for the lowest
/// failing index (plus index_offset), so the reported failure does not depend on scheduling.
template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn, std::size_t index_offset = 0);

/// Costs for trials first_index .. first_index + trials − 1, in trial order.
std::vector<double> monte_carlo_costs(const SystemModel& model, const Controller& controller,
                                      const RobustnessSpec& spec, const MonteCarloConfig& cfg);

risk::SampleSet monte_carlo(const SystemModel& model, const Controller& controller,
                            const RobustnessSpec& spec, const MonteCarloConfig& cfg);

struct PairedResult {
  std::vector<double> nominal_costs;
  std::vector<double> perturbed_costs;
  std::vector<double> gamma;  ///< sup_t ‖W(X̄(t) − X(t))‖ per trial, W = diag(weights)
};

PairedResult paired_monte_carlo(const SystemModel& nominal, const SystemModel& perturbed,
                                const Controller& controller, const RobustnessSpec& spec,
                                const MonteCarloConfig& cfg, const std::vector<double>& gamma_weights = {});

/// All control commands from every trial concatenated in trial order (first control channel).
std::vector<double> monte_carlo_commands(const SystemModel& model, const Controller& controller,
                                         const MonteCarloConfig& cfg, std::size_t channel = 0);

unsigned resolve_jobs(unsigned jobs);

}  // namespace riskgap::sim

#include "riskgap/sim/trial_impl.hpp"
