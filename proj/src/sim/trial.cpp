#include "riskgap/sim/trial.hpp"

#include <cmath>
#include <thread>

#include "riskgap/errors.hpp"

namespace riskgap::sim {

void TrialConfig::validate() const {
  if (horizon < 1) throw InvalidArgument("trial horizon must be >= 1");
}

unsigned resolve_jobs(unsigned jobs) {
  if (jobs > 0) return jobs;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

TrialResult run_trial(const SystemModel& model, const Controller& controller, const TrialConfig& cfg,
                      bool record_controls) {
  cfg.validate();
  if (controller.input_dim() != model.obs_dim())
    throw DimensionMismatch(model.obs_dim(), controller.input_dim());
  if (controller.output_dim() != model.control_dim())
    throw DimensionMismatch(model.control_dim(), controller.output_dim());

  TrialStreams rng(cfg.master_seed, cfg.trial_index);
  std::vector<double> x = model.initial_state(rng.initial);
  if (x.size() != model.state_dim()) throw DimensionMismatch(model.state_dim(), x.size());
  const TrialFixture fixture = model.fixture(rng.perturbation);

  TrialResult out{stl::Trace(model.dt(), model.state_dim()), stl::Trace(model.dt(), model.control_dim())};
  out.states.push_back(x);
  out.terminated = model.terminal(x);

  std::vector<double> y(model.obs_dim()), u(model.control_dim()), next(model.state_dim());
  for (std::size_t t = 0; t < cfg.horizon; ++t) {
    if (out.terminated) {
      out.states.push_back(x);
      continue;
    }
    model.observe(x, fixture, rng.measurement, rng.perturbation, y);
    controller.act(y, u);
    model.step(x, u, rng.process, rng.perturbation, next);
    for (double v : next)
      if (!std::isfinite(v)) throw NumericBlowup(cfg.trial_index, t + 1);
    if (record_controls) out.controls.push_back(u);
    x.swap(next);
    out.states.push_back(x);
    if (model.terminal(x)) {
      out.terminated = true;
      out.terminal_step = t + 1;
    }
  }
  return out;
}

std::pair<stl::Trace, stl::Trace> run_paired(const SystemModel& nominal, const SystemModel& perturbed,
                                             const Controller& controller, const TrialConfig& cfg) {
  if (nominal.state_dim() != perturbed.state_dim())
    throw DimensionMismatch(nominal.state_dim(), perturbed.state_dim());
  return {run_trial(nominal, controller, cfg).states, run_trial(perturbed, controller, cfg).states};
}

double RobustnessSpec::cost(const stl::Trace& x) const {
  if (const auto* f = std::get_if<stl::Formula>(&spec)) return -stl::robustness(*f, x, 0, opts);
  return -stl::trace_robustness(std::get<stl::ConstraintSpec>(spec), x);
}

namespace {

TrialConfig trial_at(const MonteCarloConfig& cfg, std::size_t i) {
  return TrialConfig{cfg.master_seed, cfg.first_index + i, cfg.horizon};
}

double sup_difference(const stl::Trace& a, const stl::Trace& b, const std::vector<double>& w) {
  double worst = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.dim(); ++k) {
      const double d = (w.empty() ? 1.0 : w[k]) * (a[t][k] - b[t][k]);
      s += d * d;
    }
    worst = std::max(worst, std::sqrt(s));
  }
  return worst;
}

void check_trials(const MonteCarloConfig& cfg) {
  if (cfg.trials < 1) throw InvalidArgument("monte carlo needs at least one trial");
  if (cfg.horizon < 1) throw InvalidArgument("trial horizon must be >= 1");
}

}  // namespace

std::vector<double> monte_carlo_costs(const SystemModel& model, const Controller& controller,
                                      const RobustnessSpec& spec, const MonteCarloConfig& cfg) {
  check_trials(cfg);
  std::vector<double> costs(cfg.trials);
  parallel_for(
      cfg.trials, cfg.jobs,
      [&](std::size_t i) { costs[i] = spec.cost(run_trial(model, controller, trial_at(cfg, i)).states); },
      cfg.first_index);
  return costs;
}

risk::SampleSet monte_carlo(const SystemModel& model, const Controller& controller,
                            const RobustnessSpec& spec, const MonteCarloConfig& cfg) {
  return risk::SampleSet(monte_carlo_costs(model, controller, spec, cfg));
}

PairedResult paired_monte_carlo(const SystemModel& nominal, const SystemModel& perturbed,
                                const Controller& controller, const RobustnessSpec& spec,
                                const MonteCarloConfig& cfg, const std::vector<double>& gamma_weights) {
  check_trials(cfg);
  if (nominal.state_dim() != perturbed.state_dim())
    throw DimensionMismatch(nominal.state_dim(), perturbed.state_dim());
  if (!gamma_weights.empty() && gamma_weights.size() != nominal.state_dim())
    throw DimensionMismatch(nominal.state_dim(), gamma_weights.size());
  PairedResult out;
  out.nominal_costs.resize(cfg.trials);
  out.perturbed_costs.resize(cfg.trials);
  out.gamma.resize(cfg.trials);
  parallel_for(
      cfg.trials, cfg.jobs,
      [&](std::size_t i) {
        const auto [a, b] = run_paired(nominal, perturbed, controller, trial_at(cfg, i));
        out.nominal_costs[i] = spec.cost(a);
        out.perturbed_costs[i] = spec.cost(b);
        out.gamma[i] = sup_difference(a, b, gamma_weights);
      },
      cfg.first_index);
  return out;
}

std::vector<double> monte_carlo_commands(const SystemModel& model, const Controller& controller,
                                         const MonteCarloConfig& cfg, std::size_t channel) {
  check_trials(cfg);
  if (channel >= model.control_dim()) throw DimensionMismatch(model.control_dim(), channel + 1);
  std::vector<std::vector<double>> per(cfg.trials);
  parallel_for(
      cfg.trials, cfg.jobs,
      [&](std::size_t i) {
        const auto r = run_trial(model, controller, trial_at(cfg, i), true);
        per[i].reserve(r.controls.size());
        for (std::size_t t = 0; t < r.controls.size(); ++t) per[i].push_back(r.controls[t][channel]);
      },
      cfg.first_index);
  std::vector<double> all;
  for (auto& v : per) all.insert(all.end(), v.begin(), v.end());
  return all;
}

}  // namespace riskgap::sim
