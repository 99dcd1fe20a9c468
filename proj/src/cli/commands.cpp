#include "riskgap/cli/commands.hpp"

#include <algorithm>
#include <sstream>

#include "riskgap/cli/wasserstein.hpp"
#include "riskgap/errors.hpp"
#include "riskgap/gap/gap.hpp"
#include "riskgap/stl/formula.hpp"
#include "riskgap/stl/semantics.hpp"

namespace riskgap::cli {

namespace {

sim::MonteCarloConfig mc_config(const ExperimentConfig& cfg, const RunOptions& opts) {
  sim::MonteCarloConfig mc;
  mc.master_seed = opts.seed.value_or(cfg.master_seed);
  mc.trials = cfg.trials;
  mc.horizon = cfg.horizon;
  mc.jobs = opts.jobs;
  return mc;
}

std::filesystem::path out_dir(const ExperimentConfig& cfg, const RunOptions& opts) {
  return opts.out.value_or(cfg.output_dir);
}

std::size_t count_marginal(const std::vector<double>& costs) {
  return static_cast<std::size_t>(std::count(costs.begin(), costs.end(), 0.0));
}

std::string spec_text(const ExperimentConfig& cfg) {
  if (!cfg.formula.empty()) return "formula " + cfg.formula;
  std::string s = "constraint " + cfg.constraint;
  if (cfg.constraint_horizon)
    s += " over steps [" + std::to_string(cfg.constraint_horizon->first) + "," +
         std::to_string(cfg.constraint_horizon->second) + "]";
  return s;
}

std::string header(const std::string& command, const ExperimentConfig& cfg, const RunOptions& opts) {
  std::ostringstream o;
  o << "command: " << command << "\n"
    << "spec: " << spec_text(cfg) << "\n"
    << "semantics: " << stl::describe(cfg.semantics) << "\n"
    << "trials: " << cfg.trials << "  horizon: " << cfg.horizon
    << "  master_seed: " << opts.seed.value_or(cfg.master_seed) << "\n"
    << "cost: Z = -rho at t = 0\n";
  return o.str();
}

const ModelVariant& paired_variant(const ExperimentConfig& cfg, bool perturbed) {
  if (cfg.gap) return find_variant(cfg, perturbed ? cfg.gap->perturbed : cfg.gap->nominal);
  if (cfg.variants.size() < 2) throw ConfigError("variants: paired runs need two variants (or a gap section)");
  return cfg.variants[perturbed ? 1 : 0];
}

void finish(CommandResult& r, const std::filesystem::path& dir, const std::string& command) {
  const auto path = dir / (command + "_report.txt");
  write_text(path, r.report);
  r.files.push_back(path);
}

}  // namespace

double point_risk(const risk::SampleSet& s, risk::Metric m, double beta) {
  switch (m) {
    case risk::Metric::VaR: return risk::empirical_var(s, beta);
    case risk::Metric::CVaR: return risk::empirical_cvar(s, beta);
    case risk::Metric::Mean: return risk::mean_risk(s);
    case risk::Metric::WorstCase: return risk::worst_case_risk(s);
  }
  return 0.0;
}

RiskCell evaluate_risk(const std::vector<double>& costs, const RiskEntry& e) {
  RiskCell c;
  const risk::SampleSet s(costs);
  c.point = point_risk(s, e.metric, e.query.beta);
  if (!e.upper_bound) return c;
  if (e.metric == risk::Metric::VaR) {
    try {
      c.upper_bound = risk::var_upper_bound(s, e.query).upper_bound;
    } catch (const InsufficientSamples&) {
      c.marker = "InsufficientSamples";
    }
  } else if (e.metric == risk::Metric::CVaR) {
    if (s.max() > *e.support_bound)
      throw Error("cost sample " + fmt(s.max()) + " exceeds the CVaR support bound " + fmt(*e.support_bound));
    c.upper_bound = risk::cvar_upper_bound(s.with_support_bound(*e.support_bound), e.query).upper_bound;
  }
  return c;
}

std::vector<ReportRow> verify_rows(const ExperimentConfig& cfg, const RunOptions& opts, std::size_t* marginal) {
  const auto spec = build_spec(cfg);
  const auto mc = mc_config(cfg, opts);
  std::vector<ReportRow> rows;
  std::size_t zero = 0;
  for (const auto& ce : cfg.controllers) {
    for (const auto& v : cfg.variants) {
      const auto model = build_model(cfg, v);
      const auto ctl = build_controller(cfg, ce, *model);
      const auto costs = sim::monte_carlo_costs(*model, *ctl, spec, mc);
      zero += count_marginal(costs);
      for (const auto& e : cfg.risk)
        rows.push_back({ce.name, v.name, e.metric, e.query.beta, e.query.delta, evaluate_risk(costs, e), costs.size()});
    }
  }
  if (marginal) *marginal = zero;
  return rows;
}

CsvTable verify_table(const std::vector<ReportRow>& rows) {
  CsvTable t({"controller", "variant", "metric", "beta", "delta", "point", "upper_bound", "n"});
  for (const auto& r : rows)
    t.add({r.controller, r.variant, risk::to_string(r.metric), fmt(r.beta), fmt(r.delta), fmt(r.cell.point),
           r.cell.upper_text(), std::to_string(r.n)});
  return t;
}

Histogram histogram(const std::vector<double>& values, std::size_t bins) {
  if (bins < 1) throw InvalidArgument("histogram needs at least one bin");
  Histogram h;
  double hi = 0.0;
  for (double v : values) {
    if (!(v >= 0.0)) throw InvalidArgument("histogram values must be nonnegative");
    hi = std::max(hi, v);
  }
  if (hi == 0.0) {
    h.edges = {0.0, 0.0};
    h.counts = {values.size()};
    return h;
  }
  h.counts.assign(bins, 0);
  for (std::size_t i = 0; i <= bins; ++i) h.edges.push_back(hi * static_cast<double>(i) / static_cast<double>(bins));
  for (double v : values) {
    auto k = static_cast<std::size_t>(v / hi * static_cast<double>(bins));
    ++h.counts[std::min(k, bins - 1)];
  }
  return h;
}

CommandResult cmd_verify(const ExperimentConfig& cfg, const RunOptions& opts) {
  std::size_t marginal = 0;
  const auto rows = verify_rows(cfg, opts, &marginal);
  const auto dir = out_dir(cfg, opts);
  CommandResult r;
  verify_table(rows).write(dir / "verify.csv");
  r.files.push_back(dir / "verify.csv");
  std::ostringstream o;
  o << header("verify", cfg, opts) << "marginal trials (rho = 0): " << marginal << "\n\n";
  for (const auto& row : rows)
    o << row.controller << " / " << row.variant << "  " << risk::to_string(row.metric) << "(beta=" << fmt(row.beta)
      << ")  point " << fmt(row.cell.point) << "  upper " << row.cell.upper_text() << "\n";
  r.report = o.str();
  finish(r, dir, "verify");
  return r;
}

CommandResult cmd_sweep_beta(const ExperimentConfig& cfg, const RunOptions& opts) {
  if (cfg.betas.empty()) throw ConfigError("betas: sweep-beta needs a nonempty list");
  const auto spec = build_spec(cfg);
  const auto mc = mc_config(cfg, opts);
  CsvTable t({"controller", "variant", "beta", "VaR", "CVaR"});
  std::size_t marginal = 0;
  for (const auto& ce : cfg.controllers) {
    for (const auto& v : cfg.variants) {
      const auto model = build_model(cfg, v);
      const auto ctl = build_controller(cfg, ce, *model);
      const auto costs = sim::monte_carlo_costs(*model, *ctl, spec, mc);
      marginal += count_marginal(costs);
      const risk::SampleSet s(costs);
      for (double b : cfg.betas)
        t.add({ce.name, v.name, fmt(b), fmt(risk::empirical_var(s, b)), fmt(risk::empirical_cvar(s, b))});
    }
  }
  const auto dir = out_dir(cfg, opts);
  CommandResult r;
  t.write(dir / "sweep_beta.csv");
  r.files.push_back(dir / "sweep_beta.csv");
  r.report = header("sweep-beta", cfg, opts) + "marginal trials (rho = 0): " + std::to_string(marginal) + "\n";
  finish(r, dir, "sweep_beta");
  return r;
}

CommandResult cmd_gap(const ExperimentConfig& cfg, const RunOptions& opts) {
  if (!cfg.gap) throw ConfigError("gap: section required for the gap command");
  const auto& g = *cfg.gap;
  const auto spec = build_spec(cfg);
  const auto mc = mc_config(cfg, opts);
  const auto nominal = build_model(cfg, find_variant(cfg, g.nominal));
  const auto perturbed = build_model(cfg, find_variant(cfg, g.perturbed));

  // Step at which the schedule is read: the constraint's last step, or L of the PNF formula at t = 0.
  std::size_t needed = cfg.horizon;
  if (cfg.constraint_horizon) needed = cfg.constraint_horizon->second;
  if (const auto* f = std::get_if<stl::Formula>(&spec.spec)) needed = stl::formula_length(stl::to_pnf(*f));

  std::optional<gap::GapBound> fixed;
  switch (g.method) {
    case GapMethod::Lipschitz: fixed = gap::lipschitz_delta(g.lipschitz, g.disturbance, needed); break;
    case GapMethod::Iiss: fixed = gap::iiss_delta(*g.gain, g.diameter); break;
    case GapMethod::Assumed: fixed = gap::GapBound{gap::ConstantDelta{g.delta, gap::ConstantSource::Assumed}, 0}; break;
    case GapMethod::Stochastic: break;
  }
  auto fixed_delta = [&]() -> double {
    if (const auto* c = std::get_if<gap::ConstantDelta>(&fixed->kind)) return c->delta;
    return std::get<gap::LipschitzSchedule>(fixed->kind).delta.at(needed);
  };

  CsvTable t({"controller", "metric", "beta", "nominal_risk", "method", "delta_or_Rgamma", "rgamma_point",
              "perturbed_bound", "perturbed_empirical", "verdict"});
  std::vector<std::vector<double>> nominal_risks(cfg.controllers.size());
  std::size_t violated = 0;
  for (std::size_t ci = 0; ci < cfg.controllers.size(); ++ci) {
    const auto& ce = cfg.controllers[ci];
    const auto ctl = build_controller(cfg, ce, *nominal);
    const auto paired = sim::paired_monte_carlo(*nominal, *perturbed, *ctl, spec, mc, g.gamma_weights);
    const risk::SampleSet nom(paired.nominal_costs), per(paired.perturbed_costs);
    const risk::SampleSet gamma(paired.gamma, g.gamma_support_bound);
    for (const auto& e : cfg.risk) {
      const double nominal_risk = point_risk(nom, e.metric, e.query.beta);
      const double empirical = point_risk(per, e.metric, e.query.beta);
      nominal_risks[ci].push_back(nominal_risk);
      double added = 0.0;
      std::string rgamma_point;
      if (fixed) {
        added = fixed_delta();
      } else {
        const auto gr = gap::gamma_risk(gamma, e.metric, e.query);
        added = gr.used();
        rgamma_point = fmt(gr.point);
      }
      const double bound = nominal_risk + added;
      const bool holds = bound >= empirical;
      violated += holds ? 0 : 1;
      t.add({ce.name, risk::to_string(e.metric), fmt(e.query.beta), fmt(nominal_risk), to_string(g.method), fmt(added),
             rgamma_point, fmt(bound), fmt(empirical), holds ? "holds" : "violated"});
    }
  }
  const auto dir = out_dir(cfg, opts);
  CommandResult r;
  t.write(dir / "gap.csv");
  r.files.push_back(dir / "gap.csv");

  if (g.compare) {
    CsvTable c({"controller_1", "controller_2", "metric", "beta", "risk_1", "risk_2", "delta", "verdict"});
    const double delta = fixed_delta();
    for (std::size_t k = 0; k < cfg.risk.size(); ++k)
      for (std::size_t i = 0; i < cfg.controllers.size(); ++i)
        for (std::size_t j = 0; j < cfg.controllers.size(); ++j) {
          if (i == j) continue;
          const double r1 = nominal_risks[i][k], r2 = nominal_risks[j][k];
          c.add({cfg.controllers[i].name, cfg.controllers[j].name, risk::to_string(cfg.risk[k].metric),
                 fmt(cfg.risk[k].query.beta), fmt(r1), fmt(r2), fmt(delta),
                 gap::to_string(gap::compare_controllers(r1, r2, delta))});
        }
    c.write(dir / "comparison.csv");
    r.files.push_back(dir / "comparison.csv");
  }
  std::ostringstream o;
  o << header("gap", cfg, opts) << "method: " << to_string(g.method) << "  nominal: " << g.nominal
    << "  perturbed: " << g.perturbed << "\n";
  if (fixed) o << "delta used: " << fmt(fixed_delta()) << " (schedule read at step " << needed << ")\n";
  o << "rows violating bound >= empirical: " << violated << " of " << t.rows() << "\n";
  r.report = o.str();
  finish(r, dir, "gap");
  return r;
}

CommandResult cmd_paired_gamma(const ExperimentConfig& cfg, const RunOptions& opts) {
  const auto spec = build_spec(cfg);
  const auto mc = mc_config(cfg, opts);
  const auto& nv = paired_variant(cfg, false);
  const auto& pv = paired_variant(cfg, true);
  const auto nominal = build_model(cfg, nv);
  const auto perturbed = build_model(cfg, pv);
  const std::vector<double> weights = cfg.gap ? cfg.gap->gamma_weights : std::vector<double>{};
  const std::optional<double> bound = cfg.gap ? cfg.gap->gamma_support_bound : std::nullopt;

  CsvTable hist({"controller", "bin", "lo", "hi", "count"});
  CsvTable summary({"controller", "metric", "beta", "delta", "n", "sup", "point", "upper_bound"});
  for (const auto& ce : cfg.controllers) {
    const auto ctl = build_controller(cfg, ce, *nominal);
    const auto paired = sim::paired_monte_carlo(*nominal, *perturbed, *ctl, spec, mc, weights);
    const auto h = histogram(paired.gamma, cfg.histogram_bins);
    for (std::size_t b = 0; b < h.counts.size(); ++b)
      hist.add({ce.name, std::to_string(b), fmt(h.edges[b]), fmt(h.edges[b + 1]), std::to_string(h.counts[b])});
    const risk::SampleSet gamma(paired.gamma, bound);
    for (const auto& e : cfg.risk) {
      const auto gr = gap::gamma_risk(gamma, e.metric, e.query);
      std::string upper = fmt(gr.upper_bound);
      if (!gr.upper_bound && e.metric == risk::Metric::VaR) upper = "InsufficientSamples";
      if (!gr.upper_bound && e.metric == risk::Metric::CVaR) upper = "MissingSupportBound";
      summary.add({ce.name, risk::to_string(e.metric), fmt(e.query.beta), fmt(e.query.delta),
                   std::to_string(gamma.size()), fmt(gamma.max()), fmt(gr.point), upper});
    }
  }
  const auto dir = out_dir(cfg, opts);
  CommandResult r;
  hist.write(dir / "gamma_histogram.csv");
  summary.write(dir / "gamma_summary.csv");
  r.files = {dir / "gamma_histogram.csv", dir / "gamma_summary.csv"};
  r.report = header("paired-gamma", cfg, opts) + "nominal: " + nv.name + "  perturbed: " + pv.name + "\n";
  finish(r, dir, "paired_gamma");
  return r;
}

CommandResult cmd_wasserstein(const ExperimentConfig& cfg, const RunOptions& opts) {
  if (cfg.variants.size() < 2) throw ConfigError("variants: wasserstein needs at least two variants");
  const auto mc = mc_config(cfg, opts);
  CsvTable t({"controller", "variant_a", "variant_b", "w1", "n_a", "n_b"});
  for (const auto& ce : cfg.controllers) {
    std::vector<std::vector<double>> commands;
    for (const auto& v : cfg.variants) {
      const auto model = build_model(cfg, v);
      const auto ctl = build_controller(cfg, ce, *model);
      commands.push_back(sim::monte_carlo_commands(*model, *ctl, mc));
    }
    const risk::SampleSet a(commands.front());
    for (std::size_t k = 1; k < commands.size(); ++k) {
      const risk::SampleSet b(commands[k]);
      t.add({ce.name, cfg.variants.front().name, cfg.variants[k].name, fmt(wasserstein_1d(a, b)),
             std::to_string(a.size()), std::to_string(b.size())});
    }
  }
  const auto dir = out_dir(cfg, opts);
  CommandResult r;
  t.write(dir / "wasserstein.csv");
  r.files.push_back(dir / "wasserstein.csv");
  r.report = header("wasserstein", cfg, opts) + "distribution: first control channel over all issued commands\n";
  finish(r, dir, "wasserstein");
  return r;
}

}  // namespace riskgap::cli
