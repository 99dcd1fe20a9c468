// riskgap: batch risk verification from a JSON experiment config.
#include <cstdint>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "riskgap/cli/commands.hpp"
#include "riskgap/cli/config.hpp"
#include "riskgap/errors.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

using Command = std::function<riskgap::cli::CommandResult(const riskgap::cli::ExperimentConfig&,
                                                          const riskgap::cli::RunOptions&)>;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Risk verification of closed-loop systems"};
  app.require_subcommand(1);

  const std::map<std::string, std::pair<std::string, Command>> commands = {
      {"verify", {"VaR/CVaR point estimates and upper bounds per controller and variant", riskgap::cli::cmd_verify}},
      {"sweep-beta", {"VaR and CVaR over a list of risk levels", riskgap::cli::cmd_sweep_beta}},
      {"gap", {"perturbed-risk bounds from the gap section", riskgap::cli::cmd_gap}},
      {"paired-gamma", {"trace-difference histogram and risk", riskgap::cli::cmd_paired_gamma}},
      {"wasserstein", {"W1 distance between command distributions", riskgap::cli::cmd_wasserstein}},
  };

  std::string config_path;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 0;
  std::optional<std::string> out;
  for (const auto& [name, entry] : commands) {
    auto* sub = app.add_subcommand(name, entry.first);
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--seed", seed, "master seed, overrides the config");
    sub->add_option("--jobs", jobs, "worker threads (0: available parallelism)");
    sub->add_option("--out", out, "output directory, overrides the config");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigError;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  riskgap::cli::RunOptions opts;
  opts.seed = seed;
  opts.jobs = jobs;
  if (out) opts.out = *out;

  riskgap::cli::ExperimentConfig cfg;
  try {
    cfg = riskgap::cli::load_config(config_path);
  } catch (const riskgap::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    const auto r = commands.at(chosen->get_name()).second(cfg, opts);
    std::cout << r.report;
    for (const auto& f : r.files) std::cout << "wrote " << f.string() << "\n";
  } catch (const riskgap::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return 0;
}
