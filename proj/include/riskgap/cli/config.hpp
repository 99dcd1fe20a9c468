#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "riskgap/gap/gap.hpp"
#include "riskgap/risk/estimators.hpp"
#include "riskgap/sim/system.hpp"
#include "riskgap/sim/trial.hpp"
#include "riskgap/stl/predicate_table.hpp"

namespace riskgap::cli {

enum class SystemKind { F110, Uuv, Scalar, Custom };

struct ModelVariant {
  std::string name;
  nlohmann::json perturbation;  ///< null for the nominal model
};

struct ControllerEntry {
  std::string name;
  std::string scripted;      ///< scripted id, or empty
  std::string weights_path;  ///< NN weights file, or empty
};

struct RiskEntry {
  risk::Metric metric = risk::Metric::VaR;
  risk::RiskQuery query;
  std::optional<double> support_bound;
  bool upper_bound = true;  ///< request the high-confidence bound
};

enum class GapMethod { Lipschitz, Iiss, Assumed, Stochastic };

struct GapSection {
  GapMethod method = GapMethod::Stochastic;
  std::string nominal;    ///< variant names
  std::string perturbed;
  gap::LipschitzConstants lipschitz;
  gap::DisturbanceBounds disturbance;
  std::optional<gap::IissGain> gain;
  double diameter = 0.0;
  double delta = 0.0;  ///< assumed Δ
  std::optional<double> gamma_support_bound;
  std::vector<double> gamma_weights;
  bool compare = false;
};

struct ExperimentConfig {
  SystemKind system = SystemKind::F110;
  std::filesystem::path custom_model;
  nlohmann::json custom_model_json;  ///< contents of the model file
  nlohmann::json system_options = nlohmann::json::object();
  std::vector<ModelVariant> variants;
  std::vector<ControllerEntry> controllers;
  std::string formula;                       ///< STL formula text, or empty
  std::string constraint;                    ///< predicate name of a constraint spec, or empty
  std::optional<std::pair<std::size_t, std::size_t>> constraint_horizon;
  nlohmann::json predicates = nlohmann::json::object();
  stl::SemanticsOptions semantics;
  std::size_t trials = 1000;
  std::size_t horizon = 100;
  std::uint64_t master_seed = 0;
  std::vector<RiskEntry> risk;
  std::vector<double> betas;
  std::optional<GapSection> gap;
  std::size_t histogram_bins = 40;
  std::filesystem::path output_dir = "out";
  std::filesystem::path base_dir;  ///< directory of the config file, for relative paths
};

/// Parses and validates. Unknown keys, missing required fields and inconsistent values raise
/// ConfigError naming the field.
ExperimentConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Built-in functions for `functional` predicates on the configured system:
/// f110 → wall_distance; uuv → pipeline_distance, depth; every system → state_<i>.
stl::FunctionRegistry function_registry(const ExperimentConfig& cfg);

/// Model for a variant. Throws ConfigError for perturbation kinds the system does not have.
std::unique_ptr<sim::SystemModel> build_model(const ExperimentConfig& cfg, const ModelVariant& v);
const ModelVariant& find_variant(const ExperimentConfig& cfg, const std::string& name);

std::unique_ptr<sim::Controller> build_controller(const ExperimentConfig& cfg, const ControllerEntry& c,
                                                  const sim::SystemModel& model);

sim::RobustnessSpec build_spec(const ExperimentConfig& cfg);

std::string to_string(GapMethod m);

}  // namespace riskgap::cli
