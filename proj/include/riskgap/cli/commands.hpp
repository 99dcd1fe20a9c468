#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "riskgap/cli/config.hpp"
#include "riskgap/cli/csv.hpp"
#include "riskgap/risk/sample_set.hpp"

namespace riskgap::cli {

/// Command-line overrides.
struct RunOptions {
  std::optional<std::uint64_t> seed;
  unsigned jobs = 0;
  std::optional<std::filesystem::path> out;
};

struct CommandResult {
  std::vector<std::filesystem::path> files;
  std::string report;  ///< human-readable summary, also written to <command>_report.txt
};

/// One risk cell: point estimate plus upper bound, or a marker naming why the bound is absent.
struct RiskCell {
  double point = 0.0;
  std::optional<double> upper_bound;
  std::string marker;
  std::string upper_text() const { return upper_bound ? fmt(*upper_bound) : marker; }
};

RiskCell evaluate_risk(const std::vector<double>& costs, const RiskEntry& e);
double point_risk(const risk::SampleSet& s, risk::Metric m, double beta);

struct ReportRow {
  std::string controller;
  std::string variant;
  risk::Metric metric = risk::Metric::VaR;
  double beta = 0.0;
  double delta = 0.0;
  RiskCell cell;
  std::size_t n = 0;
};

/// Rows of the verify table, controllers × variants × risk entries in config order.
std::vector<ReportRow> verify_rows(const ExperimentConfig& cfg, const RunOptions& opts,
                                   std::size_t* marginal = nullptr);
CsvTable verify_table(const std::vector<ReportRow>& rows);

struct Histogram {
  std::vector<double> edges;  ///< bins + 1 edges
  std::vector<std::size_t> counts;
};

/// Fixed-width bins over [0, max]; when max is 0 a single bin [0, 0] holds everything.
Histogram histogram(const std::vector<double>& values, std::size_t bins);

CommandResult cmd_verify(const ExperimentConfig& cfg, const RunOptions& opts);
CommandResult cmd_sweep_beta(const ExperimentConfig& cfg, const RunOptions& opts);
CommandResult cmd_gap(const ExperimentConfig& cfg, const RunOptions& opts);
CommandResult cmd_paired_gamma(const ExperimentConfig& cfg, const RunOptions& opts);
CommandResult cmd_wasserstein(const ExperimentConfig& cfg, const RunOptions& opts);

}  // namespace riskgap::cli
