#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "medest/bounds.hpp"
#include "medest/config.hpp"
#include "medest/distributions.hpp"
#include "medest/report.hpp"

namespace medest {

enum class ExperimentKind { RiskTable, QuantileCurves, Coverage };
enum class TargetKind { Mean, Pairwise };

// A delta/tau-parameterized estimator; (K, B) are re-planned per cell from
// the configured delta (or per grid point for quantile curves) unless
// overridden, in which case no radius is claimed.
struct EstimatorTemplate {
  std::string name;
  EstimatorKind kind = EstimatorKind::MoM;
  std::optional<double> tau;
  BlockScheme scheme = BlockScheme::SWoR;
  PairScheme pair_scheme = PairScheme::WithReplacement;
  std::optional<std::size_t> K_override;
  std::optional<std::size_t> B_override;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::RiskTable;
  TargetKind target = TargetKind::Mean;
  std::size_t n = 1000;
  std::size_t replications = 5000;
  double delta = 0.001;
  std::vector<double> delta_grid;  // quantile curves only
  std::vector<LawSpec> laws;
  std::vector<EstimatorTemplate> estimators;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string kernel_name = "variance";
};

// Geometric grid from hi down to lo inclusive, strictly decreasing.
std::vector<double> geometric_grid(double hi, double lo, std::size_t points);

// Builds and validates a typed config from parsed text; `expected_kind` is
// the CLI verb (a `kind` key in the file must agree).
ExperimentConfig experiment_config_from_file(const ConfigFile& file,
                                             ExperimentKind expected_kind);

// Canonical text with every default expanded; hashed into report provenance
// and logged next to outputs.
std::string resolved_experiment_config(const ExperimentConfig& config);

// Per (law, estimator): metrics quadratic_risk (stderr = sd of the squared
// errors, the tables' +- column), bias_sq and variance (their sum equals the
// risk), over fresh samples per replication. Planner failures mark the cell
// with a single `infeasible` row instead of aborting.
ExperimentReport run_quadratic_risk(const ExperimentConfig& config);

// Per (law, estimator, delta in grid): the estimator is re-planned at each
// grid delta, then the (1-delta)-quantile of |estimate - target| is reported.
ExperimentReport run_quantile_curves(const ExperimentConfig& config);

// Per (law, estimator): the certified radius and the empirical exceedance
// frequency (expected to be at most delta, typically far below).
ExperimentReport run_coverage(const ExperimentConfig& config);

ExperimentReport run_experiment(const ExperimentConfig& config);

}  // namespace medest
