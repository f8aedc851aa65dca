#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "slsito/config.hpp"
#include "slsito/itoformula.hpp"
#include "slsito/slsintegral.hpp"
#include "slsito/stats.hpp"

namespace slsito::harness {

struct ColumnStats {
  std::string name;
  stats::Moments moments;
};

/// One refinement level of an ensemble run.
struct LevelResult {
  std::size_t level = 0;
  std::size_t steps = 0;
  double eps = 0.0;
  double spacing = 0.0;
  std::size_t n_paths = 0;
  std::size_t excluded = 0;
  std::vector<std::string> columns;
  std::vector<std::size_t> path_ids;       // retained paths
  std::vector<std::vector<double>> rows;   // one per retained path, in column order
  std::vector<ColumnStats> stats;          // every column plus abs_residual
  std::optional<sls::IsometryReport> isometry;

  /// Throws ConfigurationError for unknown names.
  const stats::Moments& column(const std::string& name) const;
  double excluded_fraction() const;
};

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = true;
};

struct ConvergenceRow {
  std::size_t level = 0;
  std::size_t steps = 0;
  double spacing = 0.0;
  double median_abs_residual = 0.0;
  double decay = 0.0;  // median(level) / median(level + 1); NaN when not applicable
};

struct EnsembleSummary {
  ExperimentConfig config;
  std::vector<LevelResult> levels;
  std::vector<ConvergenceRow> convergence;
  std::vector<Check> checks;

  bool passed() const;
};

/// Runs the configured experiment over the ensemble at every refinement
/// level. Path p at level k is driven by key derive_key(seed, k, p). Results
/// are independent of the worker count. Writes CSV artifacts when out_dir is set.
EnsembleSummary run_experiment(const ExperimentConfig& cfg);

/// Runs cfg.target (or cfg.kind when it is not convergence) and tabulates the
/// decay of the ensemble-median |residual| between consecutive levels.
std::vector<ConvergenceRow> convergence_study(const ExperimentConfig& cfg);

/// decay factors for a sequence of medians.
std::vector<ConvergenceRow> decay_table(const std::vector<LevelResult>& levels);

/// summary.csv, level_<k>.csv, checks.csv, manifest.txt and, when present,
/// isometry.csv and convergence.csv.
void write_outputs(const EnsembleSummary& summary, const std::string& dir);

/// Catalog id with an optional "@n" suffix selecting the mollified surrogate.
ito::TestFunction resolve_function(const std::string& id);

}  // namespace slsito::harness
