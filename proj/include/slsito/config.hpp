#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "slsito/simulate.hpp"

namespace slsito::harness {

enum class ExperimentKind {
  Simulate,
  LocalTime,
  Isometry,
  Parts,
  ItoSmooth,
  Ito2D,
  ItoSplit,
  Corollary,
  Ito1D,
  Curve1D,
  Convergence,
};

const char* kind_name(ExperimentKind k) noexcept;
/// Throws ConfigurationError for unknown names.
ExperimentKind parse_kind(const std::string& name);

/// Flat key=value configuration. Lines starting with '#' are comments.
///
///   kind        experiment kind (simulate, localtime, isometry, parts, ito-smooth,
///               ito-2d, ito-split, corollary, ito-1d, curve-1d, convergence)
///   target      experiment refined by kind=convergence
///   steps       comma list of time steps per refinement level
///   paths       ensemble size; 0 picks 10^4 for scalar and 10^3 for surface checks
///   function    catalog id, or isometry pair id for kind=isometry
///   spacings    level spacings refined by kind=parts
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Ito2D;
  ExperimentKind target = ExperimentKind::Ito2D;
  sim::DiffusionSpec diffusion;
  double horizon = 1.0;
  std::vector<std::size_t> steps{1000, 10000, 100000};
  std::size_t paths = 0;
  double eps_scale = 1.0;
  std::string function = "SMOOTH_QUAD";
  sim::Coord coordinate = sim::Coord::X2;
  std::string estimator = "occupation";
  std::size_t level_count = 5;
  std::vector<double> spacings{0.1, 0.05, 0.025};
  std::uint64_t seed = 0;
  std::string out_dir;
  std::size_t threads = 0;
  double z_threshold = 3.0;
  double decay_threshold = 0.0;  // 0 selects 1.1 for kink functions and 1.3 otherwise
  double max_exclusion = 0.01;

  /// Throws ConfigurationError naming the offending field.
  void validate() const;
  /// Ensemble size after applying the kind default.
  std::size_t resolved_paths() const;
  double resolved_decay_threshold() const;
  std::size_t level_total() const;

  /// Throws ConfigurationError for unknown keys or malformed values.
  void set(const std::string& key, const std::string& value);
  std::string get(const std::string& key) const;
  static const std::vector<std::string>& keys();

  void load(std::istream& in);
  void load_file(const std::string& path);
  /// Every key with its resolved value, one per line, in keys() order.
  std::string dump() const;
};

}  // namespace slsito::harness
