#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "slsito/simulate.hpp"

namespace slsito::lt {

/// Uniform level partition a_k = first + k * spacing, k = 0..count-1.
/// Grids built by make_level_grid hit their anchor exactly.
class LevelGrid {
 public:
  LevelGrid(double first, double spacing, std::size_t count);
  /// a_k = anchor + (k - anchor_index) * spacing.
  static LevelGrid anchored(double anchor, std::size_t anchor_index, double spacing, std::size_t count);

  std::size_t size() const noexcept { return count_; }
  std::size_t cells() const noexcept { return count_ - 1; }
  double spacing() const noexcept { return spacing_; }
  double node(std::size_t k) const noexcept {
    return anchor_ + (static_cast<double>(k) - static_cast<double>(anchor_index_)) * spacing_;
  }
  double front() const noexcept { return node(0); }
  double back() const noexcept { return node(count_ - 1); }
  std::vector<double> nodes() const;

  /// Largest k with a_k <= x, or nullopt when x lies below a_0.
  std::optional<std::size_t> at_or_below(double x) const noexcept;

  friend bool operator==(const LevelGrid&, const LevelGrid&) = default;

 private:
  double anchor_;
  std::size_t anchor_index_ = 0;
  double spacing_;
  std::size_t count_;
};

/// Grid aligned to anchor + k * spacing that covers [lo, hi].
LevelGrid make_level_grid(double lo, double hi, double spacing, double anchor = 0.0);

/// Grid covering the range of coordinate `c` of the path widened by `margin`.
LevelGrid level_grid_for_path(const sim::SamplePath2D& path, sim::Coord c, double spacing, double margin,
                              double anchor = 0.0);

/// Default band width eps = sqrt(dt).
double default_band_width(const sim::TimeGrid& grid);

struct LevelIncrement {
  std::uint32_t level;
  double value;
};

/// L(t_j, a_k) on a time x level grid, stored as its time increments.
///
/// Row j of the increment table holds L(t_{j+1}, .) - L(t_j, .) restricted to
/// the levels where it is nonzero; L(0, .) = 0. Immutable once built.
class LocalTimeSurface {
 public:
  LocalTimeSurface(sim::TimeGrid time, LevelGrid levels, std::vector<std::vector<LevelIncrement>> steps);

  /// From a dense (N+1) x M table of values; row 0 must be zero.
  static LocalTimeSurface from_dense(sim::TimeGrid time, LevelGrid levels,
                                     const std::vector<std::vector<double>>& values);

  const sim::TimeGrid& time_grid() const noexcept { return time_; }
  const LevelGrid& level_grid() const noexcept { return levels_; }

  std::span<const LevelIncrement> increments(std::size_t step) const;
  /// L(t_{j+1}, a_k) - L(t_j, a_k).
  double increment(std::size_t step, std::size_t k) const;
  std::size_t nonzero_count() const noexcept { return incs_.size(); }

  /// L(t_j, .) over all levels.
  std::vector<double> row(std::size_t j) const;
  std::vector<double> terminal_row() const { return row(time_.steps()); }
  /// L(., a_k) over all time nodes.
  std::vector<double> column(std::size_t k) const;
  double value(std::size_t j, std::size_t k) const;
  std::vector<std::vector<double>> dense() const;

  /// Largest decrease of any L(., a_k) over one step (0 when monotone).
  double max_decrease() const;
  double min_value() const;

 private:
  sim::TimeGrid time_;
  LevelGrid levels_;
  std::vector<std::size_t> row_start_;
  std::vector<LevelIncrement> incs_;
};

/// Occupation-density estimator
/// L(t_j, a_k) = (1/2eps) sum_{m<j} 1[a_k <= X(t_m) < a_k + eps] d<M>(m).
LocalTimeSurface local_time_occupation(const sim::SamplePath2D& path, sim::Coord c, const LevelGrid& levels,
                                       double eps);

/// Tanaka estimator
/// L(t_j, a) = (X(t_j)-a)^+ - (X(0)-a)^+ - sum_{m<j} 1[X(t_m) > a] (dM(m) + dV(m)).
/// Levels not crossed by a step get an exact zero increment. Negative values
/// are kept.
LocalTimeSurface local_time_tanaka(const sim::SamplePath2D& path, sim::Coord c, const LevelGrid& levels);

using SpaceTimeFn = std::function<double(double s, double a)>;

struct OccupationResidual {
  double lhs = 0.0;  // sum_m g(t_m, X(t_m)) d<M>(m)
  double rhs = 0.0;  // 2 sum_j sum_k g(t_j, a_k) dL(t_j, a_k) da
  double abs() const;
};

OccupationResidual occupation_identity(const sim::SamplePath2D& path, sim::Coord c, const SpaceTimeFn& g,
                                       const LocalTimeSurface& surface);

/// |lhs - rhs| of occupation_identity.
double occupation_identity_residual(const sim::SamplePath2D& path, sim::Coord c, const SpaceTimeFn& g,
                                    const LocalTimeSurface& surface);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Smallest [a_lo, a_hi] containing every column with a nonzero value; nullopt when all zero.
std::optional<Interval> support_bounds(const LocalTimeSurface& surface);

/// Max over the grid of |A - B|; both surfaces must share their grids.
double max_abs_difference(const LocalTimeSurface& a, const LocalTimeSurface& b);

/// sum_j 1[X(t_j) not in [a_k, a_k + eps)] dL(t_j, a_k); zero for the occupation estimator.
double off_band_mass(const sim::SamplePath2D& path, sim::Coord c, const LocalTimeSurface& surface,
                     std::size_t k, double eps);

/// |sum_j phi(t_j) dL(t_j,a_k) - [phi(T) L(T,a_k) - sum_j phi'(t_j) L(t_j,a_k) dt]|.
double time_parts_residual(const LocalTimeSurface& surface, std::size_t k,
                           const std::function<double(double)>& phi,
                           const std::function<double(double)>& dphi);

/// Header: t followed by the level values; one row per time node.
void write_surface_csv(std::ostream& os, const LocalTimeSurface& surface);

}  // namespace slsito::lt
