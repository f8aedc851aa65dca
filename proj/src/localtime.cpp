#include "slsito/localtime.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "slsito/csv.hpp"
#include "slsito/error.hpp"

namespace slsito::lt {

using sim::Coord;
using sim::SamplePath2D;
using sim::TimeGrid;

LevelGrid::LevelGrid(double first, double spacing, std::size_t count)
    : anchor_(first), spacing_(spacing), count_(count) {
  if (!std::isfinite(first) || !(spacing > 0.0) || !std::isfinite(spacing))
    throw InvalidArgument("level grid needs a finite origin and positive spacing");
  if (count < 2) throw InvalidArgument("level grid needs at least two nodes");
  if (count > std::numeric_limits<std::uint32_t>::max()) throw InvalidArgument("level grid too large");
}

LevelGrid LevelGrid::anchored(double anchor, std::size_t anchor_index, double spacing, std::size_t count) {
  LevelGrid g(anchor, spacing, count);
  g.anchor_index_ = anchor_index;
  return g;
}

std::vector<double> LevelGrid::nodes() const {
  std::vector<double> out(count_);
  for (std::size_t k = 0; k < count_; ++k) out[k] = node(k);
  return out;
}

std::optional<std::size_t> LevelGrid::at_or_below(double x) const noexcept {
  if (!(x >= front())) return std::nullopt;
  const double raw = std::floor((x - front()) / spacing_);
  std::size_t k = raw >= static_cast<double>(count_ - 1) ? count_ - 1 : static_cast<std::size_t>(raw);
  while (k + 1 < count_ && node(k + 1) <= x) ++k;
  while (k > 0 && node(k) > x) --k;
  return k;
}

LevelGrid make_level_grid(double lo, double hi, double spacing, double anchor) {
  if (!(spacing > 0.0)) throw InvalidArgument("level spacing must be positive");
  if (!(hi >= lo) || !std::isfinite(lo) || !std::isfinite(hi)) throw InvalidArgument("invalid level range");
  const double k_lo = std::floor((lo - anchor) / spacing);
  const double k_hi = std::ceil((hi - anchor) / spacing);
  const auto count = static_cast<std::size_t>(std::max(1.0, k_hi - k_lo)) + 1;
  if (k_lo <= 0.0 && -k_lo < static_cast<double>(count)) {
    return LevelGrid::anchored(anchor, static_cast<std::size_t>(-k_lo), spacing, count);
  }
  return LevelGrid(anchor + k_lo * spacing, spacing, count);
}

LevelGrid level_grid_for_path(const SamplePath2D& path, Coord c, double spacing, double margin, double anchor) {
  const auto& x = path.values(c);
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  return make_level_grid(*lo - margin, *hi + margin, spacing, anchor);
}

double default_band_width(const TimeGrid& grid) { return std::sqrt(grid.dt()); }

double OccupationResidual::abs() const { return std::abs(lhs - rhs); }

LocalTimeSurface::LocalTimeSurface(TimeGrid time, LevelGrid levels,
                                   std::vector<std::vector<LevelIncrement>> steps)
    : time_(time), levels_(levels) {
  if (steps.size() != time_.steps()) throw InvalidArgument("surface needs one increment row per time step");
  row_start_.reserve(steps.size() + 1);
  row_start_.push_back(0);
  for (auto& row : steps) {
    for (const auto& inc : row) {
      if (inc.level >= levels_.size()) throw InvalidArgument("surface increment outside the level grid");
      incs_.push_back(inc);
    }
    row_start_.push_back(incs_.size());
  }
}

LocalTimeSurface LocalTimeSurface::from_dense(TimeGrid time, LevelGrid levels,
                                              const std::vector<std::vector<double>>& values) {
  if (values.size() != time.steps() + 1) throw InvalidArgument("dense surface row count mismatch");
  for (const auto& r : values)
    if (r.size() != levels.size()) throw InvalidArgument("dense surface column count mismatch");
  for (double v : values.front())
    if (v != 0.0) throw InvalidArgument("local time must vanish at t = 0");
  std::vector<std::vector<LevelIncrement>> steps(time.steps());
  for (std::size_t j = 0; j < time.steps(); ++j)
    for (std::size_t k = 0; k < levels.size(); ++k) {
      const double d = values[j + 1][k] - values[j][k];
      if (d != 0.0) steps[j].push_back({static_cast<std::uint32_t>(k), d});
    }
  return LocalTimeSurface(time, levels, std::move(steps));
}

std::span<const LevelIncrement> LocalTimeSurface::increments(std::size_t step) const {
  if (step >= time_.steps()) throw InvalidArgument("time step out of range");
  return {incs_.data() + row_start_[step], row_start_[step + 1] - row_start_[step]};
}

double LocalTimeSurface::increment(std::size_t step, std::size_t k) const {
  double sum = 0.0;
  for (const auto& inc : increments(step))
    if (inc.level == k) sum += inc.value;
  return sum;
}

std::vector<double> LocalTimeSurface::row(std::size_t j) const {
  if (j > time_.steps()) throw InvalidArgument("time index out of range");
  std::vector<double> out(levels_.size(), 0.0);
  for (std::size_t i = 0; i < row_start_[j]; ++i) out[incs_[i].level] += incs_[i].value;
  return out;
}

std::vector<double> LocalTimeSurface::column(std::size_t k) const {
  if (k >= levels_.size()) throw InvalidArgument("level index out of range");
  std::vector<double> out(time_.steps() + 1, 0.0);
  for (std::size_t j = 0; j < time_.steps(); ++j) out[j + 1] = out[j] + increment(j, k);
  return out;
}

double LocalTimeSurface::value(std::size_t j, std::size_t k) const {
  if (j > time_.steps() || k >= levels_.size()) throw InvalidArgument("surface index out of range");
  double v = 0.0;
  for (std::size_t i = 0; i < row_start_[j]; ++i)
    if (incs_[i].level == k) v += incs_[i].value;
  return v;
}

std::vector<std::vector<double>> LocalTimeSurface::dense() const {
  std::vector<std::vector<double>> out(time_.steps() + 1, std::vector<double>(levels_.size(), 0.0));
  for (std::size_t j = 0; j < time_.steps(); ++j) {
    out[j + 1] = out[j];
    for (const auto& inc : increments(j)) out[j + 1][inc.level] += inc.value;
  }
  return out;
}

double LocalTimeSurface::max_decrease() const {
  double worst = 0.0;
  for (const auto& inc : incs_) worst = std::max(worst, -inc.value);
  return worst;
}

double LocalTimeSurface::min_value() const {
  std::vector<double> cur(levels_.size(), 0.0);
  double lo = 0.0;
  for (const auto& inc : incs_) {
    cur[inc.level] += inc.value;
    lo = std::min(lo, cur[inc.level]);
  }
  return lo;
}

LocalTimeSurface local_time_occupation(const SamplePath2D& path, Coord c, const LevelGrid& levels, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidArgument("occupation band width must be positive");
  path.validate();
  const auto& x = path.values(c);
  const auto& dq = path.qv_increments(c);
  const std::size_t n = path.grid.steps();
  const double scale = 1.0 / (2.0 * eps);
  // With eps equal to the spacing the bands are exactly the grid cells.
  const bool tiles = std::fabs(eps - levels.spacing()) <= 1e-12 * levels.spacing();
  std::vector<std::vector<LevelIncrement>> steps(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double xm = x[m];
    const auto top = levels.at_or_below(xm);
    if (!top) continue;
    const double w = dq[m] * scale;
    if (tiles && (*top + 1 < levels.size() || xm < levels.back() + eps)) {
      steps[m].push_back({static_cast<std::uint32_t>(*top), w});
      continue;
    }
    if (tiles) continue;
    // Bands [a_k, a_k + eps) containing X(t_m), scanned downwards from the top.
    for (std::size_t k = *top + 1; k-- > 0;) {
      const double a = levels.node(k);
      if (!(xm < a + eps)) break;
      if (a <= xm) steps[m].push_back({static_cast<std::uint32_t>(k), w});
    }
  }
  return LocalTimeSurface(path.grid, levels, std::move(steps));
}

LocalTimeSurface local_time_tanaka(const SamplePath2D& path, Coord c, const LevelGrid& levels) {
  path.validate();
  const auto& x = path.values(c);
  const auto& dm = path.martingale_increments(c);
  const auto& dv = path.bv_increments(c);
  const std::size_t n = path.grid.steps();
  std::vector<std::vector<LevelIncrement>> steps(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double from = x[m];
    const double to = x[m + 1];
    const double dx = dm[m] + dv[m];
    const double lo = std::min(from, to);
    const double hi = std::max(from, to);
    // Only levels in [lo, hi) can see a nonzero increment.
    std::size_t k = 0;
    if (auto below = levels.at_or_below(lo)) k = levels.node(*below) < lo ? *below + 1 : *below;
    for (; k < levels.size(); ++k) {
      const double a = levels.node(k);
      if (!(a < hi)) break;
      const double inc = std::max(to - a, 0.0) - std::max(from - a, 0.0) - (from > a ? dx : 0.0);
      steps[m].push_back({static_cast<std::uint32_t>(k), inc});
    }
  }
  return LocalTimeSurface(path.grid, levels, std::move(steps));
}

OccupationResidual occupation_identity(const SamplePath2D& path, Coord c, const SpaceTimeFn& g,
                                       const LocalTimeSurface& surface) {
  if (!(surface.time_grid() == path.grid)) throw InvalidArgument("surface and path use different time grids");
  const auto& x = path.values(c);
  const auto& dq = path.qv_increments(c);
  const auto& grid = path.grid;
  const auto& levels = surface.level_grid();
  OccupationResidual r;
  for (std::size_t m = 0; m < grid.steps(); ++m) r.lhs += g(grid.node(m), x[m]) * dq[m];
  double acc = 0.0;
  for (std::size_t j = 0; j < grid.steps(); ++j) {
    const double t = grid.node(j);
    for (const auto& inc : surface.increments(j)) acc += g(t, levels.node(inc.level)) * inc.value;
  }
  r.rhs = 2.0 * acc * levels.spacing();
  return r;
}

double occupation_identity_residual(const SamplePath2D& path, Coord c, const SpaceTimeFn& g,
                                    const LocalTimeSurface& surface) {
  return occupation_identity(path, c, g, surface).abs();
}

std::optional<Interval> support_bounds(const LocalTimeSurface& surface) {
  const auto& levels = surface.level_grid();
  std::vector<double> cur(levels.size(), 0.0);
  std::vector<bool> nonzero(levels.size(), false);
  for (std::size_t j = 0; j < surface.time_grid().steps(); ++j)
    for (const auto& inc : surface.increments(j)) {
      cur[inc.level] += inc.value;
      if (cur[inc.level] != 0.0) nonzero[inc.level] = true;
    }
  std::optional<Interval> out;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (!nonzero[k]) continue;
    const double a = levels.node(k);
    if (!out) out = Interval{a, a};
    out->hi = a;
  }
  return out;
}

double max_abs_difference(const LocalTimeSurface& a, const LocalTimeSurface& b) {
  if (!(a.time_grid() == b.time_grid()) || !(a.level_grid() == b.level_grid()))
    throw InvalidArgument("surfaces use different grids");
  // A column's difference only changes where one of the surfaces has an increment.
  std::vector<double> diff(a.level_grid().size(), 0.0);
  double worst = 0.0;
  for (std::size_t j = 0; j < a.time_grid().steps(); ++j) {
    for (const auto& inc : a.increments(j)) diff[inc.level] += inc.value;
    for (const auto& inc : b.increments(j)) diff[inc.level] -= inc.value;
    for (const auto& inc : a.increments(j)) worst = std::max(worst, std::abs(diff[inc.level]));
    for (const auto& inc : b.increments(j)) worst = std::max(worst, std::abs(diff[inc.level]));
  }
  return worst;
}

double off_band_mass(const SamplePath2D& path, Coord c, const LocalTimeSurface& surface, std::size_t k,
                     double eps) {
  const double a = surface.level_grid().node(k);
  const auto& x = path.values(c);
  double mass = 0.0;
  for (std::size_t j = 0; j < surface.time_grid().steps(); ++j) {
    const bool in_band = a <= x[j] && x[j] < a + eps;
    if (!in_band) mass += surface.increment(j, k);
  }
  return mass;
}

double time_parts_residual(const LocalTimeSurface& surface, std::size_t k,
                           const std::function<double(double)>& phi,
                           const std::function<double(double)>& dphi) {
  const auto& grid = surface.time_grid();
  const auto col = surface.column(k);
  double stieltjes = 0.0;
  double drift = 0.0;
  for (std::size_t j = 0; j < grid.steps(); ++j) {
    const double t = grid.node(j);
    stieltjes += phi(t) * (col[j + 1] - col[j]);
    drift += dphi(t) * col[j] * grid.dt();
  }
  const double parts = phi(grid.horizon()) * col.back() - drift;
  return std::abs(stieltjes - parts);
}

void write_surface_csv(std::ostream& os, const LocalTimeSurface& surface) {
  const auto& levels = surface.level_grid();
  std::vector<std::string> header{"t"};
  for (std::size_t k = 0; k < levels.size(); ++k) header.push_back(csv::number(levels.node(k)));
  csv::write_header(os, header);
  std::vector<double> cur(levels.size(), 0.0);
  const auto& grid = surface.time_grid();
  for (std::size_t j = 0; j <= grid.steps(); ++j) {
    if (j > 0)
      for (const auto& inc : surface.increments(j - 1)) cur[inc.level] += inc.value;
    std::vector<std::string> row{csv::number(grid.node(j))};
    for (double v : cur) row.push_back(csv::number(v));
    csv::write_row(os, row);
  }
}

}  // namespace slsito::lt
