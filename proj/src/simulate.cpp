#include "slsito/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "slsito/csv.hpp"
#include "slsito/error.hpp"
#include "slsito/rng.hpp"

namespace slsito::sim {

TimeGrid::TimeGrid(double horizon, std::size_t steps) : horizon_(horizon), steps_(steps) {
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw InvalidArgument("time grid horizon must be positive and finite");
  if (steps == 0) throw InvalidArgument("time grid needs at least one step");
}

double TimeGrid::node(std::size_t j) const noexcept {
  if (j == steps_) return horizon_;
  return horizon_ * static_cast<double>(j) / static_cast<double>(steps_);
}

std::vector<double> TimeGrid::nodes() const {
  std::vector<double> out(steps_ + 1);
  for (std::size_t j = 0; j <= steps_; ++j) out[j] = node(j);
  return out;
}

TimeGrid make_time_grid(double horizon, std::size_t steps) { return TimeGrid(horizon, steps); }

void DiffusionSpec::validate() const {
  for (int i = 0; i < 2; ++i) {
    if (!std::isfinite(start[i]) || !std::isfinite(drift[i]))
      throw InvalidArgument("diffusion start and drift must be finite");
    if (!(vol[i] > 0.0) || !std::isfinite(vol[i])) throw InvalidArgument("volatilities must be positive");
  }
  if (!(std::abs(correlation) <= 1.0)) throw InvalidArgument("correlation must lie in [-1, 1]");
}

void SamplePath2D::validate() const {
  const std::size_t n = grid.steps();
  for (int i = 0; i < 2; ++i) {
    if (x[i].size() != n + 1 || dm[i].size() != n || dv[i].size() != n || dqv[i].size() != n)
      throw InvalidArgument("sample path arrays do not match the time grid");
    for (double v : x[i])
      if (!std::isfinite(v)) throw InvalidArgument("sample path contains non-finite values");
    for (double v : dqv[i])
      if (!(v >= 0.0)) throw InvalidArgument("quadratic variation increments must be nonnegative");
  }
  if (dcv.size() != n) throw InvalidArgument("cross-variation increments do not match the time grid");
}

SamplePath2D SamplePath2D::from_increments(const TimeGrid& grid, std::array<double, 2> start,
                                           std::array<std::vector<double>, 2> dm,
                                           std::array<std::vector<double>, 2> dv,
                                           std::array<std::vector<double>, 2> dqv, std::vector<double> dcv) {
  SamplePath2D p;
  p.grid = grid;
  p.dm = std::move(dm);
  p.dv = std::move(dv);
  p.dqv = std::move(dqv);
  p.dcv = std::move(dcv);
  const std::size_t n = grid.steps();
  for (int i = 0; i < 2; ++i) {
    if (p.dm[i].size() != n || p.dv[i].size() != n)
      throw InvalidArgument("increment arrays do not match the time grid");
    p.x[i].resize(n + 1);
    p.x[i][0] = start[i];
    for (std::size_t j = 0; j < n; ++j) p.x[i][j + 1] = p.x[i][j] + (p.dm[i][j] + p.dv[i][j]);
  }
  p.validate();
  return p;
}

double BVPath::total_variation() const {
  double tv = 0.0;
  for (std::size_t j = 0; j + 1 < values.size(); ++j) tv += std::abs(values[j + 1] - values[j]);
  return tv;
}

void simulate_diffusion_into(const DiffusionSpec& spec, const TimeGrid& grid, SamplePath2D& out) {
  spec.validate();
  const std::size_t n = grid.steps();
  const double dt = grid.dt();
  const double sqdt = std::sqrt(dt);
  const double rho = spec.correlation;
  const double rho_c = std::sqrt(std::max(0.0, 1.0 - rho * rho));
  const rng::CounterRng gen(spec.seed);

  out.grid = grid;
  for (int i = 0; i < 2; ++i) {
    out.x[i].resize(n + 1);
    out.dm[i].resize(n);
    out.dv[i].assign(n, spec.drift[i] * dt);
    out.dqv[i].assign(n, spec.vol[i] * spec.vol[i] * dt);
    out.x[i][0] = spec.start[i];
  }
  out.dcv.assign(n, rho * spec.vol[0] * spec.vol[1] * dt);

  const double s1 = spec.vol[0] * sqdt;
  const double s2 = spec.vol[1] * sqdt;
  double* x1 = out.x[0].data();
  double* x2 = out.x[1].data();
  double* m1 = out.dm[0].data();
  double* m2 = out.dm[1].data();
  const double v1 = spec.drift[0] * dt;
  const double v2 = spec.drift[1] * dt;
  for (std::size_t j = 0; j < n; ++j) {
    const auto [z1, z2] = gen.normal_pair(j);
    m1[j] = s1 * z1;
    m2[j] = s2 * (rho * z1 + rho_c * z2);
    x1[j + 1] = x1[j] + (m1[j] + v1);
    x2[j + 1] = x2[j] + (m2[j] + v2);
  }
}

SamplePath2D simulate_diffusion(const DiffusionSpec& spec, const TimeGrid& grid) {
  SamplePath2D p;
  simulate_diffusion_into(spec, grid, p);
  return p;
}

namespace {

BVPath cumulate(const TimeGrid& grid, const std::vector<double>& increments) {
  BVPath out{grid, std::vector<double>(increments.size() + 1, 0.0)};
  for (std::size_t j = 0; j < increments.size(); ++j) out.values[j + 1] = out.values[j] + increments[j];
  return out;
}

}  // namespace

BVPath quadratic_variation_law(const SamplePath2D& path, Coord c) {
  return cumulate(path.grid, path.qv_increments(c));
}

BVPath cross_variation_law(const SamplePath2D& path) { return cumulate(path.grid, path.dcv); }

BVPath realized_quadratic_variation(const SamplePath2D& path, Coord c) {
  const auto& dm = path.martingale_increments(c);
  std::vector<double> sq(dm.size());
  for (std::size_t j = 0; j < dm.size(); ++j) sq[j] = dm[j] * dm[j];
  return cumulate(path.grid, sq);
}

BVPath realized_cross_variation(const SamplePath2D& path) {
  std::vector<double> pr(path.dm[0].size());
  for (std::size_t j = 0; j < pr.size(); ++j) pr[j] = path.dm[0][j] * path.dm[1][j];
  return cumulate(path.grid, pr);
}

SmoothCurve SmoothCurve::constant(double c) {
  return {[c](double) { return c; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
}

SmoothCurve SmoothCurve::identity() {
  return {[](double x) { return x; }, [](double) { return 1.0; }, [](double) { return 0.0; }};
}

SmoothCurve SmoothCurve::sine() {
  return {[](double x) { return std::sin(x); }, [](double x) { return std::cos(x); },
          [](double x) { return -std::sin(x); }};
}

namespace {

double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw EvaluationError(std::string("curve callback returned a non-finite ") + what);
  return v;
}

}  // namespace

SamplePath2D transform_by_curve(const SamplePath2D& path, const SmoothCurve& curve) {
  if (!curve.value || !curve.slope || !curve.curvature)
    throw ConfigurationError("transform_by_curve needs value, slope and curvature callbacks");
  path.validate();
  const std::size_t n = path.grid.steps();
  SamplePath2D out = path;
  const auto& x1 = path.x[0];
  std::vector<double> b(n + 1);
  for (std::size_t j = 0; j <= n; ++j) b[j] = checked(curve.value(x1[j]), "value");
  for (std::size_t j = 0; j <= n; ++j) out.x[1][j] = path.x[1][j] - b[j];
  for (std::size_t j = 0; j < n; ++j) {
    const double slope = checked(curve.slope(x1[j]), "slope");
    const double dx1 = path.dm[0][j] + path.dv[0][j];
    const double remainder = (b[j + 1] - b[j]) - slope * dx1;
    out.dm[1][j] = path.dm[1][j] - slope * path.dm[0][j];
    out.dv[1][j] = path.dv[1][j] - slope * path.dv[0][j] - remainder;
    out.dqv[1][j] = std::max(
        0.0, path.dqv[1][j] - 2.0 * slope * path.dcv[j] + slope * slope * path.dqv[0][j]);
    out.dcv[j] = path.dcv[j] - slope * path.dqv[0][j];
  }
  return out;
}

void write_path_csv(std::ostream& os, const SamplePath2D& path) {
  csv::write_header(os, {"t", "X1", "X2", "dM1", "dM2", "dV1", "dV2"});
  const std::size_t n = path.grid.steps();
  for (std::size_t j = 0; j <= n; ++j) {
    auto inc = [&](const std::vector<double>& v) { return csv::number(j == 0 ? 0.0 : v[j - 1]); };
    csv::write_row(os, {csv::number(path.grid.node(j)), csv::number(path.x[0][j]), csv::number(path.x[1][j]),
                        inc(path.dm[0]), inc(path.dm[1]), inc(path.dv[0]), inc(path.dv[1])});
  }
}

}  // namespace slsito::sim
