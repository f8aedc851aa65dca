#include "slsito/itoformula.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "slsito/bvmeasure.hpp"
#include "slsito/csv.hpp"
#include "slsito/error.hpp"
#include "slsito/funcatalog.hpp"
#include "slsito/rng.hpp"
#include "slsito/slsintegral.hpp"
#include "slsito/stats.hpp"

namespace slsito::ito {

using sim::Coord;
using sim::SamplePath2D;

const std::array<const char*, kTermCount>& term_names() noexcept {
  static const std::array<const char*, kTermCount> names = {
      "term_time", "term_dx1",  "term_dx2",    "term_lt1",    "term_sls1", "term_lt2",
      "term_sls2", "term_cross", "term_delta1", "term_delta2", "term_curve"};
  return names;
}

double ItoReport::term_sum() const {
  stats::CompensatedSum s;
  for (double t : terms) s += t;
  return s.value();
}

void ItoReport::finalize() { residual = lhs - term_sum(); }

bool ItoReport::finite() const {
  if (!std::isfinite(lhs) || !std::isfinite(residual)) return false;
  return std::all_of(terms.begin(), terms.end(), [](double t) { return std::isfinite(t); });
}

void write_report_header(std::ostream& os) {
  std::vector<std::string> cols{"path_id", "lhs"};
  for (const char* n : term_names()) cols.emplace_back(n);
  cols.emplace_back("residual");
  csv::write_header(os, cols);
}

void write_report_row(std::ostream& os, std::size_t path_id, const ItoReport& r) {
  std::vector<std::string> row{std::to_string(path_id), csv::number(r.lhs)};
  for (double t : r.terms) row.push_back(csv::number(t));
  row.push_back(csv::number(r.residual));
  csv::write_row(os, row);
}

namespace {

double terminal_qv(const SamplePath2D& path, Coord c) {
  const auto& q = path.qv_increments(c);
  return stats::pairwise_sum(q);
}

lt::LocalTimeSurface surface_for(const SamplePath2D& path, Coord c, const lt::LevelGrid& levels, double eps,
                                 LocalTimeMethod method) {
  if (method == LocalTimeMethod::Tanaka) return lt::local_time_tanaka(path, c, levels);
  return lt::local_time_occupation(path, c, levels, eps);
}

double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw EvaluationError(std::string(what) + " returned a non-finite value");
  return v;
}

// x_c at step j in the (t, x1, x2) argument order.
struct Point {
  double t, x1, x2;
};

Point point(const SamplePath2D& path, std::size_t j) {
  return {path.grid.node(j), path.x[0][j], path.x[1][j]};
}

double eval(const Fn3& f, const Point& p, const char* what) { return checked(f(p.t, p.x1, p.x2), what); }

// Terms that use only pointwise callbacks along the path.
struct PathSums {
  double time = 0.0, dx1 = 0.0, dx2 = 0.0, cross = 0.0, delta1 = 0.0, delta2 = 0.0;
};

PathSums path_sums(const TestFunction& f, const TestFunction* second, const SamplePath2D& path) {
  stats::CompensatedSum time, dx1, dx2, cross, d1s, d2s;
  const double dt = path.grid.dt();
  const std::size_t N = path.grid.steps();
  const bool need_time = f.depends.t;
  for (std::size_t j = 0; j < N; ++j) {
    const Point p = point(path, j);
    if (need_time) time += eval(f.dt, p, "time derivative") * dt;
    dx1 += eval(f.d1, p, "x1 derivative") * (path.dm[0][j] + path.dv[0][j]);
    dx2 += eval(f.d2, p, "x2 derivative") * (path.dm[1][j] + path.dv[1][j]);
    const double m = eval(f.d12, p, "mixed derivative");
    if (m != 0.0) cross += m * path.dcv[j];
    if (second != nullptr) {
      d1s += 0.5 * eval(second->d11, p, "second x1 derivative") * path.dqv[0][j];
      d2s += 0.5 * eval(second->d22, p, "second x2 derivative") * path.dqv[1][j];
    }
  }
  return {time.value(), dx1.value(), dx2.value(), cross.value(), d1s.value(), d2s.value()};
}

double lhs_of(const TestFunction& f, const SamplePath2D& path) {
  const Point a = point(path, 0);
  const Point b = point(path, path.grid.steps());
  return eval(f.value, b, "function") - eval(f.value, a, "function");
}

struct LocalTimeTerms {
  double lt = 0.0;
  double sls = 0.0;
};

// Level-Stieltjes and two-parameter terms for a derivative field h(j, a).
LocalTimeTerms local_time_terms(const lt::LocalTimeSurface& L, const sls::LazyField& h) {
  const auto& levels = L.level_grid();
  const std::size_t J = L.time_grid().steps();
  const auto row = L.terminal_row();
  std::vector<double> H(levels.size());
  for (std::size_t k = 0; k < levels.size(); ++k) {
    H[k] = row[k] != 0.0 || (k > 0 && row[k - 1] != 0.0) ? checked(h(J, levels.node(k)), "derivative") : 0.0;
  }
  LocalTimeTerms out;
  // Cells with L(T, a_k) = 0 contribute nothing, so unevaluated H entries are never used.
  stats::CompensatedSum s;
  for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
    if (row[k] != 0.0) s += row[k] * (H[k + 1] - H[k]);
  }
  out.lt = s.value();
  out.sls = -sls::sls_integral_local_time(L, h, J);
  return out;
}

sls::LazyField field_for(const TestFunction& f, const SamplePath2D& path, Coord c) {
  const auto& nodes_x = path.x;
  const sim::TimeGrid grid = path.grid;
  if (c == Coord::X1) {
    return [&f, &nodes_x, grid](std::size_t j, double a) { return f.d1(grid.node(j), a, nodes_x[1][j]); };
  }
  return [&f, &nodes_x, grid](std::size_t j, double a) { return f.d2(grid.node(j), nodes_x[0][j], a); };
}

void add_local_time_terms(ItoReport& r, const TestFunction& fv, const SamplePath2D& path, const LevelPair& levels,
                          double eps, LocalTimeMethod method) {
  const auto L1 = surface_for(path, Coord::X1, levels.x1, eps, method);
  const auto t1 = local_time_terms(L1, field_for(fv, path, Coord::X1));
  r[Term::Lt1] = t1.lt;
  r[Term::Sls1] = t1.sls;
  const auto L2 = surface_for(path, Coord::X2, levels.x2, eps, method);
  const auto t2 = local_time_terms(L2, field_for(fv, path, Coord::X2));
  r[Term::Lt2] = t2.lt;
  r[Term::Sls2] = t2.sls;
}

void check_eps(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidArgument("band width must be positive");
}

}  // namespace

lt::LevelGrid default_levels(const SamplePath2D& path, Coord c, double eps) {
  check_eps(eps);
  const double q = std::max(terminal_qv(path, Coord::X1), terminal_qv(path, Coord::X2));
  return lt::level_grid_for_path(path, c, eps, 4.0 * std::sqrt(q), 0.0);
}

LevelPair default_levels(const SamplePath2D& path, double eps) {
  return {default_levels(path, Coord::X1, eps), default_levels(path, Coord::X2, eps)};
}

ItoReport ito_smooth_residual(const TestFunction& f, const SamplePath2D& path) {
  f.require_second_order();
  if (f.regularity != Regularity::Smooth) throw ConfigurationError("function " + f.name + " is not smooth");
  ItoReport r;
  r.lhs = lhs_of(f, path);
  const PathSums s = path_sums(f, &f, path);
  r[Term::Time] = s.time;
  r[Term::Dx1] = s.dx1;
  r[Term::Dx2] = s.dx2;
  r[Term::Cross] = s.cross;
  r[Term::Delta1] = s.delta1;
  r[Term::Delta2] = s.delta2;
  r.finalize();
  return r;
}

ItoReport ito2d_residual(const TestFunction& f, const SamplePath2D& path, const LevelPair& levels, double eps,
                         LocalTimeMethod method) {
  f.require_first_order();
  check_eps(eps);
  ItoReport r;
  r.lhs = lhs_of(f, path);
  const PathSums s = path_sums(f, nullptr, path);
  r[Term::Time] = s.time;
  r[Term::Dx1] = s.dx1;
  r[Term::Dx2] = s.dx2;
  r[Term::Cross] = s.cross;
  add_local_time_terms(r, f, path, levels, eps, method);
  r.finalize();
  return r;
}

ItoReport ito2d_split_residual(const SplitFunction& split, const SamplePath2D& path, const LevelPair& levels,
                               double eps, LocalTimeMethod method) {
  split.smooth_part.require_second_order();
  split.rough_part.require_first_order();
  check_eps(eps);
  const TestFunction f = split.combined();
  ItoReport r;
  r.lhs = lhs_of(f, path);
  const PathSums s = path_sums(f, &split.smooth_part, path);
  r[Term::Time] = s.time;
  r[Term::Dx1] = s.dx1;
  r[Term::Dx2] = s.dx2;
  r[Term::Cross] = s.cross;
  r[Term::Delta1] = s.delta1;
  r[Term::Delta2] = s.delta2;
  add_local_time_terms(r, split.rough_part, path, levels, eps, method);
  r.finalize();
  return r;
}

ItoReport curve_corollary_residual(const TestFunction& f, const Curve& curve, const SamplePath2D& path, double eps,
                                   LocalTimeMethod method) {
  f.require_second_order();
  check_eps(eps);
  if (!curve.value || !curve.slope || !curve.curvature || !curve.jump) {
    throw ConfigurationError("curve needs value, slope, curvature and jump callbacks");
  }
  ItoReport r;
  r.lhs = lhs_of(f, path);
  const PathSums s = path_sums(f, &f, path);
  r[Term::Time] = s.time;
  r[Term::Dx1] = s.dx1;
  r[Term::Dx2] = s.dx2;
  r[Term::Cross] = s.cross;
  r[Term::Delta1] = s.delta1;
  r[Term::Delta2] = s.delta2;

  const SamplePath2D star = sim::transform_by_curve(path, {curve.value, curve.slope, curve.curvature});
  const lt::LevelGrid zero_level(0.0, eps, 2);
  const auto L = surface_for(star, Coord::X2, zero_level, eps, method);
  stats::CompensatedSum c;
  for (std::size_t j = 0; j < path.grid.steps(); ++j) {
    const double dL = L.increment(j, 0);
    if (dL != 0.0) c += checked(curve.jump(path.x[0][j]), "curve jump") * dL;
  }
  r[Term::Curve] = c.value();
  r.finalize();
  return r;
}

SplitFunction corollary_split(const TestFunction& f, const Curve& curve) {
  f.require_first_order();
  if (!curve.value || !curve.jump) throw ConfigurationError("curve needs value and jump callbacks");
  const Fn1 b = curve.value;
  const Fn1 J = curve.jump;
  auto pos = [](double x) { return x > 0.0 ? x : 0.0; };

  TestFunction v;
  v.name = f.name + "_v";
  v.value = [b, J, pos](double, double x1, double x2) {
    return fn::integrate([&](double y) { return J(y) * pos(x2 - b(y)); }, 0.0, x1);
  };
  v.dt = [](double, double, double) { return 0.0; };
  v.d1 = [b, J, pos](double, double x1, double x2) { return J(x1) * pos(x2 - b(x1)); };
  v.d2 = [b, J](double, double x1, double x2) {
    return fn::integrate([&](double y) { return x2 > b(y) ? J(y) : 0.0; }, 0.0, x1);
  };
  v.d12 = [b, J](double, double x1, double x2) { return x2 > b(x1) ? J(x1) : 0.0; };
  v.regularity = Regularity::BvOnly;
  v.depends = {false, true, true};

  TestFunction h;
  h.name = f.name + "_h";
  h.value = [f, v](double t, double x1, double x2) { return f.value(t, x1, x2) - v.value(t, x1, x2); };
  h.dt = f.dt;
  h.d1 = [f, v](double t, double x1, double x2) { return f.d1(t, x1, x2) - v.d1(t, x1, x2); };
  h.d2 = [f, v](double t, double x1, double x2) { return f.d2(t, x1, x2) - v.d2(t, x1, x2); };
  h.d12 = [f, v](double t, double x1, double x2) { return f.d12(t, x1, x2) - v.d12(t, x1, x2); };
  h.regularity = Regularity::Split;
  h.depends = {f.depends.t, true, true};
  return {h, v};
}

ItoReport ito1d_residual(const SplitFunction1D& split, const SamplePath2D& path, Coord c,
                         const lt::LevelGrid& levels, double eps, LocalTimeMethod method) {
  const TestFunction1D& fh = split.smooth_part;
  const TestFunction1D& fv = split.rough_part;
  fh.require_first_order();
  fv.require_first_order();
  if (!fh.dxx) throw ConfigurationError("function " + fh.name + " lacks second derivative");
  check_eps(eps);
  const TestFunction1D f = split.combined();
  const auto& x = path.values(c);
  const auto& dm = path.martingale_increments(c);
  const auto& dv = path.bv_increments(c);
  const auto& dq = path.qv_increments(c);
  const sim::TimeGrid& grid = path.grid;
  const std::size_t N = grid.steps();
  const bool first = c == Coord::X1;

  ItoReport r;
  r.lhs = checked(f.value(grid.horizon(), x[N]), "function") - checked(f.value(0.0, x[0]), "function");
  stats::CompensatedSum time, dx, delta;
  for (std::size_t j = 0; j < N; ++j) {
    const double t = grid.node(j);
    time += checked(f.dt(t, x[j]), "time derivative") * grid.dt();
    dx += checked(f.dx(t, x[j]), "derivative") * (dm[j] + dv[j]);
    delta += 0.5 * checked(fh.dxx(t, x[j]), "second derivative") * dq[j];
  }
  r[Term::Time] = time.value();
  r[first ? Term::Dx1 : Term::Dx2] = dx.value();
  r[first ? Term::Delta1 : Term::Delta2] = delta.value();

  const auto L = surface_for(path, c, levels, eps, method);
  const auto terms = local_time_terms(L, [&fv, grid](std::size_t j, double a) { return fv.dx(grid.node(j), a); });
  r[first ? Term::Lt1 : Term::Lt2] = terms.lt;
  r[first ? Term::Sls1 : Term::Sls2] = terms.sls;
  r.finalize();
  return r;
}

ItoReport curve1d_residual(const TestFunction1D& f, const MovingLevel& level, const SamplePath2D& path, Coord c,
                           const lt::LevelGrid& levels, double eps, LocalTimeMethod method) {
  f.require_first_order();
  if (!f.dxx) throw ConfigurationError("function " + f.name + " lacks second derivative");
  if (!level.gamma || !level.jump) throw ConfigurationError("moving level needs gamma and jump callbacks");
  check_eps(eps);
  const auto& x = path.values(c);
  const auto& dm = path.martingale_increments(c);
  const auto& dv = path.bv_increments(c);
  const auto& dq = path.qv_increments(c);
  const sim::TimeGrid& grid = path.grid;
  const std::size_t N = grid.steps();
  const bool first = c == Coord::X1;

  ItoReport r;
  r.lhs = checked(f.value(grid.horizon(), x[N]), "function") - checked(f.value(0.0, x[0]), "function");
  const auto L = surface_for(path, c, levels, eps, method);
  stats::CompensatedSum time, dx, delta, curve;
  for (std::size_t j = 0; j < N; ++j) {
    const double t = grid.node(j);
    time += checked(f.dt(t, x[j]), "time derivative") * grid.dt();
    dx += checked(f.dx(t, x[j]), "derivative") * (dm[j] + dv[j]);
    delta += 0.5 * checked(f.dxx(t, x[j]), "second derivative") * dq[j];
    const auto k = levels.at_or_below(checked(level.gamma(t), "moving level"));
    if (!k) continue;
    const double dL = L.increment(j, *k);
    if (dL != 0.0) curve += checked(level.jump(t), "jump") * dL;
  }
  r[Term::Time] = time.value();
  r[first ? Term::Dx1 : Term::Dx2] = dx.value();
  r[first ? Term::Delta1 : Term::Delta2] = delta.value();
  r[Term::Curve] = curve.value();
  r.finalize();
  return r;
}

namespace {

struct Sampler {
  rng::CounterRng gen;
  std::uint64_t pos = 0;
  double uniform(double lo, double hi) {
    const auto [u, unused] = gen.uniform_pair(pos++);
    (void)unused;
    return lo + (hi - lo) * u;
  }
};

// Largest |callback - central difference| over sample points where halving
// the step leaves the difference stable (a kink between the stencils shows up
// as an unstable difference and the point is skipped).
Diagnostic fd_audit(const std::string& name, const Fn3& exact, const std::function<double(const Point&, double)>& fd,
                    const std::vector<Point>& pts) {
  Diagnostic d;
  d.name = "fd_" + name;
  if (!exact) {
    d.message = "callback absent";
    return d;
  }
  const double h = 1e-4;
  double worst = 0.0;
  std::size_t used = 0;
  for (const auto& p : pts) {
    const double a = fd(p, h);
    const double b = fd(p, h / 2.0);
    if (!std::isfinite(a) || !std::isfinite(b) || std::fabs(a - b) > 1e-5 * (1.0 + std::fabs(a))) continue;
    const double e = exact(p.t, p.x1, p.x2);
    if (!std::isfinite(e)) {
      worst = e;
      break;
    }
    worst = std::max(worst, std::fabs(e - b));
    ++used;
  }
  d.value = worst;
  d.ok = std::isfinite(worst) && worst <= 1e-4;
  d.message = std::to_string(used) + " of " + std::to_string(pts.size()) + " points in smooth regions";
  return d;
}

// Variation of a derivative along a level line, at two grid resolutions.
Diagnostic variation_audit(const std::string& name, const std::function<double(double)>& g, double lo, double hi) {
  auto tv = [&](std::size_t n) {
    std::vector<double> v(n + 1);
    for (std::size_t i = 0; i <= n; ++i) v[i] = g(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n));
    return bv::total_variation1(v);
  };
  const double coarse = tv(1000);
  const double fine = tv(16000);
  Diagnostic d;
  d.name = "variation_" + name;
  d.value = fine;
  const bool finite = std::isfinite(coarse) && std::isfinite(fine);
  d.ok = finite && fine <= 1.25 * coarse + 1e-9;
  d.message = d.ok ? "stable under refinement"
                   : "variation grows under refinement (coarse " + csv::number(coarse) + ", fine " + csv::number(fine) +
                         "); infinite variation suspected";
  return d;
}

}  // namespace

std::vector<Diagnostic> condition_check(const TestFunction& f, const Box& box, std::size_t samples,
                                        std::uint64_t seed) {
  std::vector<Diagnostic> out;
  if (!f.value) {
    out.push_back({"callbacks", 0.0, false, "value callback absent"});
    return out;
  }
  Sampler s{rng::CounterRng(rng::derive_key(seed, 7, 0))};
  std::vector<Point> pts(samples);
  const double t_lo = std::max(box.t_lo, 1e-3);
  for (auto& p : pts) p = {s.uniform(t_lo, box.t_hi), s.uniform(box.x1_lo, box.x1_hi), s.uniform(box.x2_lo, box.x2_hi)};

  const Fn3& v = f.value;
  out.push_back(fd_audit("dt", f.dt, [&](const Point& p, double h) {
    return (v(p.t + h, p.x1, p.x2) - v(p.t - h, p.x1, p.x2)) / (2 * h);
  }, pts));
  out.push_back(fd_audit("d1", f.d1, [&](const Point& p, double h) {
    return (v(p.t, p.x1 + h, p.x2) - v(p.t, p.x1 - h, p.x2)) / (2 * h);
  }, pts));
  out.push_back(fd_audit("d2", f.d2, [&](const Point& p, double h) {
    return (v(p.t, p.x1, p.x2 + h) - v(p.t, p.x1, p.x2 - h)) / (2 * h);
  }, pts));
  if (f.d2) {
    out.push_back(fd_audit("d12", f.d12, [&](const Point& p, double h) {
      return (f.d2(p.t, p.x1 + h, p.x2) - f.d2(p.t, p.x1 - h, p.x2)) / (2 * h);
    }, pts));
    out.push_back(fd_audit("d22", f.d22, [&](const Point& p, double h) {
      return (f.d2(p.t, p.x1, p.x2 + h) - f.d2(p.t, p.x1, p.x2 - h)) / (2 * h);
    }, pts));
  }
  if (f.d1) {
    out.push_back(fd_audit("d11", f.d11, [&](const Point& p, double h) {
      return (f.d1(p.t, p.x1 + h, p.x2) - f.d1(p.t, p.x1 - h, p.x2)) / (2 * h);
    }, pts));
  }

  const double tm = 0.5 * (box.t_lo + box.t_hi);
  const double x1m = 0.5 * (box.x1_lo + box.x1_hi);
  const double x2m = 0.5 * (box.x2_lo + box.x2_hi);
  if (f.d2) {
    out.push_back(variation_audit("d2_in_x2", [&](double x2) { return f.d2(tm, x1m, x2); }, box.x2_lo, box.x2_hi));
  }
  if (f.d1) {
    out.push_back(variation_audit("d1_in_x1", [&](double x1) { return f.d1(tm, x1, x2m); }, box.x1_lo, box.x1_hi));
  }
  if (f.d12) {
    out.push_back(variation_audit("d12_in_x2", [&](double x2) { return f.d12(tm, x1m, x2); }, box.x2_lo, box.x2_hi));
  }

  double bound = 0.0;
  for (const auto& p : pts) {
    for (const Fn3* g : {&f.value, &f.d1, &f.d2}) {
      if (*g) bound = std::max(bound, std::fabs((*g)(p.t, p.x1, p.x2)));
    }
  }
  out.push_back({"bound", bound, std::isfinite(bound), std::isfinite(bound) ? "finite on sampled box" : "unbounded"});
  return out;
}

}  // namespace slsito::ito
