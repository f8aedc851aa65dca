#include "slsito/harness.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <new>
#include <thread>

#include "slsito/csv.hpp"
#include "slsito/error.hpp"
#include "slsito/funcatalog.hpp"
#include "slsito/localtime.hpp"
#include "slsito/rng.hpp"
#include "slsito/version.hpp"

namespace slsito::harness {

using sim::Coord;
using sim::SamplePath2D;

const stats::Moments& LevelResult::column(const std::string& name) const {
  for (const auto& c : stats) {
    if (c.name == name) return c.moments;
  }
  throw ConfigurationError("unknown summary column: " + name);
}

double LevelResult::excluded_fraction() const {
  return n_paths == 0 ? 0.0 : static_cast<double>(excluded) / static_cast<double>(n_paths);
}

bool EnsembleSummary::passed() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

ito::TestFunction resolve_function(const std::string& id) {
  const auto at = id.find('@');
  if (at == std::string::npos) return fn::catalog_entry(id).function;
  const std::string base = id.substr(0, at);
  double n = 0.0;
  try {
    n = std::stod(id.substr(at + 1));
  } catch (const std::logic_error&) {
    throw ConfigurationError("bad mollifier order in function id " + id);
  }
  if (!(n >= 1.0)) throw ConfigurationError("bad mollifier order in function id " + id);
  return fn::mollify(fn::catalog_entry(base).function, n);
}

namespace {

struct LevelContext {
  std::size_t level;
  sim::TimeGrid grid;
  double eps;
  double spacing;
};

using PathEval = std::function<std::vector<double>(const SamplePath2D&, const LevelContext&)>;

struct Experiment {
  std::vector<std::string> columns;
  PathEval eval;
};

std::vector<std::string> ito_columns() {
  std::vector<std::string> c{"lhs"};
  for (const char* n : ito::term_names()) c.emplace_back(n);
  c.emplace_back("residual");
  return c;
}

std::vector<double> ito_row(const ito::ItoReport& r) {
  std::vector<double> row{r.lhs};
  row.insert(row.end(), r.terms.begin(), r.terms.end());
  row.push_back(r.residual);
  return row;
}

ito::LocalTimeMethod method_of(const ExperimentConfig& cfg) {
  return cfg.estimator == "tanaka" ? ito::LocalTimeMethod::Tanaka : ito::LocalTimeMethod::Occupation;
}

const fn::CatalogEntry& entry_supporting(const ExperimentConfig& cfg, fn::Formula f) {
  const auto& e = fn::catalog_entry(cfg.function);
  if (!e.supports(f)) {
    throw ConfigurationError("function " + e.id + " does not support formula " + fn::formula_name(f));
  }
  return e;
}

// Bump with compact support in (-1, 1) and its derivative.
double parts_bump(double, double x) { return std::fabs(x) < 1.0 ? std::pow(1.0 - x * x, 3) : 0.0; }
double parts_bump_grad(double, double x) {
  return std::fabs(x) < 1.0 ? -6.0 * x * (1.0 - x * x) * (1.0 - x * x) : 0.0;
}

Experiment make_experiment(const ExperimentConfig& cfg, ExperimentKind kind) {
  const Coord c = cfg.coordinate;
  const auto method = method_of(cfg);
  switch (kind) {
    case ExperimentKind::Simulate:
      return {{"x1_T", "x2_T", "qv1_T", "qv2_T", "cv_T", "realized_qv1", "realized_qv2", "realized_cv", "residual"},
              [](const SamplePath2D& p, const LevelContext&) {
                const double q1 = sim::quadratic_variation_law(p, Coord::X1).terminal();
                const double q2 = sim::quadratic_variation_law(p, Coord::X2).terminal();
                const double cv = sim::cross_variation_law(p).terminal();
                const double r1 = sim::realized_quadratic_variation(p, Coord::X1).terminal();
                const double r2 = sim::realized_quadratic_variation(p, Coord::X2).terminal();
                const double rc = sim::realized_cross_variation(p).terminal();
                return std::vector<double>{p.x[0].back(), p.x[1].back(), q1, q2, cv, r1, r2, rc, rc - cv};
              }};
    case ExperimentKind::LocalTime:
      return {{"occupation_L0", "tanaka_L0", "occupation_identity_occupation", "occupation_identity_tanaka",
               "tanaka_min", "residual"},
              [c](const SamplePath2D& p, const LevelContext& ctx) {
                const auto levels = ito::default_levels(p, c, ctx.eps);
                const auto occ = lt::local_time_occupation(p, c, levels, ctx.eps);
                const auto tan = lt::local_time_tanaka(p, c, levels);
                const std::size_t k0 = *levels.at_or_below(0.0);
                const std::size_t N = ctx.grid.steps();
                const lt::SpaceTimeFn one = [](double, double) { return 1.0; };
                const auto ro = lt::occupation_identity(p, c, one, occ);
                const auto rt = lt::occupation_identity(p, c, one, tan);
                return std::vector<double>{occ.value(N, k0),   tan.value(N, k0), ro.abs() / ro.lhs, rt.abs() / rt.lhs,
                                           tan.min_value(), lt::max_abs_difference(occ, tan)};
              }};
    case ExperimentKind::Isometry: {
      const fn::IsometryPair& pair = fn::isometry_pair(cfg.function);
      const std::size_t count = cfg.level_count;
      return {{"integral", "integral_sq", "measure_term", "residual"},
              [&pair, count](const SamplePath2D& p, const LevelContext&) {
                std::vector<double> levels(count);
                for (std::size_t i = 0; i < count; ++i) {
                  levels[i] = pair.level_lo + (pair.level_hi - pair.level_lo) * static_cast<double>(i) /
                                                  static_cast<double>(count - 1);
                }
                const sls::MartingaleField field = pair.field == fn::FieldKind::Scaled
                                                       ? sls::scaled_martingale_field(p, pair.coordinate, levels, pair.scale)
                                                       : sls::indicator_martingale_field(p, pair.coordinate, levels);
                const auto e = sls::sample_integrand(pair.integrand, p, levels);
                const auto s = sls::isometry_sample(e, field, p.grid.steps());
                const double sq = s.integral * s.integral;
                return std::vector<double>{s.integral, sq, s.measure_term, sq - s.measure_term};
              }};
    }
    case ExperimentKind::Parts:
      return {{"lhs", "rhs", "residual"}, [](const SamplePath2D& p, const LevelContext& ctx) {
                const auto levels = lt::make_level_grid(-1.5, 1.5, ctx.spacing).nodes();
                const auto field = sls::scaled_martingale_field(p, Coord::X1, levels, [](double a) { return a; }, false);
                const auto r = sls::integration_by_parts(parts_bump, parts_bump_grad, field.h, p.grid.steps());
                return std::vector<double>{r.lhs, r.rhs, r.lhs - r.rhs};
              }};
    case ExperimentKind::ItoSmooth: {
      const auto f = resolve_function(cfg.function);
      return {ito_columns(), [f](const SamplePath2D& p, const LevelContext&) {
                return ito_row(ito::ito_smooth_residual(f, p));
              }};
    }
    case ExperimentKind::Ito2D: {
      const auto f = resolve_function(cfg.function);
      return {ito_columns(), [f, method](const SamplePath2D& p, const LevelContext& ctx) {
                return ito_row(ito::ito2d_residual(f, p, ito::default_levels(p, ctx.eps), ctx.eps, method));
              }};
    }
    case ExperimentKind::ItoSplit: {
      const auto& e = entry_supporting(cfg, fn::Formula::ItoSplit);
      if (!e.split) throw ConfigurationError("function " + e.id + " has no split form");
      const ito::SplitFunction split = *e.split;
      return {ito_columns(), [split, method](const SamplePath2D& p, const LevelContext& ctx) {
                return ito_row(ito::ito2d_split_residual(split, p, ito::default_levels(p, ctx.eps), ctx.eps, method));
              }};
    }
    case ExperimentKind::Corollary: {
      const auto& e = entry_supporting(cfg, fn::Formula::Corollary);
      if (!e.curve) throw ConfigurationError("function " + e.id + " has no curve");
      const ito::TestFunction f = e.function;
      const ito::Curve curve = *e.curve;
      return {ito_columns(), [f, curve, method](const SamplePath2D& p, const LevelContext& ctx) {
                return ito_row(ito::curve_corollary_residual(f, curve, p, ctx.eps, method));
              }};
    }
    case ExperimentKind::Ito1D: {
      const auto& e = entry_supporting(cfg, fn::Formula::Ito1D);
      if (!e.one_dimensional) throw ConfigurationError("function " + e.id + " has no one-dimensional form");
      const ito::SplitFunction1D split = *e.one_dimensional;
      return {ito_columns(), [split, c, method](const SamplePath2D& p, const LevelContext& ctx) {
                return ito_row(ito::ito1d_residual(split, p, c, ito::default_levels(p, c, ctx.eps), ctx.eps, method));
              }};
    }
    case ExperimentKind::Curve1D: {
      const auto& e = entry_supporting(cfg, fn::Formula::Curve1D);
      if (!e.one_dimensional || !e.moving_level) {
        throw ConfigurationError("function " + e.id + " has no moving-level form");
      }
      const ito::TestFunction1D f = e.one_dimensional->combined();
      const ito::MovingLevel level = *e.moving_level;
      return {ito_columns(), [f, level, c, method](const SamplePath2D& p, const LevelContext& ctx) {
                return ito_row(
                    ito::curve1d_residual(f, level, p, c, ito::default_levels(p, c, ctx.eps), ctx.eps, method));
              }};
    }
    case ExperimentKind::Convergence:
      break;
  }
  throw ConfigurationError("experiment kind has no per-path evaluation");
}

struct PathOutcome {
  std::vector<double> values;
  bool excluded = false;
};

// Work items are claimed through an atomic counter; outcomes land at their
// own index so the reduction below is independent of scheduling.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& body) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  const std::size_t count = std::max<std::size_t>(1, std::min(threads, n));
  if (count == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(count);
    for (std::size_t t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

LevelResult run_level(const ExperimentConfig& cfg, ExperimentKind kind, const Experiment& ex, std::size_t level) {
  const bool parts = kind == ExperimentKind::Parts;
  LevelResult out;
  out.level = level;
  out.steps = parts ? cfg.steps.front() : cfg.steps[level];
  out.spacing = parts ? cfg.spacings[level] : 0.0;
  const sim::TimeGrid grid(cfg.horizon, out.steps);
  out.eps = cfg.eps_scale * lt::default_band_width(grid);
  out.n_paths = cfg.resolved_paths();
  out.columns = ex.columns;
  const LevelContext ctx{level, grid, out.eps, out.spacing};

  std::vector<PathOutcome> outcomes(out.n_paths);
  const std::size_t threads = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  parallel_for(out.n_paths, threads, [&](std::size_t p) {
    sim::DiffusionSpec spec = cfg.diffusion;
    spec.seed = rng::derive_key(cfg.seed, level, p);
    PathOutcome& o = outcomes[p];
    try {
      const SamplePath2D path = sim::simulate_diffusion(spec, grid);
      o.values = ex.eval(path, ctx);
      for (double v : o.values) {
        if (!std::isfinite(v)) o.excluded = true;
      }
    } catch (const EvaluationError&) {
      o.excluded = true;
    }
  });

  for (std::size_t p = 0; p < outcomes.size(); ++p) {
    if (outcomes[p].excluded) {
      ++out.excluded;
      continue;
    }
    out.path_ids.push_back(p);
    out.rows.push_back(std::move(outcomes[p].values));
  }
  std::vector<double> col(out.rows.size());
  for (std::size_t c = 0; c < out.columns.size(); ++c) {
    for (std::size_t r = 0; r < out.rows.size(); ++r) col[r] = out.rows[r][c];
    out.stats.push_back({out.columns[c], stats::describe(col)});
    if (out.columns[c] == "residual") {
      for (double& v : col) v = std::fabs(v);
      out.stats.push_back({"abs_residual", stats::describe(col)});
    }
  }
  if (kind == ExperimentKind::Isometry && out.rows.size() >= 2) {
    std::vector<sls::IsometrySample> samples(out.rows.size());
    for (std::size_t r = 0; r < out.rows.size(); ++r) samples[r] = {out.rows[r][0], out.rows[r][2]};
    out.isometry = sls::isometry_check(samples);
  }
  return out;
}

ExperimentKind effective_kind(const ExperimentConfig& cfg) {
  return cfg.kind == ExperimentKind::Convergence ? cfg.target : cfg.kind;
}

std::string level_file(std::size_t level) { return "level_" + std::to_string(level) + ".csv"; }

}  // namespace

std::vector<ConvergenceRow> decay_table(const std::vector<LevelResult>& levels) {
  std::vector<ConvergenceRow> rows;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    ConvergenceRow r;
    r.level = levels[k].level;
    r.steps = levels[k].steps;
    r.spacing = levels[k].spacing;
    r.median_abs_residual = levels[k].column("abs_residual").median;
    r.decay = std::numeric_limits<double>::quiet_NaN();
    rows.push_back(r);
  }
  for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
    const double a = rows[k].median_abs_residual;
    const double b = rows[k + 1].median_abs_residual;
    if (b > 0.0) {
      rows[k].decay = a / b;
    } else if (a > 0.0) {
      rows[k].decay = std::numeric_limits<double>::infinity();
    }
  }
  return rows;
}

EnsembleSummary run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const ExperimentKind kind = effective_kind(cfg);
  const Experiment ex = make_experiment(cfg, kind);
  EnsembleSummary s;
  s.config = cfg;
  try {
    for (std::size_t level = 0; level < cfg.level_total(); ++level) s.levels.push_back(run_level(cfg, kind, ex, level));
  } catch (const std::bad_alloc&) {
    if (!cfg.out_dir.empty()) {
      s.checks.push_back({"completed_levels", static_cast<double>(s.levels.size()),
                          static_cast<double>(cfg.level_total()), false});
      write_outputs(s, cfg.out_dir);
    }
    throw;
  }

  for (const auto& l : s.levels) {
    const std::string suffix = "_level_" + std::to_string(l.level);
    s.checks.push_back({"exclusion" + suffix, l.excluded_fraction(), cfg.max_exclusion,
                        l.excluded_fraction() <= cfg.max_exclusion});
    if (l.isometry) {
      s.checks.push_back({"isometry_z" + suffix, l.isometry->z, cfg.z_threshold,
                          std::fabs(l.isometry->z) <= cfg.z_threshold});
    }
  }
  if (cfg.kind == ExperimentKind::Convergence) {
    s.convergence = decay_table(s.levels);
    const double threshold = cfg.resolved_decay_threshold();
    for (std::size_t k = 0; k + 1 < s.convergence.size(); ++k) {
      const double d = s.convergence[k].decay;
      s.checks.push_back({"decay_level_" + std::to_string(k), d, threshold, std::isnan(d) || d >= threshold});
    }
  }
  if (!cfg.out_dir.empty()) write_outputs(s, cfg.out_dir);
  return s;
}

std::vector<ConvergenceRow> convergence_study(const ExperimentConfig& cfg) {
  ExperimentConfig c = cfg;
  if (c.kind != ExperimentKind::Convergence) {
    c.target = c.kind;
    c.kind = ExperimentKind::Convergence;
  }
  return run_experiment(c).convergence;
}

void write_outputs(const EnsembleSummary& s, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigurationError("cannot create output directory " + dir + ": " + ec.message());
  auto open = [&](const std::string& name) {
    std::ofstream os(fs::path(dir) / name, std::ios::binary);
    if (!os) throw ConfigurationError("cannot write " + (fs::path(dir) / name).string());
    return os;
  };

  {
    auto os = open("manifest.txt");
    os << "# slsito " << kVersion << "\n";
    os << "rng_algorithm=" << rng::kRngAlgorithmVersion << "\n";
    os << s.config.dump();
  }
  {
    auto os = open("summary.csv");
    csv::write_header(os, {"level", "steps", "spacing", "eps", "n_paths", "excluded", "column", "mean", "se",
                           "median", "mad"});
    for (const auto& l : s.levels) {
      for (const auto& c : l.stats) {
        csv::write_row(os, {std::to_string(l.level), std::to_string(l.steps), csv::number(l.spacing),
                            csv::number(l.eps), std::to_string(l.n_paths), std::to_string(l.excluded), c.name,
                            csv::number(c.moments.mean), csv::number(c.moments.se), csv::number(c.moments.median),
                            csv::number(c.moments.mad)});
      }
    }
  }
  for (const auto& l : s.levels) {
    auto os = open(level_file(l.level));
    std::vector<std::string> header{"path_id"};
    header.insert(header.end(), l.columns.begin(), l.columns.end());
    csv::write_header(os, header);
    for (std::size_t r = 0; r < l.rows.size(); ++r) {
      std::vector<std::string> row{std::to_string(l.path_ids[r])};
      for (double v : l.rows[r]) row.push_back(csv::number(v));
      csv::write_row(os, row);
    }
  }
  std::vector<sls::IsometryReport> iso;
  for (const auto& l : s.levels) {
    if (l.isometry) iso.push_back(*l.isometry);
  }
  if (!iso.empty()) {
    auto os = open("isometry.csv");
    sls::write_isometry_csv(os, iso);
  }
  if (!s.convergence.empty()) {
    auto os = open("convergence.csv");
    csv::write_header(os, {"level", "steps", "spacing", "median_abs_residual", "decay_factor"});
    for (const auto& r : s.convergence) {
      csv::write_row(os, {std::to_string(r.level), std::to_string(r.steps), csv::number(r.spacing),
                          csv::number(r.median_abs_residual), std::isnan(r.decay) ? "n/a" : csv::number(r.decay)});
    }
  }
  {
    auto os = open("checks.csv");
    csv::write_header(os, {"check", "value", "threshold", "pass"});
    for (const auto& c : s.checks) {
      csv::write_row(os, {c.name, csv::number(c.value), csv::number(c.threshold), c.pass ? "1" : "0"});
    }
  }
}

}  // namespace slsito::harness
