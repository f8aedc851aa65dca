// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "slsito/funcatalog.hpp"
#include "slsito/harness.hpp"
#include "slsito/itoformula.hpp"
#include "slsito/localtime.hpp"
#include "slsito/rng.hpp"
#include "slsito/slsintegral.hpp"
#include "slsito/stats.hpp"

using namespace slsito;
using harness::ExperimentConfig;
using harness::ExperimentKind;
using sim::Coord;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [failed]");
  }
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool within_se(double value, double target, double se, double floor = 1e-12) {
  return std::fabs(value - target) <= std::max(3.0 * se, floor);
}

ExperimentConfig convergence(ExperimentKind target, const std::string& function, std::size_t paths,
                             std::uint64_t seed) {
  ExperimentConfig c;
  c.kind = ExperimentKind::Convergence;
  c.target = target;
  c.function = function;
  c.steps = {1000, 4000, 16000};
  c.paths = paths;
  c.seed = seed;
  return c;
}

// Every decay check of a convergence run, rendered as "a, b".
void require_decay(Outcome& o, const harness::EnsembleSummary& s, const std::string& label) {
  std::string factors;
  bool ok = !s.convergence.empty();
  for (std::size_t k = 0; k + 1 < s.convergence.size(); ++k) {
    const double d = s.convergence[k].decay;
    factors += (k ? ", " : "") + fmt("%.2f", d);
    ok = ok && std::isfinite(d) && d >= s.config.resolved_decay_threshold();
  }
  o.require(ok, label + " decay " + factors + fmt(" (>= %.1f)", s.config.resolved_decay_threshold()));
}

sim::SamplePath2D bm_path(std::uint64_t seed, std::size_t steps, double rho = 0.0) {
  sim::DiffusionSpec spec;
  spec.seed = seed;
  spec.correlation = rho;
  return sim::simulate_diffusion(spec, sim::TimeGrid(1.0, steps));
}

Outcome isometry() {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig c;
  c.kind = ExperimentKind::Isometry;
  c.function = "ISO_UNIT";
  c.steps = {10000};
  c.paths = 10000;
  c.seed = 101;
  const auto s = harness::run_experiment(c);
  const double secs = seconds_since(t0);
  const auto& r = *s.levels[0].isometry;
  Outcome o;
  o.require(std::fabs(r.z) <= 3.0, fmt("E[I^2]=%.4f (se %.4f) rhs=%.6f", r.lhs, r.se_lhs, r.rhs) + fmt(" z=%.2f", r.z));
  o.require(within_se(r.lhs, 1.0, r.se_lhs) && within_se(r.rhs, 1.0, r.se_rhs, 1e-9), "both within 3 SE of 1");
  o.require(secs < 60.0, fmt("%.1f s (< 60)", secs));
  return o;
}

Outcome martingale() {
  Outcome o;
  for (const auto& pair : fn::isometry_pairs()) {
    ExperimentConfig c;
    c.kind = ExperimentKind::Isometry;
    c.function = pair.id;
    c.steps = {1000};
    c.paths = 10000;
    c.seed = 202;
    const auto& m = harness::run_experiment(c).levels[0].column("integral");
    o.require(within_se(m.mean, 0.0, m.se), pair.id + fmt(" mean I=%.4f se=%.4f", m.mean, m.se));
  }
  return o;
}

Outcome linearity() {
  std::mt19937_64 gen(303);
  std::normal_distribution<double> z;
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t ns = 3 + trial % 7, nx = 2 + trial % 5;
    std::vector<double> s(ns), x(nx);
    for (std::size_t j = 0; j < ns; ++j) s[j] = static_cast<double>(j) / static_cast<double>(ns - 1);
    x[0] = u(gen);
    for (std::size_t i = 1; i < nx; ++i) x[i] = x[i - 1] + 0.1 + std::abs(z(gen));
    bv::GridField2 h(s, x);
    for (std::size_t j = 1; j < ns; ++j)
      for (std::size_t i = 0; i < nx; ++i) h.at(j, i) = h.at(j - 1, i) + z(gen);
    sls::SimpleField a(s, x), b(s, x);
    for (auto& v : a.coeff) v = z(gen);
    for (auto& v : b.coeff) v = z(gen);
    const double alpha = u(gen), beta = u(gen);
    const double t = s[1 + trial % (ns - 1)];
    const double scale = std::abs(alpha * sls::sls_integral_simple(a, h, t)) +
                         std::abs(beta * sls::sls_integral_simple(b, h, t)) + 1e-300;
    worst = std::max(worst, sls::linearity_check(a, b, alpha, beta, h, t) / scale);
  }
  Outcome o;
  o.require(worst <= 1e-12, fmt("100 trials, worst relative error %.2e", worst));
  return o;
}

Outcome parts() {
  ExperimentConfig c;
  c.kind = ExperimentKind::Parts;
  c.steps = {1000};
  c.spacings = {0.1, 0.05, 0.025};
  c.paths = 1000;
  c.seed = 404;
  const auto s = harness::run_experiment(c);
  const auto& fine = s.levels.back();
  double worst = 0.0, scale = 0.0;
  for (const auto& row : fine.rows) {
    worst = std::max(worst, std::abs(row[2]));
    scale = std::max(scale, std::abs(row[1]));
  }
  Outcome o;
  o.require(worst <= 1e-2 * scale, fmt("finest max |lhs-rhs|=%.2e vs max |rhs|=%.2f", worst, scale));
  auto rows = harness::decay_table(s.levels);
  std::string factors;
  bool ok = true;
  for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
    factors += (k ? ", " : "") + fmt("%.2f", rows[k].decay);
    ok = ok && rows[k].decay >= 1.3;
  }
  o.require(ok, "median decay per halving " + factors + " (>= 1.3)");
  return o;
}

Outcome local_time() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t N = 100000, paths = 5000;
  const double eps = std::sqrt(1.0 / static_cast<double>(N));
  const auto levels = lt::LevelGrid::anchored(0.0, 0, eps, 2);
  std::vector<double> occ, tan;
  occ.reserve(2 * paths);
  tan.reserve(2 * paths);
  sim::SamplePath2D p;
  sim::DiffusionSpec spec;
  for (std::size_t k = 0; k < paths; ++k) {
    spec.seed = rng::derive_key(505, 0, k);
    sim::simulate_diffusion_into(spec, sim::TimeGrid(1.0, N), p);
    for (Coord c : {Coord::X1, Coord::X2}) {
      occ.push_back(lt::local_time_occupation(p, c, levels, eps).value(N, 0));
      tan.push_back(lt::local_time_tanaka(p, c, levels).value(N, 0));
    }
  }
  const double secs = seconds_since(t0);
  const double target = 1.0 / std::sqrt(2.0 * M_PI);
  const auto mo = stats::describe(occ), mt = stats::describe(tan);
  Outcome o;
  o.require(within_se(mo.mean, target, mo.se), fmt("occupation E L(1,0)=%.4f se %.4f", mo.mean, mo.se));
  o.require(within_se(mt.mean, target, mt.se), fmt("tanaka %.4f se %.4f", mt.mean, mt.se) +
                                                   fmt(" (target %.4f, ", target) +
                                                   std::to_string(occ.size()) + " samples)");
  o.require(secs < 120.0, fmt("%.1f s (< 120)", secs));

  ExperimentConfig c = convergence(ExperimentKind::LocalTime, "SMOOTH_QUAD", 1000, 506);
  const auto s = harness::run_experiment(c);
  std::string med;
  bool ok = true;
  for (std::size_t k = 0; k < s.levels.size(); ++k) {
    const double m = s.levels[k].column("residual").median;
    med += (k ? ", " : "") + fmt("%.4f", m);
    if (k) ok = ok && m < s.levels[k - 1].column("residual").median;
  }
  o.require(ok, "max-discrepancy medians " + med);
  return o;
}

Outcome occupation_identity() {
  ExperimentConfig c = convergence(ExperimentKind::LocalTime, "SMOOTH_QUAD", 1000, 607);
  const auto s = harness::run_experiment(c);
  std::string med;
  bool shrinking = true;
  for (std::size_t k = 0; k < s.levels.size(); ++k) {
    const double m = s.levels[k].column("occupation_identity_tanaka").median;
    med += (k ? ", " : "") + fmt("%.4f", m);
    if (k) shrinking = shrinking && m < s.levels[k - 1].column("occupation_identity_tanaka").median;
  }
  Outcome o;
  const double finest = s.levels.back().column("occupation_identity_tanaka").median;
  o.require(finest < 0.05, fmt("finest median relative error %.4f (< 0.05)", finest));
  o.require(shrinking, "medians " + med);
  return o;
}

Outcome tanaka_reduction() {
  const auto& f = fn::catalog_entry("TANAKA2").function;
  double worst_lt = 0.0, worst_sls = 0.0;
  for (std::uint64_t k = 0; k < 200; ++k) {
    const auto p = bm_path(rng::derive_key(707, 0, k), 4000);
    const double eps = std::sqrt(p.grid.dt());
    const auto levels = ito::default_levels(p, eps);
    for (auto method : {ito::LocalTimeMethod::Occupation, ito::LocalTimeMethod::Tanaka}) {
      const auto r = ito::ito2d_residual(f, p, levels, eps, method);
      const auto L = method == ito::LocalTimeMethod::Tanaka ? lt::local_time_tanaka(p, Coord::X2, levels.x2)
                                                            : lt::local_time_occupation(p, Coord::X2, levels.x2, eps);
      const double l0 = L.value(4000, *levels.x2.at_or_below(0.0));
      worst_lt = std::max(worst_lt, std::abs(r[ito::Term::Lt2] - l0));
      worst_sls = std::max(worst_sls, std::abs(r[ito::Term::Sls2]));
    }
  }
  Outcome o;
  o.require(worst_lt <= 1e-12, fmt("max |lt2 - L2(1,0)|=%.1e", worst_lt));
  o.require(worst_sls == 0.0, fmt("max |sls2|=%g", worst_sls));
  require_decay(o, harness::run_experiment(convergence(ExperimentKind::Ito2D, "TANAKA2", 4000, 708)), "ito-2d");
  return o;
}

Outcome smooth_consistency() {
  using ito::Term;
  Outcome o;
  for (const std::string id : {"SMOOTH_QUAD", "CROSS"}) {
    const auto& f = fn::catalog_entry(id).function;
    std::vector<double> d1, d2, lt1, lt2;
    double exact = 0.0;
    for (std::uint64_t k = 0; k < 2000; ++k) {
      const auto p = bm_path(rng::derive_key(808, 0, k), 4000, 0.3);
      const double eps = std::sqrt(p.grid.dt());
      const auto a = ito::ito_smooth_residual(f, p);
      const auto b = ito::ito2d_residual(f, p, ito::default_levels(p, eps), eps);
      for (Term t : {Term::Time, Term::Dx1, Term::Dx2, Term::Cross}) exact = std::max(exact, std::abs(a[t] - b[t]));
      d1.push_back(a[Term::Delta1]);
      d2.push_back(a[Term::Delta2]);
      lt1.push_back(b[Term::Lt1] + b[Term::Sls1]);
      lt2.push_back(b[Term::Lt2] + b[Term::Sls2]);
    }
    o.require(exact <= 1e-12, id + fmt(" pathwise terms differ by %.1e", exact));
    for (int c = 0; c < 2; ++c) {
      const auto& x = c ? d2 : d1;
      const auto& y = c ? lt2 : lt1;
      const double diff = stats::describe(x).mean - stats::describe(y).mean;
      const double se = stats::paired_difference_se(x, y);
      o.require(within_se(diff, 0.0, se), id + (c ? " x2" : " x1") + fmt(" second-order minus level terms %.2e se %.2e", diff, se));
    }
    require_decay(o, harness::run_experiment(convergence(ExperimentKind::ItoSmooth, id, 2000, 809)), id + " smooth");
    require_decay(o, harness::run_experiment(convergence(ExperimentKind::Ito2D, id, 2000, 810)), id + " 2d");
  }
  return o;
}

Outcome corollary() {
  const auto& e = fn::catalog_entry("ABS2");
  double worst = 0.0;
  for (std::uint64_t k = 0; k < 200; ++k) {
    const auto p = bm_path(rng::derive_key(909, 0, k), 4000);
    const double eps = std::sqrt(p.grid.dt());
    const auto r = ito::curve_corollary_residual(e.function, *e.curve, p, eps);
    const double l0 = lt::local_time_occupation(p, Coord::X2, lt::LevelGrid(0.0, eps, 2), eps).value(4000, 0);
    worst = std::max(worst, std::abs(r[ito::Term::Curve] - 2.0 * l0));
  }
  Outcome o;
  o.require(worst <= 1e-12, fmt("ABS2 max |curve - 2 L2(1,0)|=%.1e", worst));
  require_decay(o, harness::run_experiment(convergence(ExperimentKind::Corollary, "ABS2", 4000, 910)), "ABS2");
  require_decay(o, harness::run_experiment(convergence(ExperimentKind::Corollary, "RAMP_CURVE", 4000, 911)),
                "RAMP_CURVE");
  return o;
}

Outcome moving_kink() {
  Outcome o;
  for (auto kind : {ExperimentKind::Ito1D, ExperimentKind::Ito2D}) {
    const auto s = harness::run_experiment(convergence(kind, "MOVING_KINK", 2000, 1010));
    const auto& m = s.levels.back().column("term_sls2");
    const std::string label = harness::kind_name(kind);
    o.require(std::abs(m.mean) >= 3.0 * m.se && m.se > 0.0, label + fmt(" sls term %.4f se %.4f", m.mean, m.se));
    require_decay(o, s, label);
  }
  return o;
}

Outcome mollifier() {
  const auto& m = fn::Mollifier::standard();
  const double mass = fn::integrate([&](double x) { return m.rho(x); }, 0.0, 2.0, 1e-14);
  Outcome o;
  o.require(std::abs(mass - 1.0) <= 1e-8, fmt("mass-1=%.1e", mass - 1.0));
  const auto& ramp = fn::catalog_entry("TANAKA2").function;
  // Left limit of the x2-derivative is 1 at x2 = 0.05 and 0 at x2 = 0.
  std::string sweep;
  double prev_gap = INFINITY;
  bool ok = true;
  for (double n : {4.0, 16.0, 64.0}) {
    const auto fn_n = fn::mollify(ramp, n);
    const double d = fn_n.d2(0.5, 0.0, 0.05);
    const double gap = std::abs(1.0 - d);
    ok = ok && gap < prev_gap && fn_n.d2(0.5, 0.0, 0.0) == 0.0;
    prev_gap = gap;
    sweep += (n > 4.0 ? ", " : "") + fmt("%.6f", d);
  }
  o.require(ok && prev_gap <= 1e-8, "d2 f_n(0.05) for n=4,16,64: " + sweep + "; d2 f_n(0) = 0");
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "slsito_acceptance_determinism";
  fs::remove_all(root);
  Outcome o;
  std::size_t files = 0;
  bool same = true;
  for (auto kind : {ExperimentKind::Ito2D, ExperimentKind::LocalTime, ExperimentKind::Isometry}) {
    ExperimentConfig c = convergence(kind, kind == ExperimentKind::Isometry ? "ISO_ADAPTED" : "ABS2", 64, 1212);
    c.kind = kind;
    c.steps = {200, 800};
    const std::string name = harness::kind_name(kind);
    c.out_dir = (root / (name + "_a")).string();
    c.threads = 1;
    harness::run_experiment(c);
    c.out_dir = (root / (name + "_b")).string();
    c.threads = 4;
    harness::run_experiment(c);
    for (const auto& entry : fs::directory_iterator(root / (name + "_a"))) {
      if (entry.path().extension() != ".csv") continue;
      ++files;
      same = same && slurp(entry.path()) == slurp(root / (name + "_b") / entry.path().filename());
    }
  }
  fs::remove_all(root);
  o.require(same && files > 0, std::to_string(files) + " CSV files compared across reruns");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"isometry", isometry},
      {"martingale", martingale},
      {"linearity", linearity},
      {"integration by parts", parts},
      {"local time", local_time},
      {"occupation identity", occupation_identity},
      {"tanaka reduction", tanaka_reduction},
      {"smooth consistency", smooth_consistency},
      {"curve corollary", corollary},
      {"two-parameter term", moving_kink},
      {"mollifier", mollifier},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& ex) {
      o.pass = false;
      o.detail = std::string("error: ") + ex.what();
    }
    failures += !o.pass;
    std::printf("%s %2zu %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
