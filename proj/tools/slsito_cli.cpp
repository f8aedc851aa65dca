// Command-line front end; talks to the library only through the C API.

#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "slsito/slsito.h"

namespace {

struct CommonFlags {
  std::string config;
  std::optional<unsigned long long> seed;
  std::optional<std::size_t> paths;
  std::optional<std::size_t> steps;
  std::string levels;
  std::string function;
  std::string out;
  std::map<std::string, std::string> extra;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "key=value configuration file");
  cmd->add_option("--seed", f.seed, "base seed");
  cmd->add_option("--paths", f.paths, "ensemble size");
  cmd->add_option("--steps", f.steps, "time steps (single level)");
  cmd->add_option("--levels", f.levels, "time steps per refinement level, comma separated");
  cmd->add_option("--function", f.function, "catalog function or isometry pair id");
  cmd->add_option("--out", f.out, "output directory");
}

class Config {
 public:
  Config() {
    if (slsito_config_create(&cfg_) != SLSITO_OK) throw std::runtime_error(slsito_last_error());
  }
  ~Config() { slsito_config_destroy(cfg_); }
  Config(const Config&) = delete;
  Config& operator=(const Config&) = delete;

  void load(const std::string& path) { check(slsito_config_load(cfg_, path.c_str())); }
  void set(const std::string& k, const std::string& v) { check(slsito_config_set(cfg_, k.c_str(), v.c_str())); }
  slsito_config* get() const { return cfg_; }

 private:
  static void check(slsito_status s) {
    if (s != SLSITO_OK) throw std::runtime_error(slsito_last_error());
  }
  slsito_config* cfg_ = nullptr;
};

void apply(Config& cfg, const CommonFlags& f, const std::string& kind) {
  if (!f.config.empty()) cfg.load(f.config);
  cfg.set("kind", kind);
  if (f.seed) cfg.set("seed", std::to_string(*f.seed));
  if (f.paths) cfg.set("paths", std::to_string(*f.paths));
  if (f.steps) cfg.set("steps", std::to_string(*f.steps));
  if (!f.levels.empty()) cfg.set("steps", f.levels);
  if (!f.function.empty()) cfg.set("function", f.function);
  if (!f.out.empty()) cfg.set("out", f.out);
  for (const auto& [k, v] : f.extra) cfg.set(k, v);
}

void print_summary(const slsito_summary* s) {
  const std::size_t levels = slsito_summary_level_count(s);
  for (std::size_t l = 0; l < levels; ++l) {
    slsito_level_info info{};
    slsito_summary_level(s, l, &info);
    std::printf("level %zu: steps=%zu paths=%zu excluded=%zu", info.level, info.steps, info.n_paths, info.excluded);
    slsito_moments m{};
    if (slsito_summary_stat(s, l, "abs_residual", &m) == SLSITO_OK) {
      std::printf(" median|residual|=%.6g", m.median);
    }
    slsito_isometry iso{};
    if (slsito_summary_isometry(s, l, &iso) == SLSITO_OK) {
      std::printf(" E[I^2]=%.6g(%.2g) rhs=%.6g(%.2g) z=%.3f", iso.lhs, iso.se_lhs, iso.rhs, iso.se_rhs, iso.z);
    }
    std::printf("\n");
  }
  for (std::size_t i = 0; i < slsito_summary_convergence_count(s); ++i) {
    slsito_convergence_row r{};
    slsito_summary_convergence(s, i, &r);
    if (std::isnan(r.decay)) {
      std::printf("convergence level %zu: median=%.6g decay=n/a\n", r.level, r.median_abs_residual);
    } else {
      std::printf("convergence level %zu: median=%.6g decay=%.4g\n", r.level, r.median_abs_residual, r.decay);
    }
  }
  for (std::size_t i = 0; i < slsito_summary_check_count(s); ++i) {
    slsito_check c{};
    slsito_summary_check(s, i, &c);
    std::printf("%s %s value=%.6g threshold=%.6g\n", c.pass ? "PASS" : "FAIL", c.name, c.value, c.threshold);
  }
}

int run(const CommonFlags& flags, const std::string& kind) {
  Config cfg;
  apply(cfg, flags, kind);
  slsito_summary* s = nullptr;
  if (slsito_run(cfg.get(), &s) != SLSITO_OK) {
    std::fprintf(stderr, "slsito: %s\n", slsito_last_error());
    return 2;
  }
  print_summary(s);
  const int rc = slsito_summary_passed(s) ? 0 : 1;
  slsito_summary_destroy(s);
  return rc;
}

int list_catalog() {
  std::printf("id,formulas,second_order,split,curve,one_dimensional,description\n");
  for (std::size_t i = 0; i < slsito_catalog_size(); ++i) {
    slsito_catalog_info e{};
    slsito_catalog_entry(i, &e);
    std::printf("%s,\"%s\",%d,%d,%d,%d,\"%s\"\n", e.id, e.formulas, e.has_second_order, e.has_split, e.has_curve,
                e.has_one_dimensional, e.description);
  }
  for (std::size_t i = 0; i < slsito_isometry_pair_count(); ++i) {
    const char* id = nullptr;
    const char* desc = nullptr;
    slsito_isometry_pair(i, &id, &desc);
    std::printf("%s,\"isometry\",0,0,0,0,\"%s\"\n", id, desc);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-parameter stochastic Lebesgue-Stieltjes integrals and generalized Ito formulas"};
  app.set_version_flag("--version", std::string(slsito_version()));
  app.require_subcommand(1);

  CommonFlags flags;
  std::string formula = "2d";
  std::string target = "ito-2d";
  std::string estimator;
  std::string coordinate;
  std::vector<std::string> sets;

  auto* simulate = app.add_subcommand("simulate", "simulate paths and report quadratic variation");
  auto* localtime = app.add_subcommand("localtime", "compare local-time estimators");
  auto* isometry = app.add_subcommand("isometry", "isometry and martingale check of the integral");
  auto* parts = app.add_subcommand("parts", "integration by parts under level refinement");
  auto* ito = app.add_subcommand("ito", "evaluate an Ito-type formula term by term");
  auto* convergence = app.add_subcommand("convergence", "refinement study of a formula residual");
  auto* catalog = app.add_subcommand("catalog", "list catalog functions");

  for (auto* cmd : {simulate, localtime, isometry, parts, ito, convergence}) {
    add_common(cmd, flags);
    cmd->add_option("--set", sets, "extra key=value overrides");
  }
  for (auto* cmd : {localtime, ito, convergence}) {
    cmd->add_option("--estimator", estimator, "local-time estimator")->check(CLI::IsMember({"occupation", "tanaka"}));
    cmd->add_option("--coordinate", coordinate, "coordinate for one-dimensional formulas")
        ->check(CLI::IsMember({"x1", "x2"}));
  }
  ito->add_option("--formula", formula, "smooth, 2d, split, corollary, 1d or curve1d")
      ->check(CLI::IsMember({"smooth", "2d", "split", "corollary", "1d", "curve1d"}));
  convergence->add_option("--target", target, "experiment kind to refine");

  CLI11_PARSE(app, argc, argv);

  if (catalog->parsed()) return list_catalog();

  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "slsito: --set expects key=value, got '%s'\n", kv.c_str());
      return 2;
    }
    flags.extra[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  if (!estimator.empty()) flags.extra["estimator"] = estimator;
  if (!coordinate.empty()) flags.extra["coordinate"] = coordinate;

  const std::map<std::string, std::string> formula_kind = {{"smooth", "ito-smooth"}, {"2d", "ito-2d"},
                                                           {"split", "ito-split"},   {"corollary", "corollary"},
                                                           {"1d", "ito-1d"},         {"curve1d", "curve-1d"}};
  try {
    if (simulate->parsed()) return run(flags, "simulate");
    if (localtime->parsed()) return run(flags, "localtime");
    if (isometry->parsed()) {
      if (flags.function.empty()) flags.function = "ISO_UNIT";
      return run(flags, "isometry");
    }
    if (parts->parsed()) return run(flags, "parts");
    if (ito->parsed()) return run(flags, formula_kind.at(formula));
    if (convergence->parsed()) {
      flags.extra["target"] = target;
      return run(flags, "convergence");
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "slsito: %s\n", e.what());
    return 2;
  }
  return 0;
}
