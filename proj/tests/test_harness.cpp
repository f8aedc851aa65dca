#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "slsito/error.hpp"
#include "slsito/harness.hpp"

using namespace slsito;
using namespace slsito::harness;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("slsito_test_" + name);
  fs::remove_all(dir);
  return dir;
}

ExperimentConfig small(ExperimentKind kind, const std::string& function) {
  ExperimentConfig c;
  c.kind = kind;
  c.function = function;
  c.steps = {100, 400};
  c.paths = 8;
  c.seed = 5;
  return c;
}

}  // namespace

TEST(Config, DumpLoadRoundTrip) {
  ExperimentConfig a;
  a.set("kind", "corollary");
  a.set("function", "ABS2");
  a.set("steps", "10,20,40");
  a.set("rho", "0.25");
  a.set("sigma2", "1.5");
  a.set("seed", "99");
  std::istringstream in("# comment\n" + a.dump());
  ExperimentConfig b;
  b.load(in);
  EXPECT_EQ(a.dump(), b.dump());
  EXPECT_EQ(b.kind, ExperimentKind::Corollary);
  EXPECT_EQ(b.steps, (std::vector<std::size_t>{10, 20, 40}));
  EXPECT_EQ(b.diffusion.correlation, 0.25);
}

TEST(Config, RejectsBadInput) {
  ExperimentConfig c;
  EXPECT_THROW(c.set("bogus", "1"), ConfigurationError);
  EXPECT_THROW(c.set("paths", "many"), ConfigurationError);
  EXPECT_THROW(c.set("kind", "nope"), ConfigurationError);
  c.steps = {100, 50};
  EXPECT_THROW(c.validate(), ConfigurationError);
  EXPECT_THROW(c.load_file("/nonexistent/slsito.cfg"), ConfigurationError);
}

TEST(Config, Defaults) {
  ExperimentConfig c;
  c.kind = ExperimentKind::LocalTime;
  EXPECT_EQ(c.resolved_paths(), 1000u);
  c.kind = ExperimentKind::Isometry;
  EXPECT_EQ(c.resolved_paths(), 10000u);
  c.function = "MOVING_KINK";
  EXPECT_EQ(c.resolved_decay_threshold(), 1.1);
  c.function = "CROSS";
  EXPECT_EQ(c.resolved_decay_threshold(), 1.3);
}

TEST(Harness, UnknownFunctionThrows) {
  EXPECT_THROW(resolve_function("NOPE"), ConfigurationError);
  EXPECT_THROW(run_experiment(small(ExperimentKind::Ito2D, "NOPE")), ConfigurationError);
  EXPECT_NO_THROW(resolve_function("TANAKA2@8"));
}

TEST(Harness, SmokeRunWritesSchema) {
  const auto dir = scratch("smoke");
  auto c = small(ExperimentKind::Ito2D, "CROSS");
  c.paths = 2;
  c.out_dir = dir.string();
  const auto s = run_experiment(c);
  ASSERT_EQ(s.levels.size(), 2u);
  for (const char* f : {"manifest.txt", "summary.csv", "level_0.csv", "level_1.csv", "checks.csv"})
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  std::ifstream in(dir / "level_0.csv");
  std::string header, line;
  std::getline(in, header);
  EXPECT_EQ(header.rfind("path_id,lhs,term_time", 0), 0u);
  const auto commas = std::count(header.begin(), header.end(), ',');
  int rows = 0;
  while (std::getline(in, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), commas);
    ++rows;
  }
  EXPECT_EQ(rows, 2);
  fs::remove_all(dir);
}

TEST(Harness, OutputIndependentOfThreads) {
  const auto d1 = scratch("t1");
  const auto d3 = scratch("t3");
  auto c = small(ExperimentKind::Corollary, "ABS2");
  c.threads = 1;
  c.out_dir = d1.string();
  run_experiment(c);
  c.threads = 3;
  c.out_dir = d3.string();
  run_experiment(c);
  for (const char* f : {"summary.csv", "level_0.csv", "level_1.csv", "checks.csv"})
    EXPECT_EQ(slurp(d1 / f), slurp(d3 / f)) << f;
  fs::remove_all(d1);
  fs::remove_all(d3);
}

TEST(Harness, EveryKindRuns) {
  for (auto k : {ExperimentKind::Simulate, ExperimentKind::LocalTime, ExperimentKind::Parts,
                 ExperimentKind::ItoSmooth, ExperimentKind::ItoSplit, ExperimentKind::Ito1D,
                 ExperimentKind::Curve1D}) {
    std::string fn = "SMOOTH_QUAD";
    if (k == ExperimentKind::ItoSplit) fn = "QUAD_PLUS_RAMP";
    if (k == ExperimentKind::Ito1D) fn = "TANAKA2";
    if (k == ExperimentKind::Curve1D) fn = "MOVING_KINK";
    auto c = small(k, fn);
    c.spacings = {0.2, 0.1};
    const auto s = run_experiment(c);
    EXPECT_FALSE(s.levels.empty()) << kind_name(k);
    EXPECT_EQ(s.levels[0].excluded, 0u) << kind_name(k);
  }
  auto iso = small(ExperimentKind::Isometry, "ISO_UNIT");
  const auto s = run_experiment(iso);
  ASSERT_TRUE(s.levels[0].isometry.has_value());
  EXPECT_EQ(s.levels[0].isometry->n_paths, 8u);
}

TEST(Harness, DecayTableHandlesZeros) {
  LevelResult a, b, c;
  for (auto* l : {&a, &b, &c}) l->stats.push_back({"abs_residual", {}});
  a.stats[0].moments.median = 0.0;
  b.stats[0].moments.median = 0.0;
  c.stats[0].moments.median = 0.0;
  a.stats[0].moments.median = 2.0;
  b.stats[0].moments.median = 1.0;
  const auto rows = decay_table({a, b, c});
  EXPECT_EQ(rows[0].decay, 2.0);
  EXPECT_TRUE(std::isinf(rows[1].decay));
  EXPECT_TRUE(std::isnan(rows[2].decay));
  const auto zeros = decay_table({c, c});
  EXPECT_TRUE(std::isnan(zeros[0].decay));
}
