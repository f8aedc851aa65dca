#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "slsito/error.hpp"
#include "slsito/localtime.hpp"
#include "slsito/slsintegral.hpp"

using namespace slsito;
using namespace slsito::sls;
using sim::Coord;

namespace {

std::vector<double> axis(double lo, double step, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + step * i;
  return v;
}

bv::GridField2 ref_h() {
  return bv::GridField2(axis(0, 0.25, 5), axis(-1, 0.5, 5),
                        [](double s, double x) { return std::sin(s + x * x) + s * x; });
}

bv::GridField2 ref_e() {
  return bv::GridField2(axis(0, 0.25, 5), axis(-1, 0.5, 5), [](double s, double x) { return std::cos(3 * s + x); });
}

sim::SamplePath2D bm_path(std::uint64_t seed, std::size_t steps) {
  sim::DiffusionSpec spec;
  spec.seed = seed;
  spec.correlation = 0.4;
  return sim::simulate_diffusion(spec, sim::TimeGrid(1.0, steps));
}

}  // namespace

TEST(SlsIntegral, ReferenceValues) {
  EXPECT_NEAR(sls_integral(ref_e(), ref_h(), 4), 1.2993843411228556, 1e-14);
  EXPECT_NEAR(sls_integral(ref_e(), ref_h(), 2), 0.8486906971496736, 1e-14);
  EXPECT_EQ(sls_integral(ref_e(), ref_h(), 0), 0.0);
  EXPECT_THROW(sls_integral(ref_e(), ref_h(), 5), InvalidArgument);
}

TEST(SlsIntegral, SimpleMatchesGrid) {
  const auto e = ref_e();
  SimpleField s(axis(0, 0.25, 5), axis(-1, 0.5, 5));
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t i = 0; i < 4; ++i) s.at(j, i) = e.at(j, i);
  EXPECT_NEAR(sls_integral_simple(s, ref_h(), 1.0), 1.2993843411228556, 1e-14);
  EXPECT_NEAR(sls_integral_simple(s, ref_h(), 0.5), 0.8486906971496736, 1e-14);
}

TEST(SlsIntegral, SimpleOffGridNodesThrow) {
  SimpleField s({0.0, 0.3}, {-1.0, 0.0}, 1.0);
  EXPECT_THROW(sls_integral_simple(s, ref_h(), 1.0), InvalidArgument);
}

TEST(SlsIntegral, Linearity) {
  std::mt19937_64 gen(7);
  std::normal_distribution<double> z;
  SimpleField a({0.0, 0.5, 1.0}, {-1.0, 0.0, 0.5, 1.0});
  SimpleField b = a;
  for (auto& v : a.coeff) v = z(gen);
  for (auto& v : b.coeff) v = z(gen);
  EXPECT_LT(linearity_check(a, b, 2.5, -0.75, ref_h(), 1.0), 1e-13);
}

TEST(SlsIntegral, LocalTimeFormMatchesDense) {
  const auto p = bm_path(31, 3000);
  const auto g = lt::level_grid_for_path(p, Coord::X1, 0.05, 0.1);
  const auto surf = lt::local_time_occupation(p, Coord::X1, g, 0.05);
  const auto levels = g.nodes();
  const auto times = p.grid.nodes();
  auto hfn = [&](std::size_t j, double a) { return std::sin(a) * times[j] + a * a * std::cos(3 * times[j]); };
  bv::GridField2 h(times, levels);
  bv::GridField2 e(times, levels);
  for (std::size_t j = 0; j < times.size(); ++j)
    for (std::size_t k = 0; k < levels.size(); ++k) {
      h.at(j, k) = hfn(j, levels[k]);
      e.at(j, k) = surf.value(j, k);
    }
  for (std::size_t t : {std::size_t(0), std::size_t(1500), std::size_t(3000)}) {
    const double dense = sls_integral(e, h, t);
    const double sparse = sls_integral_local_time(surf, hfn, t);
    EXPECT_NEAR(sparse, dense, 1e-10 * (1.0 + std::abs(dense)));
  }
}

TEST(PathPrefix, RejectsFutureIndex) {
  const auto p = bm_path(1, 10);
  const PathPrefix past(p, 4);
  EXPECT_NO_THROW(past.value(Coord::X1, 4));
  EXPECT_THROW(past.value(Coord::X1, 5), InvalidArgument);
  EXPECT_EQ(past.current(Coord::X2), p.x[1][4]);
}

TEST(Isometry, TooFewSamplesThrows) {
  std::vector<IsometrySample> one(1);
  EXPECT_THROW(isometry_check(one), InvalidArgument);
}

TEST(Isometry, UnitIntegrandMatchesClosedForm) {
  const auto levels = axis(-1.0, 0.5, 5);
  std::vector<IsometrySample> samples;
  for (std::uint64_t s = 0; s < 400; ++s) {
    const auto p = bm_path(s, 200);
    const auto f = scaled_martingale_field(p, Coord::X1, levels, [](double a) { return a; });
    const bv::GridField2 e(f.h.s_axis(), f.h.x_axis(), 1.0);
    samples.push_back(isometry_sample(e, f, 200));
  }
  const auto r = isometry_check(samples);
  EXPECT_EQ(r.n_paths, 400u);
  EXPECT_NEAR(r.rhs, 4.0, 1e-12);
  EXPECT_LT(std::abs(r.z), 4.0);
}

TEST(Isometry, IndicatorFieldIsConsistent) {
  const auto levels = axis(-1.0, 0.25, 9);
  std::vector<IsometrySample> samples;
  for (std::uint64_t s = 0; s < 400; ++s) {
    const auto p = bm_path(100 + s, 400);
    const auto f = indicator_martingale_field(p, Coord::X2, levels);
    const bv::GridField2 e(f.h.s_axis(), f.h.x_axis(), [](double, double a) { return 1.0 + a; });
    samples.push_back(isometry_sample(e, f, 400));
  }
  EXPECT_LT(std::abs(isometry_check(samples).z), 4.0);
}

TEST(Parts, ResidualShrinksWithSpacing) {
  const auto p = bm_path(9, 400);
  auto g = [](double, double x) { return std::pow(std::max(0.0, 1.0 - x * x), 3); };
  auto dg = [](double, double x) { return std::abs(x) < 1.0 ? -6.0 * x * std::pow(1.0 - x * x, 2) : 0.0; };
  double prev = INFINITY;
  for (double dx : {0.1, 0.05, 0.025}) {
    const int n = static_cast<int>(std::lround(3.0 / dx)) + 1;
    const auto levels = axis(-1.5, dx, n);
    const auto f = scaled_martingale_field(p, Coord::X1, levels, [](double a) { return a; });
    const double r = integration_by_parts_check(g, dg, f.h, 400);
    EXPECT_LT(r, prev);
    prev = r;
  }
  EXPECT_LT(prev, 1e-2);
}

TEST(Smoothing, TruncateAndMollify) {
  bv::GridField2 e(axis(0, 0.1, 11), axis(-1, 0.1, 21), [](double s, double x) { return 10 * s * x; });
  const auto t = truncate_integrand(e, 2.0);
  for (double v : t.values()) EXPECT_LE(std::abs(v), 2.0);
  const bv::GridField2 c(e.s_axis(), e.x_axis(), 3.0);
  for (auto k : {SmoothingKernel::Bump, SmoothingKernel::Box}) {
    const auto m = mollify_integrand(c, 4.0, k);
    for (double v : m.values()) EXPECT_NEAR(v, 3.0, 1e-12);
  }
  const auto rough = mollify_integrand(e, 4.0);
  EXPECT_EQ(rough.at(0, 0), e.at(0, 0));
}

TEST(Fields, RealizedCrossVariationOfScaledField) {
  const auto p = bm_path(2, 50);
  const auto levels = axis(0.0, 0.5, 3);
  const auto f = scaled_martingale_field(p, Coord::X1, levels, [](double a) { return 1.0 + a; });
  const auto r = realized_cross_variation_field(f.h);
  double qv = 0.0;
  for (double d : p.dm[0]) qv += d * d;
  EXPECT_NEAR(r.at(50, 1, 2), 1.5 * 2.0 * qv, 1e-12);
}
