#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "slsito/error.hpp"
#include "slsito/rng.hpp"
#include "slsito/simulate.hpp"

using namespace slsito;
using namespace slsito::sim;

namespace {

SamplePath2D reference_path() {
  DiffusionSpec spec;
  spec.start = {0.5, -0.25};
  spec.drift = {0.1, -0.2};
  spec.vol = {1.5, 0.5};
  spec.correlation = 0.3;
  spec.seed = rng::derive_key(9, 0, 0);
  return simulate_diffusion(spec, TimeGrid(1.0, 4));
}

}  // namespace

TEST(TimeGrid, EndpointIsExact) {
  const TimeGrid g(0.7, 3);
  EXPECT_EQ(g.node(0), 0.0);
  EXPECT_EQ(g.node(3), 0.7);
  EXPECT_EQ(g.nodes().size(), 4u);
  EXPECT_THROW(TimeGrid(0.0, 3), InvalidArgument);
  EXPECT_THROW(TimeGrid(1.0, 0), InvalidArgument);
  EXPECT_THROW(TimeGrid(NAN, 3), InvalidArgument);
}

TEST(Simulate, MatchesReferencePath) {
  const auto p = reference_path();
  const double x1[] = {0.5, 0.70776870028904282, 1.0410571658170693, -1.0190644890650153, -1.0039243314863566};
  const double x2[] = {-0.25, -0.15448903095344829, 0.048948496060812183, -0.046708612864448024,
                       -0.63102568366540701};
  for (int j = 0; j < 5; ++j) {
    EXPECT_NEAR(p.x[0][j], x1[j], 1e-14);
    EXPECT_NEAR(p.x[1][j], x2[j], 1e-14);
  }
}

TEST(Simulate, IncrementsTelescope) {
  DiffusionSpec spec;
  spec.drift = {0.3, -0.1};
  spec.vol = {0.8, 1.2};
  spec.correlation = -0.5;
  spec.seed = 17;
  const auto p = simulate_diffusion(spec, TimeGrid(2.0, 500));
  for (int i = 0; i < 2; ++i) {
    double sum = p.x[i][0];
    for (std::size_t j = 0; j < 500; ++j) sum += p.dm[i][j] + p.dv[i][j];
    EXPECT_NEAR(sum, p.x[i].back(), 1e-12);
  }
  EXPECT_NEAR(quadratic_variation_law(p, Coord::X1).terminal(), 0.64 * 2.0, 1e-12);
  EXPECT_NEAR(cross_variation_law(p).terminal(), -0.5 * 0.8 * 1.2 * 2.0, 1e-12);
  EXPECT_NO_THROW(p.validate());
}

TEST(Simulate, RealizedVariationTracksLaw) {
  DiffusionSpec spec;
  spec.vol = {1.0, 2.0};
  spec.correlation = 0.6;
  spec.seed = 5;
  const auto p = simulate_diffusion(spec, TimeGrid(1.0, 200000));
  EXPECT_NEAR(realized_quadratic_variation(p, Coord::X1).terminal(), 1.0, 0.02);
  EXPECT_NEAR(realized_quadratic_variation(p, Coord::X2).terminal(), 4.0, 0.08);
  EXPECT_NEAR(realized_cross_variation(p).terminal(), 1.2, 0.04);
}

TEST(Simulate, SeedDeterminesPath) {
  DiffusionSpec spec;
  spec.seed = 3;
  const auto a = simulate_diffusion(spec, TimeGrid(1.0, 64));
  const auto b = simulate_diffusion(spec, TimeGrid(1.0, 64));
  spec.seed = 4;
  const auto c = simulate_diffusion(spec, TimeGrid(1.0, 64));
  EXPECT_EQ(a.x[0], b.x[0]);
  EXPECT_NE(a.x[0], c.x[0]);
}

TEST(Simulate, RejectsBadSpec) {
  DiffusionSpec spec;
  spec.correlation = 1.5;
  EXPECT_THROW(simulate_diffusion(spec, TimeGrid(1.0, 4)), InvalidArgument);
  spec.correlation = 0.0;
  spec.vol = {0.0, 1.0};
  EXPECT_THROW(simulate_diffusion(spec, TimeGrid(1.0, 4)), InvalidArgument);
  spec.vol = {1.0, 1.0};
  spec.start = {INFINITY, 0.0};
  EXPECT_THROW(simulate_diffusion(spec, TimeGrid(1.0, 4)), InvalidArgument);
}

TEST(FromIncrements, RejectsMismatchedLengths) {
  const TimeGrid g(1.0, 3);
  EXPECT_THROW(SamplePath2D::from_increments(g, {0.0, 0.0}, {std::vector<double>(3), std::vector<double>(2)},
                                             {std::vector<double>(3), std::vector<double>(3)},
                                             {std::vector<double>(3), std::vector<double>(3)},
                                             std::vector<double>(3)),
               InvalidArgument);
}

TEST(TransformByCurve, ConstantZeroCurveIsIdentity) {
  const auto p = reference_path();
  const auto q = transform_by_curve(p, SmoothCurve::constant(0.0));
  EXPECT_EQ(p.x[1], q.x[1]);
  EXPECT_EQ(p.dm[1], q.dm[1]);
  EXPECT_EQ(p.dqv[1], q.dqv[1]);
}

TEST(TransformByCurve, SineCurveIsConsistent) {
  DiffusionSpec spec;
  spec.vol = {1.0, 0.7};
  spec.correlation = 0.2;
  spec.seed = 11;
  const auto p = simulate_diffusion(spec, TimeGrid(1.0, 1000));
  const auto q = transform_by_curve(p, SmoothCurve::sine());
  for (std::size_t j = 0; j <= 1000; ++j) EXPECT_NEAR(q.x[1][j], p.x[1][j] - std::sin(p.x[0][j]), 1e-13);
  double sum = q.x[1][0];
  for (std::size_t j = 0; j < 1000; ++j) sum += q.dm[1][j] + q.dv[1][j];
  EXPECT_NEAR(sum, q.x[1].back(), 1e-11);
  EXPECT_NO_THROW(q.validate());
  EXPECT_THROW(transform_by_curve(p, SmoothCurve{}), ConfigurationError);
}

TEST(PathCsv, HasHeaderAndRows) {
  std::ostringstream os;
  write_path_csv(os, reference_path());
  const std::string s = os.str();
  EXPECT_EQ(s.rfind("t,X1,X2,dM1,dM2,dV1,dV2\n", 0), 0u);
  int lines = 0;
  for (char ch : s) lines += ch == '\n';
  EXPECT_EQ(lines, 6);
}
