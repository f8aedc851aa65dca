#include <gtest/gtest.h>

#include <cmath>

#include "slsito/bvmeasure.hpp"

using namespace slsito::bv;

namespace {

std::vector<double> axis(double lo, double step, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + step * i;
  return v;
}

}  // namespace

TEST(GridField2, ProductIncrements) {
  const GridField2 h(axis(0, 0.25, 5), axis(-1, 0.5, 5), [](double s, double x) { return s * x; });
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(rect_increment2(h, j, i), 0.125, 1e-15);
  EXPECT_NEAR(total_variation2(h), 2.0, 1e-14);
}

TEST(GridField2, ReferenceVariation) {
  const GridField2 h(axis(0, 0.25, 5), axis(-1, 0.5, 5),
                     [](double s, double x) { return std::sin(s + x * x) + s * x; });
  EXPECT_NEAR(total_variation2(h), 2.2684925465625749, 1e-14);
}

TEST(GridField3, JordanDecomposition) {
  const GridField3 f(axis(0, 0.5, 3), axis(-1, 0.5, 5), axis(-1, 0.4, 6),
                     [](double s, double x, double y) { return std::sin(3 * s * x + y) * std::cos(x * y); });
  const auto d = jordan_decompose3(f);
  const auto r = CellRegion::all(f);
  double tv = 0.0;
  for (std::size_t j = r.s_begin; j < r.s_end; ++j)
    for (std::size_t i = r.x_begin; i < r.x_end; ++i)
      for (std::size_t k = r.y_begin; k < r.y_end; ++k) {
        const double p = rect_increment3(d.positive, j, i, k);
        const double n = rect_increment3(d.negative, j, i, k);
        EXPECT_GE(p, -1e-15);
        EXPECT_GE(n, -1e-15);
        EXPECT_NEAR(p - n, rect_increment3(f, j, i, k), 1e-14);
        tv += p + n;
      }
  EXPECT_NEAR(tv, total_variation3(f), 1e-12);
}

TEST(GridField3, LebesgueStieltjesSum) {
  const GridField3 f(axis(0, 0.5, 3), axis(0, 0.5, 3), axis(0, 0.5, 3),
                     [](double s, double x, double y) { return s * x * y; });
  EXPECT_NEAR(ls_integral_3d([](double, double, double) { return 1.0; }, f), 1.0, 1e-15);
  const GridField3 g(f.s_axis(), f.x_axis(), f.y_axis(), 2.0);
  EXPECT_NEAR(ls_integral_3d(g, f), 2.0, 1e-15);
}

TEST(OneParameter, VariationAndStieltjes) {
  const std::vector<double> v = {0, 1, -1, 2};
  EXPECT_EQ(total_variation1(v), 6.0);
  const std::vector<double> g = {1, 2, 3, 4};
  EXPECT_EQ(stieltjes_sum_levels(g, v), 1 * 1 + 2 * (-2) + 3 * 3);
  EXPECT_THROW(stieltjes_sum_levels(std::vector<double>{1, 2}, v), std::exception);
}
