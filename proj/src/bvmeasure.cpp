#include "slsito/bvmeasure.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "slsito/error.hpp"

namespace slsito::bv {

namespace {

void check_axis(const std::vector<double>& a, const char* name) {
  if (a.empty()) throw InvalidArgument(std::string("empty grid axis ") + name);
  for (std::size_t i = 0; i + 1 < a.size(); ++i)
    if (!(a[i] < a[i + 1])) throw InvalidArgument(std::string("grid axis not strictly increasing: ") + name);
}

}  // namespace

GridField2::GridField2(std::vector<double> s, std::vector<double> x, double fill)
    : s_(std::move(s)), x_(std::move(x)) {
  check_axis(s_, "s");
  check_axis(x_, "x");
  v_.assign(s_.size() * x_.size(), fill);
}

GridField2::GridField2(std::vector<double> s, std::vector<double> x,
                       const std::function<double(double, double)>& fn)
    : GridField2(std::move(s), std::move(x)) {
  for (std::size_t j = 0; j < s_.size(); ++j)
    for (std::size_t i = 0; i < x_.size(); ++i) at(j, i) = fn(s_[j], x_[i]);
}

GridField3::GridField3(std::vector<double> s, std::vector<double> x, std::vector<double> y, double fill)
    : s_(std::move(s)), x_(std::move(x)), y_(std::move(y)) {
  check_axis(s_, "s");
  check_axis(x_, "x");
  check_axis(y_, "y");
  v_.assign(s_.size() * x_.size() * y_.size(), fill);
}

GridField3::GridField3(std::vector<double> s, std::vector<double> x, std::vector<double> y,
                       const std::function<double(double, double, double)>& fn)
    : GridField3(std::move(s), std::move(x), std::move(y)) {
  for (std::size_t j = 0; j < s_.size(); ++j)
    for (std::size_t i = 0; i < x_.size(); ++i)
      for (std::size_t k = 0; k < y_.size(); ++k) at(j, i, k) = fn(s_[j], x_[i], y_[k]);
}

CellRegion CellRegion::all(const GridField3& f) {
  return {0, f.ns() - 1, 0, f.nx() - 1, 0, f.ny() - 1};
}

double rect_increment2(const GridField2& h, std::size_t j, std::size_t i) {
  if (j + 1 >= h.ns() || i + 1 >= h.nx()) throw InvalidArgument("rect_increment2: cell out of range");
  return h.at(j + 1, i + 1) - h.at(j, i + 1) - h.at(j + 1, i) + h.at(j, i);
}

double rect_increment3(const GridField3& f, std::size_t j, std::size_t i, std::size_t k) {
  if (j + 1 >= f.ns() || i + 1 >= f.nx() || k + 1 >= f.ny())
    throw InvalidArgument("rect_increment3: cell out of range");
  const double upper = f.at(j + 1, i + 1, k + 1) - f.at(j + 1, i, k + 1) - f.at(j + 1, i + 1, k) + f.at(j + 1, i, k);
  const double lower = f.at(j, i + 1, k + 1) - f.at(j, i, k + 1) - f.at(j, i + 1, k) + f.at(j, i, k);
  return upper - lower;
}

double total_variation2(const GridField2& h) {
  double tv = 0.0;
  for (std::size_t j = 0; j + 1 < h.ns(); ++j)
    for (std::size_t i = 0; i + 1 < h.nx(); ++i) tv += std::abs(rect_increment2(h, j, i));
  return tv;
}

double total_variation3(const GridField3& f, const CellRegion& r) {
  if (r.s_end > f.ns() - 1 || r.x_end > f.nx() - 1 || r.y_end > f.ny() - 1)
    throw InvalidArgument("total_variation3: region exceeds the grid");
  double tv = 0.0;
  for (std::size_t j = r.s_begin; j < r.s_end; ++j)
    for (std::size_t i = r.x_begin; i < r.x_end; ++i)
      for (std::size_t k = r.y_begin; k < r.y_end; ++k) tv += std::abs(rect_increment3(f, j, i, k));
  return tv;
}

double total_variation3(const GridField3& f) { return total_variation3(f, CellRegion::all(f)); }

double total_variation1(std::span<const double> values) {
  double tv = 0.0;
  for (std::size_t k = 0; k + 1 < values.size(); ++k) tv += std::abs(values[k + 1] - values[k]);
  return tv;
}

SignedDecomposition3 jordan_decompose3(const GridField3& f) {
  SignedDecomposition3 out{GridField3(f.s_axis(), f.x_axis(), f.y_axis()),
                           GridField3(f.s_axis(), f.x_axis(), f.y_axis())};
  // Three-dimensional prefix sums of the positive and negative cell masses;
  // both vanish on the lower boundary faces.
  for (std::size_t j = 1; j < f.ns(); ++j)
    for (std::size_t i = 1; i < f.nx(); ++i)
      for (std::size_t k = 1; k < f.ny(); ++k) {
        const double inc = rect_increment3(f, j - 1, i - 1, k - 1);
        if (!std::isfinite(inc)) throw InvalidArgument("jordan_decompose3: non-finite field");
        for (auto* g : {&out.positive, &out.negative}) {
          const double mass = g == &out.positive ? std::max(inc, 0.0) : std::max(-inc, 0.0);
          g->at(j, i, k) = mass + g->at(j - 1, i, k) + g->at(j, i - 1, k) + g->at(j, i, k - 1) -
                           g->at(j - 1, i - 1, k) - g->at(j - 1, i, k - 1) - g->at(j, i - 1, k - 1) +
                           g->at(j - 1, i - 1, k - 1);
        }
      }
  return out;
}

double stieltjes_sum_levels(std::span<const double> g, std::span<const double> h) {
  if (g.size() != h.size()) throw InvalidArgument("stieltjes_sum_levels: level grids differ in length");
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < h.size(); ++k) sum += g[k] * (h[k + 1] - h[k]);
  return sum;
}

double ls_integral_3d(const GridField3& g, const GridField3& f) {
  if (!g.same_grid(f)) throw InvalidArgument("ls_integral_3d: integrand and measure grids differ");
  double sum = 0.0;
  for (std::size_t j = 0; j + 1 < f.ns(); ++j)
    for (std::size_t i = 0; i + 1 < f.nx(); ++i)
      for (std::size_t k = 0; k + 1 < f.ny(); ++k) sum += g.at(j, i, k) * rect_increment3(f, j, i, k);
  return sum;
}

double ls_integral_3d(const std::function<double(double, double, double)>& g, const GridField3& f) {
  double sum = 0.0;
  const auto& s = f.s_axis();
  const auto& x = f.x_axis();
  const auto& y = f.y_axis();
  for (std::size_t j = 0; j + 1 < f.ns(); ++j)
    for (std::size_t i = 0; i + 1 < f.nx(); ++i)
      for (std::size_t k = 0; k + 1 < f.ny(); ++k) sum += g(s[j], x[i], y[k]) * rect_increment3(f, j, i, k);
  return sum;
}

}  // namespace slsito::bv
