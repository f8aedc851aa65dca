#pragma once

// Grid fields of bounded variation in two and three parameters and their
// Lebesgue-Stieltjes sums. A grid is treated as the finest available
// partition; integrands are evaluated at the lower-left corner of a cell.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace slsito::bv {

/// H(s_j, x_i) on a product grid.
class GridField2 {
 public:
  GridField2() = default;
  GridField2(std::vector<double> s, std::vector<double> x, double fill = 0.0);
  GridField2(std::vector<double> s, std::vector<double> x, const std::function<double(double, double)>& fn);

  const std::vector<double>& s_axis() const noexcept { return s_; }
  const std::vector<double>& x_axis() const noexcept { return x_; }
  std::size_t ns() const noexcept { return s_.size(); }
  std::size_t nx() const noexcept { return x_.size(); }

  double& at(std::size_t j, std::size_t i) { return v_[j * x_.size() + i]; }
  double at(std::size_t j, std::size_t i) const { return v_[j * x_.size() + i]; }
  std::span<const double> values() const noexcept { return v_; }

  bool same_grid(const GridField2& o) const noexcept { return s_ == o.s_ && x_ == o.x_; }

 private:
  std::vector<double> s_, x_, v_;
};

/// F(s_j, x_i, y_k) on a product grid.
class GridField3 {
 public:
  GridField3() = default;
  GridField3(std::vector<double> s, std::vector<double> x, std::vector<double> y, double fill = 0.0);
  GridField3(std::vector<double> s, std::vector<double> x, std::vector<double> y,
             const std::function<double(double, double, double)>& fn);

  const std::vector<double>& s_axis() const noexcept { return s_; }
  const std::vector<double>& x_axis() const noexcept { return x_; }
  const std::vector<double>& y_axis() const noexcept { return y_; }
  std::size_t ns() const noexcept { return s_.size(); }
  std::size_t nx() const noexcept { return x_.size(); }
  std::size_t ny() const noexcept { return y_.size(); }

  double& at(std::size_t j, std::size_t i, std::size_t k) { return v_[(j * x_.size() + i) * y_.size() + k]; }
  double at(std::size_t j, std::size_t i, std::size_t k) const {
    return v_[(j * x_.size() + i) * y_.size() + k];
  }

  bool same_grid(const GridField3& o) const noexcept { return s_ == o.s_ && x_ == o.x_ && y_ == o.y_; }

 private:
  std::vector<double> s_, x_, y_, v_;
};

/// Cell range [begin, end) along each axis, in cell indices.
struct CellRegion {
  std::size_t s_begin = 0, s_end = 0;
  std::size_t x_begin = 0, x_end = 0;
  std::size_t y_begin = 0, y_end = 0;

  static CellRegion all(const GridField3& f);
};

/// H(s_{j+1},x_{i+1}) - H(s_j,x_{i+1}) - H(s_{j+1},x_i) + H(s_j,x_i).
double rect_increment2(const GridField2& h, std::size_t j, std::size_t i);

/// Eight-corner alternating sum over [s_j,s_{j+1}] x [x_i,x_{i+1}] x [y_k,y_{k+1}].
double rect_increment3(const GridField3& f, std::size_t j, std::size_t i, std::size_t k);

/// Sum of |rect_increment2| over all cells.
double total_variation2(const GridField2& h);

double total_variation3(const GridField3& f, const CellRegion& region);
double total_variation3(const GridField3& f);

/// Ordinary one-parameter variation sum_k |v_{k+1} - v_k|.
double total_variation1(std::span<const double> values);

/// f1, f2 with nonnegative cell increments and f1 - f2 matching the source increments.
struct SignedDecomposition3 {
  GridField3 positive;
  GridField3 negative;
};

SignedDecomposition3 jordan_decompose3(const GridField3& f);

/// sum_k g(a_k) [H(a_{k+1}) - H(a_k)] over the cells of a level grid.
double stieltjes_sum_levels(std::span<const double> g, std::span<const double> h);

/// sum over cells of g(lower-left corner) * rect_increment3(F, cell).
double ls_integral_3d(const GridField3& g, const GridField3& f);
double ls_integral_3d(const std::function<double(double, double, double)>& g, const GridField3& f);

}  // namespace slsito::bv
