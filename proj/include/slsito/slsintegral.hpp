#pragma once

// Two-parameter stochastic Lebesgue-Stieltjes integral of an adapted
// integrand g(s, x) against a martingale field h(s, x):
//   I_t(g) = sum_i sum_j e(t_j ^ t, x_i) [h(t_{j+1}^t, x_{i+1}) - h(t_j^t, x_{i+1})
//                                          - h(t_{j+1}^t, x_i) + h(t_j^t, x_i)].

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "slsito/bvmeasure.hpp"
#include "slsito/localtime.hpp"
#include "slsito/simulate.hpp"
#include "slsito/testfunction.hpp"

namespace slsito::sls {

/// Piecewise-constant adapted field on (t_j, t_{j+1}] x (x_i, x_{i+1}].
struct SimpleField {
  std::vector<double> times;   // t_1 < ... < t_{m+1}
  std::vector<double> levels;  // x_1 < ... < x_{n+1}
  std::vector<double> coeff;   // e(t_j, x_i), m x n row-major

  SimpleField(std::vector<double> times, std::vector<double> levels, double fill = 0.0);

  std::size_t time_cells() const noexcept { return times.size() - 1; }
  std::size_t level_cells() const noexcept { return levels.size() - 1; }
  double& at(std::size_t j, std::size_t i) { return coeff[j * level_cells() + i]; }
  double at(std::size_t j, std::size_t i) const { return coeff[j * level_cells() + i]; }

  /// alpha * a + beta * b on a common partition.
  static SimpleField combine(double alpha, const SimpleField& a, double beta, const SimpleField& b);
};

/// h(s_j, a_i) for one path together with its cross-variation field
/// F_s(a, b) = <h(a), h(b)>_s on (s_j, a_i, a_k). `cross` may be null when
/// no cross-variation is attached.
struct MartingaleField {
  bv::GridField2 h;
  std::shared_ptr<const bv::GridField3> cross;
};

/// Read-only view of a path up to and including time index `last`.
class PathPrefix {
 public:
  PathPrefix(const sim::SamplePath2D& path, std::size_t last) : path_(&path), last_(last) {}
  std::size_t last() const noexcept { return last_; }
  double time() const { return path_->grid.node(last_); }
  /// X_c(t_j) for j <= last; throws InvalidArgument for future indices.
  double value(sim::Coord c, std::size_t j) const;
  double current(sim::Coord c) const { return value(c, last_); }
  /// M_c(t_j) - M_c(0).
  double martingale(sim::Coord c, std::size_t j) const;

 private:
  const sim::SamplePath2D* path_;
  std::size_t last_;
};

/// Integrand g(s, a) evaluated with access to the path on [0, s] only.
using AdaptedIntegrand = std::function<double(double s, double a, const PathPrefix& past)>;

/// Time-level samples of an adapted integrand on h's grid (left-point rule).
bv::GridField2 sample_integrand(const AdaptedIntegrand& g, const sim::SamplePath2D& path,
                                const std::vector<double>& levels);

double sls_integral_simple(const SimpleField& e, const bv::GridField2& h, double t);

/// Integral of the grid-sampled integrand (value at the lower-left corner of
/// each cell of h's grid) up to time index `t_index`.
double sls_integral(const bv::GridField2& e, const bv::GridField2& h, std::size_t t_index);

/// Samples g on h's grid and integrates up to t_index.
double sls_integral(const AdaptedIntegrand& g, const sim::SamplePath2D& path, const bv::GridField2& h,
                    std::size_t t_index);

/// Field value callback h(t_j, a) used with local-time integrands.
using LazyField = std::function<double(std::size_t j, double a)>;

/// I_t with the integrand L(t_j, a_k) given by a local-time surface and h
/// evaluated lazily on the surface's grids. Uses the rearrangement
///   sum_j sum_k L(t_j,a_k) R(j,k) = sum_{m,k} dL(m,k) [D(J,k) - D(m+1,k)],
///   D(j,k) = h(t_j,a_{k+1}) - h(t_j,a_k),
/// which costs O(increments + levels) instead of O(N M).
double sls_integral_local_time(const lt::LocalTimeSurface& surface, const LazyField& h, std::size_t t_index);

/// Optional pre-processing of rough integrands.
enum class SmoothingKernel { Bump, Box };

/// Backward (adapted) smoothing over windows of width 2/n (bump) or 1/n (box)
/// in both time and level; nodes whose window holds no other node keep their value.
bv::GridField2 mollify_integrand(const bv::GridField2& e, double n, SmoothingKernel kernel = SmoothingKernel::Bump);

/// Clamp to [-n, n].
bv::GridField2 truncate_integrand(const bv::GridField2& e, double n);

double linearity_check(const SimpleField& g1, const SimpleField& g2, double alpha, double beta,
                       const bv::GridField2& h, double t);

// Martingale fields -------------------------------------------------------

/// h(s, a) = sigma(a) M_c(s), F_s(a,b) = sigma(a) sigma(b) <M_c>_s (left null when with_cross is false).
MartingaleField scaled_martingale_field(const sim::SamplePath2D& path, sim::Coord c,
                                        const std::vector<double>& levels, const std::function<double(double)>& sigma,
                                        bool with_cross = true);

/// h(s, a) = sum_{r<s} 1[X_c(t_r) > a] dM_c(r), F_s(a,b) = sum_{r<s} 1[X_c(t_r) > max(a,b)] d<M_c>(r).
MartingaleField indicator_martingale_field(const sim::SamplePath2D& path, sim::Coord c,
                                           const std::vector<double>& levels);

/// F_s(a,b) = sum_{r<s} d12 f(t_r, a, X_2(t_r)) d12 f(t_r, b, X_2(t_r)) d<M_2>(r).
bv::GridField3 cross_variation_field(const ito::TestFunction& f, const sim::SamplePath2D& path,
                                     const std::vector<double>& levels);

/// h(s, a) = sum_{r<s} d12 f(t_r, a, X_2(t_r)) dM_2(r) with F from cross_variation_field.
MartingaleField derivative_martingale_field(const ito::TestFunction& f, const sim::SamplePath2D& path,
                                            const std::vector<double>& levels);

/// F_s(a,b) = sum_{r<s} dh(r,a) dh(r,b) from the field's own increments.
bv::GridField3 realized_cross_variation_field(const bv::GridField2& h);

// Isometry ------------------------------------------------------------------

struct IsometrySample {
  double integral = 0.0;      // I_t(g)
  double measure_term = 0.0;  // sum over [0,t] x R^2 of g(s,x) g(s,y) dF
};

/// One path's contribution; requires field.cross.
IsometrySample isometry_sample(const bv::GridField2& e, const MartingaleField& field, std::size_t t_index);

struct IsometryReport {
  std::size_t n_paths = 0;
  double lhs = 0.0;
  double se_lhs = 0.0;
  double rhs = 0.0;
  double se_rhs = 0.0;
  double z = 0.0;
};

/// lhs = mean of I^2, rhs = mean of the measure term, z = (lhs-rhs)/sqrt(se_lhs^2+se_rhs^2).
IsometryReport isometry_check(std::span<const IsometrySample> samples);

/// CSV header and row: n_paths,lhs,se_lhs,rhs,se_rhs,z.
void write_isometry_csv(std::ostream& os, std::span<const IsometryReport> reports);

// Integration by parts ------------------------------------------------------

struct PartsResult {
  double lhs = 0.0;  // -sum_i sum_j grad g(t_j,x_i) [h(t_{j+1},x_i) - h(t_j,x_i)] dx_i
  double rhs = 0.0;  // sls integral of g
  double residual() const;
};

PartsResult integration_by_parts(const std::function<double(double, double)>& g,
                                 const std::function<double(double, double)>& grad_g, const bv::GridField2& h,
                                 std::size_t t_index);

double integration_by_parts_check(const std::function<double(double, double)>& g,
                                  const std::function<double(double, double)>& grad_g, const bv::GridField2& h,
                                  std::size_t t_index);

}  // namespace slsito::sls
