#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

namespace slsito::sim {

/// Coordinate index of the two-dimensional process.
enum class Coord : int { X1 = 0, X2 = 1 };

constexpr int index(Coord c) noexcept { return static_cast<int>(c); }
constexpr Coord other(Coord c) noexcept { return c == Coord::X1 ? Coord::X2 : Coord::X1; }

/// Uniform partition 0 = t_0 < ... < t_N = T. Nodes are computed, not stored.
class TimeGrid {
 public:
  TimeGrid() = default;
  TimeGrid(double horizon, std::size_t steps);

  double horizon() const noexcept { return horizon_; }
  std::size_t steps() const noexcept { return steps_; }
  double dt() const noexcept { return horizon_ / static_cast<double>(steps_); }
  /// t_j; node(N) is exactly the horizon.
  double node(std::size_t j) const noexcept;
  std::vector<double> nodes() const;

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  double horizon_ = 1.0;
  std::size_t steps_ = 1;
};

TimeGrid make_time_grid(double horizon, std::size_t steps);

/// Two correlated Brownian motions with constant drift.
struct DiffusionSpec {
  std::array<double, 2> start{0.0, 0.0};
  std::array<double, 2> drift{0.0, 0.0};
  std::array<double, 2> vol{1.0, 1.0};
  double correlation = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Discretized continuous semimartingale X_i = X_i(0) + M_i + V_i.
///
/// Increment arrays have one entry per step j (from t_j to t_{j+1}). The
/// variation laws are carried as per-step increments of <M_i> and <M_1,M_2>,
/// which for the diffusion generator are the exact (analytic) values.
struct SamplePath2D {
  TimeGrid grid;
  std::array<std::vector<double>, 2> x;
  std::array<std::vector<double>, 2> dm;
  std::array<std::vector<double>, 2> dv;
  std::array<std::vector<double>, 2> dqv;
  std::vector<double> dcv;

  const std::vector<double>& values(Coord c) const { return x[index(c)]; }
  const std::vector<double>& martingale_increments(Coord c) const { return dm[index(c)]; }
  const std::vector<double>& bv_increments(Coord c) const { return dv[index(c)]; }
  const std::vector<double>& qv_increments(Coord c) const { return dqv[index(c)]; }

  /// Checks array sizes and finiteness; throws InvalidArgument.
  void validate() const;

  /// Builds a path by accumulating X from the supplied increments.
  static SamplePath2D from_increments(const TimeGrid& grid, std::array<double, 2> start,
                                      std::array<std::vector<double>, 2> dm,
                                      std::array<std::vector<double>, 2> dv,
                                      std::array<std::vector<double>, 2> dqv, std::vector<double> dcv);
};

/// A function of time sampled on a grid, used for variation processes.
struct BVPath {
  TimeGrid grid;
  std::vector<double> values;

  double terminal() const { return values.back(); }
  /// Sum of |F(t_{j+1}) - F(t_j)| over the grid.
  double total_variation() const;
};

SamplePath2D simulate_diffusion(const DiffusionSpec& spec, const TimeGrid& grid);

/// Same as simulate_diffusion but reuses the storage of `out`.
void simulate_diffusion_into(const DiffusionSpec& spec, const TimeGrid& grid, SamplePath2D& out);

/// Analytic variation laws carried by the path.
BVPath quadratic_variation_law(const SamplePath2D& path, Coord c);
BVPath cross_variation_law(const SamplePath2D& path);

/// F(t_j) = sum_{k<j} dM_i(k)^2.
BVPath realized_quadratic_variation(const SamplePath2D& path, Coord c);
/// F(t_j) = sum_{k<j} dM_1(k) dM_2(k).
BVPath realized_cross_variation(const SamplePath2D& path);

/// C^2 curve x2 = b(x1) with its first two derivatives.
struct SmoothCurve {
  std::function<double(double)> value;
  std::function<double(double)> slope;
  std::function<double(double)> curvature;

  static SmoothCurve constant(double c);
  static SmoothCurve identity();
  static SmoothCurve sine();
};

/// Path of (X_1, X_2 - b(X_1)).
///
/// The martingale part of the new second coordinate is dM_2 - b'(X_1) dM_1;
/// its bounded-variation part is dV_2 - b'(X_1) dV_1 minus the second-order
/// remainder b(X_1(t_{j+1})) - b(X_1(t_j)) - b'(X_1(t_j)) dX_1, whose
/// expectation is the (1/2) b'' d<M_1> drift, so telescoping stays exact.
/// Variation laws: d<M_2*> = d<M_2> - 2b' d<M_1,M_2> + b'^2 d<M_1>,
/// d<M_1,M_2*> = d<M_1,M_2> - b' d<M_1>.
SamplePath2D transform_by_curve(const SamplePath2D& path, const SmoothCurve& curve);

/// CSV with columns t,X1,X2,dM1,dM2,dV1,dV2. Row j carries the increments of
/// the step ending at t_j (zeros on row 0).
void write_path_csv(std::ostream& os, const SamplePath2D& path);

}  // namespace slsito::sim
