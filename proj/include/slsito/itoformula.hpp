#pragma once

// Term-by-term evaluation of Ito-type identities on one path. Every report
// carries the full term set; terms a formula does not use are zero.

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "slsito/localtime.hpp"
#include "slsito/simulate.hpp"
#include "slsito/testfunction.hpp"

namespace slsito::ito {

enum class Term : std::size_t { Time, Dx1, Dx2, Lt1, Sls1, Lt2, Sls2, Cross, Delta1, Delta2, Curve };
inline constexpr std::size_t kTermCount = 11;

/// CSV column names in Term order ("term_time", ...).
const std::array<const char*, kTermCount>& term_names() noexcept;

struct ItoReport {
  double lhs = 0.0;
  std::array<double, kTermCount> terms{};
  double residual = 0.0;

  double& operator[](Term t) { return terms[static_cast<std::size_t>(t)]; }
  double operator[](Term t) const { return terms[static_cast<std::size_t>(t)]; }
  double term_sum() const;
  /// residual = lhs - sum of terms.
  void finalize();
  bool finite() const;
};

/// path_id,lhs,term_time,...,term_curve,residual
void write_report_header(std::ostream& os);
void write_report_row(std::ostream& os, std::size_t path_id, const ItoReport& r);

enum class LocalTimeMethod { Occupation, Tanaka };

struct LevelPair {
  lt::LevelGrid x1;
  lt::LevelGrid x2;
};

/// Level grids with spacing eps covering each coordinate's range plus a
/// margin of 4 sqrt(max_i <M_i>(T)), anchored so that 0 is a node.
LevelPair default_levels(const sim::SamplePath2D& path, double eps);
lt::LevelGrid default_levels(const sim::SamplePath2D& path, sim::Coord c, double eps);

/// Classical Ito sums; requires a smooth function with second derivatives.
ItoReport ito_smooth_residual(const TestFunction& f, const sim::SamplePath2D& path);

/// Local-time form for both coordinates.
ItoReport ito2d_residual(const TestFunction& f, const sim::SamplePath2D& path, const LevelPair& levels, double eps,
                         LocalTimeMethod method = LocalTimeMethod::Occupation);

/// Second-order terms from the smooth part, local-time terms from the rough part.
ItoReport ito2d_split_residual(const SplitFunction& split, const sim::SamplePath2D& path, const LevelPair& levels,
                               double eps, LocalTimeMethod method = LocalTimeMethod::Occupation);

/// Smooth terms off the curve plus sum_j jump(X1(t_j)) dL2*(t_j, 0), where
/// L2* is the local time at 0 of X2* = X2 - b(X1). f needs d11 and d22 off the curve.
ItoReport curve_corollary_residual(const TestFunction& f, const Curve& curve, const sim::SamplePath2D& path,
                                   double eps, LocalTimeMethod method = LocalTimeMethod::Occupation);

/// f_v(x1,x2) = int_0^x1 jump(y) (x2 - b(y))+ dy and f_h = f - f_v.
/// f_h carries no second derivatives.
SplitFunction corollary_split(const TestFunction& f, const Curve& curve);

/// One-dimensional local-time form on coordinate c; the report uses the
/// dx/lt/sls/delta slots of that coordinate.
ItoReport ito1d_residual(const SplitFunction1D& split, const sim::SamplePath2D& path, sim::Coord c,
                         const lt::LevelGrid& levels, double eps,
                         LocalTimeMethod method = LocalTimeMethod::Occupation);

/// One-dimensional formula with jumps of dx f along x = gamma(t); the local
/// time increment is read at the level at or below gamma(t_j).
ItoReport curve1d_residual(const TestFunction1D& f, const MovingLevel& level, const sim::SamplePath2D& path,
                           sim::Coord c, const lt::LevelGrid& levels, double eps,
                           LocalTimeMethod method = LocalTimeMethod::Occupation);

struct Box {
  double t_lo = 0.0, t_hi = 1.0;
  double x1_lo = -1.0, x1_hi = 1.0;
  double x2_lo = -1.0, x2_hi = 1.0;
};

struct Diagnostic {
  std::string name;
  double value = 0.0;
  bool ok = true;
  std::string message;
};

/// Advisory checks: finite-difference agreement of the one-sided callbacks
/// away from kinks, variation of the first derivatives along level lines under
/// grid refinement, and boundedness on the box. Never throws for violations.
std::vector<Diagnostic> condition_check(const TestFunction& f, const Box& box, std::size_t samples,
                                        std::uint64_t seed = 0);

}  // namespace slsito::ito
