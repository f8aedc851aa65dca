#pragma once

#include <functional>
#include <string>

namespace slsito::ito {

using Fn3 = std::function<double(double t, double x1, double x2)>;
using Fn2 = std::function<double(double t, double x)>;
using Fn1 = std::function<double(double)>;

enum class Regularity { Smooth, Split, BvOnly };

/// Which arguments the function actually depends on (used to skip
/// integration axes when mollifying).
struct Dependence {
  bool t = true;
  bool x1 = true;
  bool x2 = true;
};

/// f(t, x1, x2) with its one-sided derivatives supplied exactly.
///
/// dt is the left time derivative, d1/d2 the left space derivatives, d12 the
/// left mixed derivative; d11/d22 are left second derivatives and may be empty
/// for functions that are not C^1.
struct TestFunction {
  std::string name;
  Fn3 value;
  Fn3 dt;
  Fn3 d1;
  Fn3 d2;
  Fn3 d12;
  Fn3 d11;
  Fn3 d22;
  Regularity regularity = Regularity::BvOnly;
  Dependence depends;

  bool has_second_order() const noexcept { return static_cast<bool>(d11) && static_cast<bool>(d22); }
  /// Throws ConfigurationError naming the first missing callback.
  void require_first_order() const;
  void require_second_order() const;

  static TestFunction zero();
  /// Pointwise sum / difference; a second-order callback is kept only when both sides have it.
  friend TestFunction operator+(const TestFunction& a, const TestFunction& b);
  friend TestFunction operator-(const TestFunction& a, const TestFunction& b);
};

/// f = f_h + f_v with f_h C^1 (left second derivatives available) and f_v of
/// bounded variation type.
struct SplitFunction {
  TestFunction smooth_part;
  TestFunction rough_part;

  TestFunction combined() const { return smooth_part + rough_part; }
};

/// One-dimensional f(t, x).
struct TestFunction1D {
  std::string name;
  Fn2 value;
  Fn2 dt;
  Fn2 dx;
  Fn2 dxx;

  void require_first_order() const;
  static TestFunction1D zero();
  friend TestFunction1D operator+(const TestFunction1D& a, const TestFunction1D& b);
};

struct SplitFunction1D {
  TestFunction1D smooth_part;
  TestFunction1D rough_part;

  TestFunction1D combined() const { return smooth_part + rough_part; }
};

/// Curve x2 = b(x1) across which the x2-derivative of f jumps.
/// jump(x1) = d2 f(x1, b(x1)+) - d2 f(x1, b(x1)-).
struct Curve {
  Fn1 value;
  Fn1 slope;
  Fn1 curvature;
  Fn1 jump;
};

/// Moving level x = gamma(t) of bounded variation for one-dimensional
/// functions; jump(t) = dx f(t, gamma(t)+) - dx f(t, gamma(t)-).
struct MovingLevel {
  Fn1 gamma;
  Fn1 jump;
};

}  // namespace slsito::ito
