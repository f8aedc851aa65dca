#include "slsito/funcatalog.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "slsito/error.hpp"

namespace slsito::fn {

using ito::Fn3;
using ito::TestFunction;

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  auto guarded = [&f](double x) {
    const double v = f(x);
    if (!std::isfinite(v)) throw EvaluationError("quadrature integrand is non-finite");
    return v;
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  double err = 0.0;
  const double r = GK::integrate(guarded, a, b, 30, tol, &err);
  if (!std::isfinite(r)) throw EvaluationError("quadrature did not converge");
  const double limit = std::sqrt(tol) * (1.0 + std::fabs(r));
  if (err > limit) {
    // The reported error is the coarsest estimate; confirm against a bisected run.
    const double m = 0.5 * (a + b);
    const double halves = GK::integrate(guarded, a, m, 30, tol) + GK::integrate(guarded, m, b, 30, tol);
    if (!std::isfinite(halves) || std::fabs(halves - r) > limit) throw EvaluationError("quadrature did not converge");
  }
  return r;
}

namespace {

double bump_shape(double x) {
  if (!(x > 0.0 && x < 2.0)) return 0.0;
  return std::exp(1.0 / ((x - 1.0) * (x - 1.0) - 1.0));
}

}  // namespace

Mollifier::Mollifier() : c_(1.0 / integrate(bump_shape, 0.0, 2.0, 1e-14)) {}

const Mollifier& Mollifier::standard() {
  static const Mollifier m;
  return m;
}

double Mollifier::rho(double x) const noexcept { return c_ * bump_shape(x); }

double Mollifier::rho_prime(double x) const noexcept {
  if (!(x > 0.0 && x < 2.0)) return 0.0;
  const double u = x - 1.0;
  const double d = u * u - 1.0;
  return rho(x) * (-2.0 * u) / (d * d);
}

double mollifier_value(double n, double x) {
  if (!(n >= 1.0)) throw InvalidArgument("mollifier order must be at least 1");
  return Mollifier::standard().scaled(n, x);
}

namespace {

enum class Kernel { Rho, RhoPrime };

double kernel(Kernel k, double x) {
  const auto& m = Mollifier::standard();
  return k == Kernel::Rho ? m.rho(x) : m.rho_prime(x);
}

// int K_t K_y K_z g(|s - t/n|, x1 - y/n, x2 - z/n); odd_in_time flips the sign
// of reflected samples (used for the time derivative).
double smooth(const Fn3& g, bool odd_in_time, Kernel kt, Kernel ky, Kernel kz, const ito::Dependence& dep,
              double n, double tol, double s, double x1, double x2) {
  auto at = [&](double t, double y, double z) {
    double tau = s - t / n;
    double sign = 1.0;
    if (tau < 0.0) {
      tau = -tau;
      if (odd_in_time) sign = -1.0;
    }
    return sign * g(tau, x1 - y / n, x2 - z / n);
  };
  auto axis = [&](bool depends, Kernel k, const std::function<double(double)>& inner) {
    if (!depends) return k == Kernel::Rho ? inner(0.0) : 0.0;
    return integrate([&](double u) { return kernel(k, u) * inner(u); }, 0.0, 2.0, tol);
  };
  return axis(dep.t, kt, [&](double t) {
    return axis(dep.x1, ky, [&](double y) {
      return axis(dep.x2, kz, [&](double z) { return at(dep.t ? t : n * s, y, dep.x2 ? z : 0.0); });
    });
  });
}

}  // namespace

ito::TestFunction mollify(const ito::TestFunction& f, double n, double tol) {
  if (!(n >= 1.0)) throw InvalidArgument("mollifier order must be at least 1");
  f.require_first_order();
  const ito::Dependence dep = f.depends;
  auto make = [dep, n, tol](Fn3 g, bool odd, Kernel kt, Kernel ky, Kernel kz, double scale) -> Fn3 {
    return [=](double s, double x1, double x2) { return scale * smooth(g, odd, kt, ky, kz, dep, n, tol, s, x1, x2); };
  };
  TestFunction r;
  r.name = f.name + "_n" + std::to_string(static_cast<long long>(n));
  r.value = make(f.value, false, Kernel::Rho, Kernel::Rho, Kernel::Rho, 1.0);
  r.dt = make(f.dt, true, Kernel::Rho, Kernel::Rho, Kernel::Rho, 1.0);
  r.d1 = make(f.d1, false, Kernel::Rho, Kernel::Rho, Kernel::Rho, 1.0);
  r.d2 = make(f.d2, false, Kernel::Rho, Kernel::Rho, Kernel::Rho, 1.0);
  r.d12 = make(f.d2, false, Kernel::Rho, Kernel::RhoPrime, Kernel::Rho, n);
  r.d11 = make(f.d1, false, Kernel::Rho, Kernel::RhoPrime, Kernel::Rho, n);
  r.d22 = make(f.d2, false, Kernel::Rho, Kernel::Rho, Kernel::RhoPrime, n);
  r.regularity = ito::Regularity::Smooth;
  r.depends = dep;
  return r;
}

const char* formula_name(Formula f) noexcept {
  switch (f) {
    case Formula::ItoSmooth: return "ito-smooth";
    case Formula::Ito2D: return "ito-2d";
    case Formula::ItoSplit: return "ito-split";
    case Formula::Corollary: return "corollary";
    case Formula::Ito1D: return "ito-1d";
    case Formula::Curve1D: return "curve-1d";
  }
  return "unknown";
}

bool CatalogEntry::supports(Formula f) const {
  return std::find(formulas.begin(), formulas.end(), f) != formulas.end();
}

namespace {

Fn3 constant3(double c) {
  return [c](double, double, double) { return c; };
}

ito::Fn2 constant2(double c) {
  return [c](double, double) { return c; };
}

double pos(double x) { return x > 0.0 ? x : 0.0; }
double ind(bool b) { return b ? 1.0 : 0.0; }
double sgn_left(double x) { return x > 0.0 ? 1.0 : -1.0; }

TestFunction smooth_fn(std::string name, Fn3 v, Fn3 dt, Fn3 d1, Fn3 d2, Fn3 d12, Fn3 d11, Fn3 d22,
                       ito::Dependence dep) {
  TestFunction f;
  f.name = std::move(name);
  f.value = std::move(v);
  f.dt = std::move(dt);
  f.d1 = std::move(d1);
  f.d2 = std::move(d2);
  f.d12 = std::move(d12);
  f.d11 = std::move(d11);
  f.d22 = std::move(d22);
  f.regularity = ito::Regularity::Smooth;
  f.depends = dep;
  return f;
}

ito::TestFunction1D one_dim(std::string name, ito::Fn2 v, ito::Fn2 dt, ito::Fn2 dx, ito::Fn2 dxx) {
  ito::TestFunction1D f;
  f.name = std::move(name);
  f.value = std::move(v);
  f.dt = std::move(dt);
  f.dx = std::move(dx);
  f.dxx = std::move(dxx);
  return f;
}

ito::Curve flat_curve(double jump) {
  return {[](double) { return 0.0; }, [](double) { return 0.0; }, [](double) { return 0.0; },
          [jump](double) { return jump; }};
}

ito::Curve sine_curve(double jump) {
  return {[](double x) { return std::sin(x); }, [](double x) { return std::cos(x); },
          [](double x) { return -std::sin(x); }, [jump](double) { return jump; }};
}

ito::SplitFunction rough_only(const TestFunction& f) { return {TestFunction::zero(), f}; }

ito::SplitFunction1D rough_only(const ito::TestFunction1D& f) { return {ito::TestFunction1D::zero(), f}; }

std::vector<CatalogEntry> build_catalog() {
  using F = Formula;
  std::vector<CatalogEntry> c;
  const Fn3 zero = constant3(0.0);

  {
    CatalogEntry e;
    e.id = "CONST";
    e.description = "f = 1.5";
    e.function = smooth_fn("CONST", constant3(1.5), zero, zero, zero, zero, zero, zero, {false, false, false});
    e.formulas = {F::ItoSmooth, F::Ito2D, F::ItoSplit, F::Ito1D};
    e.reductions = {"all terms vanish"};
    e.split = ito::SplitFunction{e.function, TestFunction::zero()};
    e.one_dimensional = ito::SplitFunction1D{
        one_dim("CONST", constant2(1.5), constant2(0.0), constant2(0.0), constant2(0.0)), ito::TestFunction1D::zero()};
    c.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.id = "SMOOTH_QUAD";
    e.description = "f = x1^2 + x2^2 + t";
    e.function = smooth_fn(
        "SMOOTH_QUAD", [](double t, double x1, double x2) { return x1 * x1 + x2 * x2 + t; }, constant3(1.0),
        [](double, double x1, double) { return 2.0 * x1; }, [](double, double, double x2) { return 2.0 * x2; },
        zero, constant3(2.0), constant3(2.0), {true, true, true});
    e.formulas = {F::ItoSmooth, F::Ito2D, F::ItoSplit, F::Ito1D};
    e.reductions = {"level-Stieltjes terms reproduce the second-order terms"};
    e.split = ito::SplitFunction{e.function, TestFunction::zero()};
    e.one_dimensional = ito::SplitFunction1D{
        one_dim(
            "SMOOTH_QUAD", [](double t, double x) { return x * x + t; }, constant2(1.0),
            [](double, double x) { return 2.0 * x; }, constant2(2.0)),
        ito::TestFunction1D::zero()};
    c.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.id = "CROSS";
    e.description = "f = x1 x2";
    e.function = smooth_fn(
        "CROSS", [](double, double x1, double x2) { return x1 * x2; }, zero,
        [](double, double, double x2) { return x2; }, [](double, double x1, double) { return x1; },
        constant3(1.0), zero, zero, {false, true, true});
    e.formulas = {F::ItoSmooth, F::Ito2D, F::ItoSplit};
    e.reductions = {"cross term equals the cross-variation"};
    e.split = ito::SplitFunction{e.function, TestFunction::zero()};
    c.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.id = "TANAKA2";
    e.description = "f = (x2)+";
    TestFunction f;
    f.name = "TANAKA2";
    f.value = [](double, double, double x2) { return pos(x2); };
    f.dt = zero;
    f.d1 = zero;
    f.d2 = [](double, double, double x2) { return ind(x2 > 0.0); };
    f.d12 = zero;
    f.d11 = zero;
    f.d22 = zero;
    f.depends = {false, false, true};
    e.function = f;
    e.formulas = {F::Ito2D, F::ItoSplit, F::Corollary, F::Ito1D, F::Curve1D};
    e.reductions = {"Tanaka formula for (X2)+"};
    e.split = rough_only(f);
    e.curve = flat_curve(1.0);
    const auto f1 = one_dim(
        "TANAKA", [](double, double x) { return pos(x); }, constant2(0.0),
        [](double, double x) { return ind(x > 0.0); }, constant2(0.0));
    e.one_dimensional = rough_only(f1);
    e.moving_level = ito::MovingLevel{[](double) { return 0.0; }, [](double) { return 1.0; }};
    c.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.id = "ABS2";
    e.description = "f = |x2|";
    TestFunction f;
    f.name = "ABS2";
    f.value = [](double, double, double x2) { return std::fabs(x2); };
    f.dt = zero;
    f.d1 = zero;
    f.d2 = [](double, double, double x2) { return sgn_left(x2); };
    f.d12 = zero;
    f.d11 = zero;
    f.d22 = zero;
    f.depends = {false, false, true};
    e.function = f;
    e.formulas = {F::Ito2D, F::ItoSplit, F::Corollary, F::Ito1D, F::Curve1D};
    e.reductions = {"Tanaka formula for |X2| with curve term 2 L2(t,0)"};
    e.split = rough_only(f);
    e.curve = flat_curve(2.0);
    const auto f1 = one_dim(
        "ABS", [](double, double x) { return std::fabs(x); }, constant2(0.0),
        [](double, double x) { return sgn_left(x); }, constant2(0.0));
    e.one_dimensional = rough_only(f1);
    e.moving_level = ito::MovingLevel{[](double) { return 0.0; }, [](double) { return 2.0; }};
    c.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.id = "ABS_CURVE";
    e.description = "f = |x2 - sin x1|";
    TestFunction f;
    f.name = "ABS_CURVE";
    f.value = [](double, double x1, double x2) { return std::fabs(x2 - std::sin(x1)); };
    f.dt = zero;
    f.d1 = [](double, double x1, double x2) {
      const double u = x2 - std::sin(x1);
      const double b1 = std::cos(x1);
      return u == 0.0 ? -std::fabs(b1) : -sgn_left(u) * b1;
    };
    f.d2 = [](double, double x1, double x2) { return sgn_left(x2 - std::sin(x1)); };
    f.d12 = zero;
    f.d11 = [](double, double x1, double x2) { return sgn_left(x2 - std::sin(x1)) * std::sin(x1); };
    f.d22 = zero;
    f.depends = {false, true, true};
    e.function = f;
    e.formulas = {F::Ito2D, F::Corollary};
    e.reductions = {"curve term with jump 2 along x2 = sin x1"};
    e.curve = sine_curve(2.0);
    c.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.id = "RAMP_CURVE";
    e.description = "f = (x2 - sin x1)+";
    TestFunction f;
    f.name = "RAMP_CURVE";
    f.value = [](double, double x1, double x2) { return pos(x2 - std::sin(x1)); };
    f.dt = zero;
    f.d1 = [](double, double x1, double x2) {
      const double u = x2 - std::sin(x1);
      const double b1 = std::cos(x1);
      if (u > 0.0) return -b1;
      return u == 0.0 ? -pos(b1) : 0.0;
    };
    f.d2 = [](double, double x1, double x2) { return ind(x2 > std::sin(x1)); };
    f.d12 = zero;
    f.d11 = [](double, double x1, double x2) { return ind(x2 > std::sin(x1)) * std::sin(x1); };
    f.d22 = zero;
    f.depends = {false, true, true};
    e.function = f;
    e.formulas = {F::Ito2D, F::Corollary};
    e.reductions = {"curve term with jump 1 along x2 = sin x1"};
    e.curve = sine_curve(1.0);
    c.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.id = "MOVING_KINK";
    e.description = "f = (x2 - t)+";
    TestFunction f;
    f.name = "MOVING_KINK";
    f.value = [](double t, double, double x2) { return pos(x2 - t); };
    f.dt = [](double t, double, double x2) { return -ind(x2 >= t); };
    f.d1 = zero;
    f.d2 = [](double t, double, double x2) { return ind(x2 > t); };
    f.d12 = zero;
    f.d11 = zero;
    f.d22 = zero;
    f.depends = {true, false, true};
    e.function = f;
    e.formulas = {F::Ito2D, F::ItoSplit, F::Ito1D, F::Curve1D};
    e.reductions = {"nonzero two-parameter term"};
    e.split = rough_only(f);
    const auto f1 = one_dim(
        "MOVING_KINK", [](double t, double x) { return pos(x - t); },
        [](double t, double x) { return -ind(x >= t); }, [](double t, double x) { return ind(x > t); },
        constant2(0.0));
    e.one_dimensional = rough_only(f1);
    e.moving_level = ito::MovingLevel{[](double t) { return t; }, [](double) { return 1.0; }};
    c.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.id = "QUAD_PLUS_RAMP";
    e.description = "f = x2^2 + (x2)+";
    const TestFunction h = smooth_fn(
        "QUAD2", [](double, double, double x2) { return x2 * x2; }, zero, zero,
        [](double, double, double x2) { return 2.0 * x2; }, zero, zero, constant3(2.0), {false, false, true});
    TestFunction v;
    v.name = "RAMP2";
    v.value = [](double, double, double x2) { return pos(x2); };
    v.dt = zero;
    v.d1 = zero;
    v.d2 = [](double, double, double x2) { return ind(x2 > 0.0); };
    v.d12 = zero;
    v.d11 = zero;
    v.d22 = zero;
    v.depends = {false, false, true};
    e.split = ito::SplitFunction{h, v};
    e.function = h + v;
    e.function.name = "QUAD_PLUS_RAMP";
    e.formulas = {F::Ito2D, F::ItoSplit, F::Corollary};
    e.reductions = {"split evaluation equals unsplit evaluation"};
    e.curve = flat_curve(1.0);
    c.push_back(std::move(e));
  }
  return c;
}

std::vector<IsometryPair> build_pairs() {
  std::vector<IsometryPair> p;
  {
    IsometryPair e;
    e.id = "ISO_UNIT";
    e.description = "g = 1, h(s,a) = a W(s), a in [0,1]";
    e.integrand = [](double, double, const sls::PathPrefix&) { return 1.0; };
    e.scale = [](double a) { return a; };
    e.closed_form_second_moment = 1.0;
    p.push_back(std::move(e));
  }
  {
    IsometryPair e;
    e.id = "ISO_ADAPTED";
    e.description = "g = cos X1(s), h(s,a) = a W(s), a in [0,1]";
    e.integrand = [](double, double, const sls::PathPrefix& past) { return std::cos(past.current(sim::Coord::X1)); };
    e.scale = [](double a) { return a; };
    e.closed_form_second_moment = 0.5 + (1.0 - std::exp(-2.0)) / 4.0;
    p.push_back(std::move(e));
  }
  {
    IsometryPair e;
    e.id = "ISO_INDICATOR";
    e.description = "g = 1 + a, h(s,a) = int 1[X1 > a] dM1, a in [0,1]";
    e.integrand = [](double, double a, const sls::PathPrefix&) { return 1.0 + a; };
    e.field = FieldKind::Indicator;
    p.push_back(std::move(e));
  }
  return p;
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> c = build_catalog();
  return c;
}

const CatalogEntry& catalog_entry(const std::string& id) {
  for (const auto& e : catalog()) {
    if (e.id == id) return e;
  }
  throw ConfigurationError("unknown function id: " + id);
}

const std::vector<IsometryPair>& isometry_pairs() {
  static const std::vector<IsometryPair> p = build_pairs();
  return p;
}

const IsometryPair& isometry_pair(const std::string& id) {
  for (const auto& e : isometry_pairs()) {
    if (e.id == id) return e;
  }
  throw ConfigurationError("unknown isometry pair: " + id);
}

}  // namespace slsito::fn
