#include "slsito/testfunction.hpp"

#include <algorithm>

#include "slsito/error.hpp"

namespace slsito::ito {

namespace {

Fn3 add(const Fn3& a, const Fn3& b, double sign) {
  if (!a || !b) return {};
  return [a, b, sign](double t, double x1, double x2) { return a(t, x1, x2) + sign * b(t, x1, x2); };
}

Fn2 add(const Fn2& a, const Fn2& b) {
  if (!a || !b) return {};
  return [a, b](double t, double x) { return a(t, x) + b(t, x); };
}

TestFunction combine(const TestFunction& a, const TestFunction& b, double sign) {
  TestFunction r;
  r.name = a.name + (sign > 0 ? "+" : "-") + b.name;
  r.value = add(a.value, b.value, sign);
  r.dt = add(a.dt, b.dt, sign);
  r.d1 = add(a.d1, b.d1, sign);
  r.d2 = add(a.d2, b.d2, sign);
  r.d12 = add(a.d12, b.d12, sign);
  r.d11 = add(a.d11, b.d11, sign);
  r.d22 = add(a.d22, b.d22, sign);
  r.regularity = std::max(a.regularity, b.regularity);
  r.depends = {a.depends.t || b.depends.t, a.depends.x1 || b.depends.x1, a.depends.x2 || b.depends.x2};
  return r;
}

void need(bool present, const std::string& fn, const char* what) {
  if (!present) throw ConfigurationError("function " + fn + " lacks " + what);
}

}  // namespace

void TestFunction::require_first_order() const {
  need(static_cast<bool>(value), name, "value");
  need(static_cast<bool>(dt), name, "time derivative");
  need(static_cast<bool>(d1), name, "derivative in x1");
  need(static_cast<bool>(d2), name, "derivative in x2");
  need(static_cast<bool>(d12), name, "mixed derivative");
}

void TestFunction::require_second_order() const {
  require_first_order();
  need(static_cast<bool>(d11), name, "second derivative in x1");
  need(static_cast<bool>(d22), name, "second derivative in x2");
}

TestFunction TestFunction::zero() {
  TestFunction f;
  f.name = "ZERO";
  const Fn3 z = [](double, double, double) { return 0.0; };
  f.value = f.dt = f.d1 = f.d2 = f.d12 = f.d11 = f.d22 = z;
  f.regularity = Regularity::Smooth;
  f.depends = {false, false, false};
  return f;
}

TestFunction operator+(const TestFunction& a, const TestFunction& b) { return combine(a, b, 1.0); }
TestFunction operator-(const TestFunction& a, const TestFunction& b) { return combine(a, b, -1.0); }

void TestFunction1D::require_first_order() const {
  need(static_cast<bool>(value), name, "value");
  need(static_cast<bool>(dt), name, "time derivative");
  need(static_cast<bool>(dx), name, "space derivative");
}

TestFunction1D TestFunction1D::zero() {
  TestFunction1D f;
  f.name = "ZERO";
  const Fn2 z = [](double, double) { return 0.0; };
  f.value = f.dt = f.dx = f.dxx = z;
  return f;
}

TestFunction1D operator+(const TestFunction1D& a, const TestFunction1D& b) {
  TestFunction1D r;
  r.name = a.name + "+" + b.name;
  r.value = add(a.value, b.value);
  r.dt = add(a.dt, b.dt);
  r.dx = add(a.dx, b.dx);
  r.dxx = add(a.dxx, b.dxx);
  return r;
}

}  // namespace slsito::ito
