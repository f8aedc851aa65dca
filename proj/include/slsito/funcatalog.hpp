#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "slsito/slsintegral.hpp"
#include "slsito/testfunction.hpp"

namespace slsito::fn {

/// Adaptive Gauss-Kronrod quadrature on [a, b]; throws EvaluationError when the
/// integrand is non-finite or the error estimate misses the tolerance badly.
double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-10);

/// rho(x) = c exp(1 / ((x-1)^2 - 1)) on (0, 2), zero elsewhere, with c fixed
/// so that rho integrates to one.
class Mollifier {
 public:
  static const Mollifier& standard();

  double constant() const noexcept { return c_; }
  double rho(double x) const noexcept;
  double rho_prime(double x) const noexcept;
  /// n rho(n x).
  double scaled(double n, double x) const noexcept { return n * rho(n * x); }

 private:
  Mollifier();
  double c_;
};

/// n rho(n x); throws InvalidArgument for n < 1.
double mollifier_value(double n, double x);

/// f_n(s, x1, x2) = int rho(t) rho(y) rho(z) f(s - t/n, x1 - y/n, x2 - z/n) over (0,2)^3
/// with f(-s, .) = f(s, .). Only axes listed in f.depends are integrated.
/// First derivatives integrate the one-sided callbacks; second and mixed
/// derivatives move one derivative onto the kernel.
ito::TestFunction mollify(const ito::TestFunction& f, double n, double tol = 1e-8);

enum class Formula { ItoSmooth, Ito2D, ItoSplit, Corollary, Ito1D, Curve1D };

const char* formula_name(Formula f) noexcept;

struct CatalogEntry {
  std::string id;
  std::string description;
  ito::TestFunction function;
  std::vector<Formula> formulas;
  std::vector<std::string> reductions;
  std::optional<ito::SplitFunction> split;
  std::optional<ito::Curve> curve;
  std::optional<ito::SplitFunction1D> one_dimensional;
  std::optional<ito::MovingLevel> moving_level;

  bool supports(Formula f) const;
};

/// Immutable, built once.
const std::vector<CatalogEntry>& catalog();

/// Throws ConfigurationError for unknown ids.
const CatalogEntry& catalog_entry(const std::string& id);

/// Integrand/field pairs for isometry and martingale checks.
enum class FieldKind { Scaled, Indicator };

struct IsometryPair {
  std::string id;
  std::string description;
  sls::AdaptedIntegrand integrand;
  FieldKind field = FieldKind::Scaled;
  sim::Coord coordinate = sim::Coord::X1;
  std::function<double(double)> scale;  // Scaled fields only
  double level_lo = 0.0;
  double level_hi = 1.0;
  std::optional<double> closed_form_second_moment;  // E[I_1^2] for standard BM when known
};

const std::vector<IsometryPair>& isometry_pairs();
const IsometryPair& isometry_pair(const std::string& id);

}  // namespace slsito::fn
