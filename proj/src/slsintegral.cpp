#include "slsito/slsintegral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "slsito/csv.hpp"
#include "slsito/error.hpp"
#include "slsito/stats.hpp"

namespace slsito::sls {

namespace {

// Index of `v` in a sorted axis; the value must be a node up to rounding.
std::size_t node_index(const std::vector<double>& axis, double v, const char* what) {
  const auto it = std::lower_bound(axis.begin(), axis.end(), v);
  const double tol = 1e-12 * (1.0 + std::fabs(v));
  if (it != axis.end() && std::fabs(*it - v) <= tol) return static_cast<std::size_t>(it - axis.begin());
  if (it != axis.begin() && std::fabs(*(it - 1) - v) <= tol) return static_cast<std::size_t>(it - axis.begin() - 1);
  throw InvalidArgument(std::string(what) + " is not a node of the field grid");
}

void require_increasing(const std::vector<double>& v, const char* what) {
  if (v.size() < 2) throw InvalidArgument(std::string(what) + " needs at least two nodes");
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) throw InvalidArgument(std::string(what) + " must be strictly increasing");
  }
}

double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw EvaluationError(std::string(what) + " returned a non-finite value");
  return v;
}

std::vector<double> cumulative(const std::vector<double>& increments) {
  std::vector<double> out(increments.size() + 1, 0.0);
  for (std::size_t j = 0; j < increments.size(); ++j) out[j + 1] = out[j] + increments[j];
  return out;
}

double bump_shape(double u) {
  if (!(u > 0.0 && u < 2.0)) return 0.0;
  const double d = (u - 1.0) * (u - 1.0) - 1.0;
  return std::exp(1.0 / d);
}

// Backward smoothing weights along one axis: w[p][q] for q <= p.
struct AxisWeights {
  std::vector<std::vector<std::pair<std::size_t, double>>> rows;
};

AxisWeights backward_weights(const std::vector<double>& axis, double n, SmoothingKernel kernel) {
  AxisWeights w;
  w.rows.resize(axis.size());
  const double width = kernel == SmoothingKernel::Bump ? 2.0 / n : 1.0 / n;
  for (std::size_t p = 0; p < axis.size(); ++p) {
    double total = 0.0;
    for (std::size_t q = p + 1; q-- > 0;) {
      const double d = axis[p] - axis[q];
      if (d >= width) break;
      const double weight = kernel == SmoothingKernel::Bump ? bump_shape(n * d) : 1.0;
      if (weight > 0.0) {
        w.rows[p].emplace_back(q, weight);
        total += weight;
      }
    }
    if (total <= 0.0) {
      w.rows[p] = {{p, 1.0}};
    } else {
      for (auto& [q, weight] : w.rows[p]) weight /= total;
    }
  }
  return w;
}

}  // namespace

SimpleField::SimpleField(std::vector<double> t, std::vector<double> x, double fill)
    : times(std::move(t)), levels(std::move(x)) {
  require_increasing(times, "time partition");
  require_increasing(levels, "level partition");
  coeff.assign(time_cells() * level_cells(), fill);
}

SimpleField SimpleField::combine(double alpha, const SimpleField& a, double beta, const SimpleField& b) {
  if (a.times != b.times || a.levels != b.levels) throw InvalidArgument("simple fields on different partitions");
  SimpleField r(a.times, a.levels);
  for (std::size_t q = 0; q < r.coeff.size(); ++q) r.coeff[q] = alpha * a.coeff[q] + beta * b.coeff[q];
  return r;
}

double PathPrefix::value(sim::Coord c, std::size_t j) const {
  if (j > last_) throw InvalidArgument("adapted integrand read the path beyond the current time");
  return path_->values(c)[j];
}

double PathPrefix::martingale(sim::Coord c, std::size_t j) const {
  if (j > last_) throw InvalidArgument("adapted integrand read the path beyond the current time");
  const auto& dm = path_->martingale_increments(c);
  double m = 0.0;
  for (std::size_t r = 0; r < j; ++r) m += dm[r];
  return m;
}

bv::GridField2 sample_integrand(const AdaptedIntegrand& g, const sim::SamplePath2D& path,
                                const std::vector<double>& levels) {
  if (!g) throw ConfigurationError("integrand callback is empty");
  require_increasing(levels, "level grid");
  bv::GridField2 e(path.grid.nodes(), levels);
  for (std::size_t j = 0; j < e.ns(); ++j) {
    const PathPrefix past(path, j);
    const double s = e.s_axis()[j];
    for (std::size_t i = 0; i < e.nx(); ++i) e.at(j, i) = checked(g(s, levels[i], past), "integrand");
  }
  return e;
}

double sls_integral_simple(const SimpleField& e, const bv::GridField2& h, double t) {
  const auto& hs = h.s_axis();
  const auto& hx = h.x_axis();
  if (hs.empty() || hx.empty()) throw InvalidArgument("empty field");
  if (t < e.times.front()) return 0.0;
  std::vector<std::size_t> ti(e.times.size());
  for (std::size_t j = 0; j < e.times.size(); ++j) {
    ti[j] = node_index(hs, std::min(e.times[j], std::min(t, hs.back())), "clipped time node");
  }
  std::vector<std::size_t> xi(e.levels.size());
  for (std::size_t i = 0; i < e.levels.size(); ++i) xi[i] = node_index(hx, e.levels[i], "level node");

  stats::CompensatedSum total;
  for (std::size_t j = 0; j < e.time_cells(); ++j) {
    const std::size_t a = ti[j], b = ti[j + 1];
    if (a == b) continue;
    for (std::size_t i = 0; i < e.level_cells(); ++i) {
      const std::size_t lo = xi[i], hi = xi[i + 1];
      const double inc = h.at(b, hi) - h.at(a, hi) - h.at(b, lo) + h.at(a, lo);
      total += e.at(j, i) * inc;
    }
  }
  return total.value();
}

double sls_integral(const bv::GridField2& e, const bv::GridField2& h, std::size_t t_index) {
  if (!e.same_grid(h)) throw InvalidArgument("integrand and field are on different grids");
  if (t_index >= h.ns()) throw InvalidArgument("time index beyond the field grid");
  stats::CompensatedSum total;
  for (std::size_t j = 0; j < t_index; ++j) {
    for (std::size_t i = 0; i + 1 < h.nx(); ++i) {
      const double g = e.at(j, i);
      if (g == 0.0) continue;
      total += g * bv::rect_increment2(h, j, i);
    }
  }
  return total.value();
}

double sls_integral(const AdaptedIntegrand& g, const sim::SamplePath2D& path, const bv::GridField2& h,
                    std::size_t t_index) {
  if (h.s_axis() != path.grid.nodes()) throw InvalidArgument("field time axis differs from the path grid");
  return sls_integral(sample_integrand(g, path, h.x_axis()), h, t_index);
}

double sls_integral_local_time(const lt::LocalTimeSurface& surface, const LazyField& h, std::size_t t_index) {
  if (!h) throw ConfigurationError("field callback is empty");
  const auto& grid = surface.time_grid();
  const auto& levels = surface.level_grid();
  if (t_index > grid.steps()) throw InvalidArgument("time index beyond the surface grid");
  if (t_index < 2) return 0.0;
  const std::size_t cells = levels.cells();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> terminal(cells, nan);
  auto d_at = [&](std::size_t j, std::size_t k) {
    return checked(h(j, levels.node(k + 1)), "field") - checked(h(j, levels.node(k)), "field");
  };
  stats::CompensatedSum total;
  for (std::size_t m = 0; m + 1 < t_index; ++m) {
    for (const auto& inc : surface.increments(m)) {
      const std::size_t k = inc.level;
      if (k >= cells || inc.value == 0.0) continue;
      if (std::isnan(terminal[k])) terminal[k] = d_at(t_index, k);
      total += inc.value * (terminal[k] - d_at(m + 1, k));
    }
  }
  return total.value();
}

bv::GridField2 mollify_integrand(const bv::GridField2& e, double n, SmoothingKernel kernel) {
  if (!(n > 0.0) || !std::isfinite(n)) throw InvalidArgument("smoothing index must be positive");
  const AxisWeights ws = backward_weights(e.s_axis(), n, kernel);
  const AxisWeights wx = backward_weights(e.x_axis(), n, kernel);
  bv::GridField2 tmp(e.s_axis(), e.x_axis());
  for (std::size_t j = 0; j < e.ns(); ++j) {
    for (std::size_t i = 0; i < e.nx(); ++i) {
      double v = 0.0;
      for (const auto& [q, w] : ws.rows[j]) v += w * e.at(q, i);
      tmp.at(j, i) = v;
    }
  }
  bv::GridField2 out(e.s_axis(), e.x_axis());
  for (std::size_t j = 0; j < e.ns(); ++j) {
    for (std::size_t i = 0; i < e.nx(); ++i) {
      double v = 0.0;
      for (const auto& [q, w] : wx.rows[i]) v += w * tmp.at(j, q);
      out.at(j, i) = v;
    }
  }
  return out;
}

bv::GridField2 truncate_integrand(const bv::GridField2& e, double n) {
  if (!(n > 0.0)) throw InvalidArgument("truncation level must be positive");
  bv::GridField2 out(e.s_axis(), e.x_axis());
  for (std::size_t j = 0; j < e.ns(); ++j) {
    for (std::size_t i = 0; i < e.nx(); ++i) out.at(j, i) = std::clamp(e.at(j, i), -n, n);
  }
  return out;
}

double linearity_check(const SimpleField& g1, const SimpleField& g2, double alpha, double beta,
                       const bv::GridField2& h, double t) {
  const SimpleField mix = SimpleField::combine(alpha, g1, beta, g2);
  const double lhs = sls_integral_simple(mix, h, t);
  const double rhs = alpha * sls_integral_simple(g1, h, t) + beta * sls_integral_simple(g2, h, t);
  return std::fabs(lhs - rhs);
}

MartingaleField scaled_martingale_field(const sim::SamplePath2D& path, sim::Coord c,
                                        const std::vector<double>& levels,
                                        const std::function<double(double)>& sigma, bool with_cross) {
  if (!sigma) throw ConfigurationError("scale callback is empty");
  require_increasing(levels, "level grid");
  std::vector<double> scale(levels.size());
  for (std::size_t i = 0; i < levels.size(); ++i) scale[i] = checked(sigma(levels[i]), "scale");
  const auto m = cumulative(path.martingale_increments(c));
  const auto q = cumulative(path.qv_increments(c));
  const auto nodes = path.grid.nodes();

  MartingaleField f;
  f.h = bv::GridField2(nodes, levels);
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    for (std::size_t i = 0; i < levels.size(); ++i) f.h.at(j, i) = scale[i] * m[j];
  }
  if (!with_cross) return f;
  auto cross = std::make_shared<bv::GridField3>(nodes, levels, levels);
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    for (std::size_t i = 0; i < levels.size(); ++i) {
      for (std::size_t k = 0; k < levels.size(); ++k) cross->at(j, i, k) = scale[i] * scale[k] * q[j];
    }
  }
  f.cross = std::move(cross);
  return f;
}

MartingaleField indicator_martingale_field(const sim::SamplePath2D& path, sim::Coord c,
                                           const std::vector<double>& levels) {
  require_increasing(levels, "level grid");
  const auto& x = path.values(c);
  const auto& dm = path.martingale_increments(c);
  const auto& dq = path.qv_increments(c);
  const auto nodes = path.grid.nodes();
  const std::size_t M = levels.size();

  MartingaleField f;
  f.h = bv::GridField2(nodes, levels);
  auto cross = std::make_shared<bv::GridField3>(nodes, levels, levels);
  for (std::size_t r = 0; r + 1 < nodes.size(); ++r) {
    for (std::size_t i = 0; i < M; ++i) {
      f.h.at(r + 1, i) = f.h.at(r, i) + (x[r] > levels[i] ? dm[r] : 0.0);
      for (std::size_t k = 0; k < M; ++k) {
        const double top = std::max(levels[i], levels[k]);
        cross->at(r + 1, i, k) = cross->at(r, i, k) + (x[r] > top ? dq[r] : 0.0);
      }
    }
  }
  f.cross = std::move(cross);
  return f;
}

bv::GridField3 cross_variation_field(const ito::TestFunction& f, const sim::SamplePath2D& path,
                                     const std::vector<double>& levels) {
  if (!f.d12) throw ConfigurationError("function " + f.name + " lacks mixed derivative");
  require_increasing(levels, "level grid");
  const auto nodes = path.grid.nodes();
  const auto& x2 = path.values(sim::Coord::X2);
  const auto& dq = path.qv_increments(sim::Coord::X2);
  const std::size_t M = levels.size();
  bv::GridField3 F(nodes, levels, levels);
  std::vector<double> v(M);
  for (std::size_t r = 0; r + 1 < nodes.size(); ++r) {
    for (std::size_t i = 0; i < M; ++i) v[i] = checked(f.d12(nodes[r], levels[i], x2[r]), "mixed derivative");
    for (std::size_t i = 0; i < M; ++i) {
      for (std::size_t k = 0; k < M; ++k) F.at(r + 1, i, k) = F.at(r, i, k) + v[i] * v[k] * dq[r];
    }
  }
  return F;
}

MartingaleField derivative_martingale_field(const ito::TestFunction& f, const sim::SamplePath2D& path,
                                            const std::vector<double>& levels) {
  auto cross = std::make_shared<bv::GridField3>(cross_variation_field(f, path, levels));
  const auto nodes = path.grid.nodes();
  const auto& x2 = path.values(sim::Coord::X2);
  const auto& dm = path.martingale_increments(sim::Coord::X2);
  MartingaleField out;
  out.h = bv::GridField2(nodes, levels);
  for (std::size_t r = 0; r + 1 < nodes.size(); ++r) {
    for (std::size_t i = 0; i < levels.size(); ++i) {
      out.h.at(r + 1, i) = out.h.at(r, i) + f.d12(nodes[r], levels[i], x2[r]) * dm[r];
    }
  }
  out.cross = std::move(cross);
  return out;
}

bv::GridField3 realized_cross_variation_field(const bv::GridField2& h) {
  const std::size_t M = h.nx();
  bv::GridField3 F(h.s_axis(), h.x_axis(), h.x_axis());
  std::vector<double> d(M);
  for (std::size_t r = 0; r + 1 < h.ns(); ++r) {
    for (std::size_t i = 0; i < M; ++i) d[i] = h.at(r + 1, i) - h.at(r, i);
    for (std::size_t i = 0; i < M; ++i) {
      for (std::size_t k = 0; k < M; ++k) F.at(r + 1, i, k) = F.at(r, i, k) + d[i] * d[k];
    }
  }
  return F;
}

IsometrySample isometry_sample(const bv::GridField2& e, const MartingaleField& field, std::size_t t_index) {
  if (!field.cross) throw ConfigurationError("martingale field has no cross-variation attached");
  const bv::GridField3& F = *field.cross;
  if (F.s_axis() != field.h.s_axis() || F.x_axis() != field.h.x_axis() || F.y_axis() != field.h.x_axis()) {
    throw InvalidArgument("cross-variation grid differs from the field grid");
  }
  IsometrySample out;
  out.integral = sls_integral(e, field.h, t_index);
  const std::size_t cells = field.h.nx() - 1;
  stats::CompensatedSum m;
  for (std::size_t j = 0; j < t_index; ++j) {
    for (std::size_t i = 0; i < cells; ++i) {
      const double gi = e.at(j, i);
      if (gi == 0.0) continue;
      for (std::size_t k = 0; k < cells; ++k) {
        const double gk = e.at(j, k);
        if (gk == 0.0) continue;
        m += gi * gk * bv::rect_increment3(F, j, i, k);
      }
    }
  }
  out.measure_term = m.value();
  return out;
}

IsometryReport isometry_check(std::span<const IsometrySample> samples) {
  if (samples.size() < 2) throw InvalidArgument("isometry check needs at least two paths");
  std::vector<double> sq(samples.size()), rhs(samples.size());
  for (std::size_t p = 0; p < samples.size(); ++p) {
    sq[p] = samples[p].integral * samples[p].integral;
    rhs[p] = samples[p].measure_term;
  }
  const auto a = stats::describe(sq);
  const auto b = stats::describe(rhs);
  IsometryReport r;
  r.n_paths = samples.size();
  r.lhs = a.mean;
  r.se_lhs = a.se;
  r.rhs = b.mean;
  r.se_rhs = b.se;
  const double diff = r.lhs - r.rhs;
  const double den = std::hypot(r.se_lhs, r.se_rhs);
  if (den > 0.0) {
    r.z = diff / den;
  } else if (std::fabs(diff) <= 1e-12 * (1.0 + std::fabs(r.lhs))) {
    r.z = 0.0;
  } else {
    r.z = std::copysign(std::numeric_limits<double>::max(), diff);
  }
  return r;
}

void write_isometry_csv(std::ostream& os, std::span<const IsometryReport> reports) {
  csv::write_header(os, {"n_paths", "lhs", "se_lhs", "rhs", "se_rhs", "z"});
  for (const auto& r : reports) {
    csv::write_row(os, {std::to_string(r.n_paths), csv::number(r.lhs), csv::number(r.se_lhs), csv::number(r.rhs),
                        csv::number(r.se_rhs), csv::number(r.z)});
  }
}

double PartsResult::residual() const { return std::fabs(lhs - rhs); }

PartsResult integration_by_parts(const std::function<double(double, double)>& g,
                                 const std::function<double(double, double)>& grad_g, const bv::GridField2& h,
                                 std::size_t t_index) {
  if (!g || !grad_g) throw ConfigurationError("integration by parts needs g and its gradient");
  if (t_index >= h.ns()) throw InvalidArgument("time index beyond the field grid");
  const auto& s = h.s_axis();
  const auto& x = h.x_axis();
  stats::CompensatedSum lhs, rhs;
  for (std::size_t j = 0; j < t_index; ++j) {
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      const double dx = x[i + 1] - x[i];
      const double dh = h.at(j + 1, i) - h.at(j, i);
      lhs += -checked(grad_g(s[j], x[i]), "gradient") * dh * dx;
      rhs += checked(g(s[j], x[i]), "integrand") * bv::rect_increment2(h, j, i);
    }
  }
  return {lhs.value(), rhs.value()};
}

double integration_by_parts_check(const std::function<double(double, double)>& g,
                                  const std::function<double(double, double)>& grad_g, const bv::GridField2& h,
                                  std::size_t t_index) {
  return integration_by_parts(g, grad_g, h, t_index).residual();
}

}  // namespace slsito::sls
