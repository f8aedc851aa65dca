#include "slsito/stats.hpp"

#include <algorithm>
#include <cmath>

#include "slsito/error.hpp"

namespace slsito::stats {

double pairwise_sum(std::span<const double> xs) noexcept {
  if (xs.size() <= 16) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

double median(std::vector<double> xs) {
  if (xs.empty()) return 0.0;
  const std::size_t mid = xs.size() / 2;
  std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid), xs.end());
  const double upper = xs[mid];
  if (xs.size() % 2 == 1) return upper;
  const double lower = *std::max_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

Moments describe(std::span<const double> xs) {
  Moments m;
  m.count = xs.size();
  if (xs.empty()) return m;
  const double n = static_cast<double>(xs.size());
  m.mean = pairwise_sum(xs) / n;
  if (xs.size() >= 2) {
    std::vector<double> sq(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) sq[i] = (xs[i] - m.mean) * (xs[i] - m.mean);
    const double var = pairwise_sum(sq) / (n - 1.0);
    m.se = std::sqrt(var / n);
  }
  std::vector<double> copy(xs.begin(), xs.end());
  m.median = median(copy);
  for (auto& v : copy) v = std::abs(v - m.median);
  m.mad = median(std::move(copy));
  return m;
}

double paired_difference_se(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("paired_difference_se: size mismatch");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return describe(d).se;
}

}  // namespace slsito::stats
