#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace slsito::stats {

/// Pairwise (cascade) summation; result does not depend on thread layout.
double pairwise_sum(std::span<const double> xs) noexcept;

/// Neumaier compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct Moments {
  std::size_t count = 0;
  double mean = 0.0;
  double se = 0.0;      // standard error of the mean, 0 when count < 2
  double median = 0.0;
  double mad = 0.0;     // median absolute deviation about the median
};

Moments describe(std::span<const double> xs);

double median(std::vector<double> xs);

/// Standard error of mean(a) - mean(b) for paired samples.
double paired_difference_se(std::span<const double> a, std::span<const double> b);

}  // namespace slsito::stats
