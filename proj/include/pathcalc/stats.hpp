#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace pathcalc {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
  void add(double x) noexcept {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double normal_cdf(double x) noexcept;

// Inverse of the standard normal CDF: Acklam's rational approximation
// followed by one Halley step against erfc, good to ~1e-15 in the body.
double normal_quantile(double p);

// Upper delta-quantile z with P(Z >= z) = delta.
inline double normal_upper_quantile(double delta) { return normal_quantile(1.0 - delta); }

// Two-sided Kolmogorov-Smirnov distance between the empirical distribution of
// `sample` and the standard normal.
double ks_statistic_normal(std::span<const double> sample);

struct MeanEstimate {
  std::size_t n = 0;
  double mean = 0.0;
  double std_error = 0.0;
};

// Mean of products w_i * x_i and its standard error; weights all 1 when
// `weights` is empty.
MeanEstimate weighted_mean(std::span<const double> values, std::span<const double> weights);

}  // namespace pathcalc
