#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace lshape {

/// One-sample Kolmogorov-Smirnov statistic sup |F_n - F| against a continuous CDF.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Two-sample statistic sup |F_n - G_m|.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Asymptotic 1% critical value for the one-sample statistic, 1.63 / sqrt(n).
double ks_critical_value_1pct(std::size_t n);

/// Running mean and variance (Welford), mergeable in a fixed order.
class RunningStats {
 public:
  void add(double x);
  void merge(const RunningStats& other);

  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  /// Unbiased sample variance; zero for fewer than two samples.
  double variance() const;
  double stderr_of_mean() const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Sample skewness (biased moment estimator).
double sample_skewness(std::span<const double> xs);

/// Least-squares line of y against x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
  /// Standard error of the slope; zero for two points.
  double slope_stderr = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace lshape
