#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace gfs {

/// Sample moments with fixed-order (pairwise) reductions.
struct SampleSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;        ///< unbiased
  double std_error = 0.0;       ///< of the mean
  double variance_std_error = 0.0;  ///< large-sample standard error of the variance
};

SampleSummary summarize(std::span<const double> samples);

/// Estimate with its Monte Carlo standard error.
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// One-sample Kolmogorov-Smirnov statistic sup |F_n - F| against a CDF.
double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf);

/// Asymptotic 95% critical value of the one-sample KS statistic.
double ks_critical_95(std::size_t n);

}  // namespace gfs
