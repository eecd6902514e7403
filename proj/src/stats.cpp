#include "gfs/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gfs/numerics.hpp"

namespace gfs {

SampleSummary summarize(std::span<const double> samples) {
  SampleSummary s;
  s.n = samples.size();
  if (s.n == 0) return s;
  s.mean = pairwise_sum(samples) / static_cast<double>(s.n);
  if (s.n < 2) return s;
  std::vector<double> d2(s.n), d4(s.n);
  for (std::size_t i = 0; i < s.n; ++i) {
    const double d = samples[i] - s.mean;
    d2[i] = d * d;
    d4[i] = d2[i] * d2[i];
  }
  const double n = static_cast<double>(s.n);
  const double m2 = pairwise_sum(d2) / n;
  const double m4 = pairwise_sum(d4) / n;
  s.variance = m2 * n / (n - 1.0);
  s.std_error = std::sqrt(s.variance / n);
  s.variance_std_error = std::sqrt(std::max(0.0, m4 - m2 * m2) / n);
  return s;
}

double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf) {
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_critical_95(std::size_t n) { return 1.3581 / std::sqrt(static_cast<double>(n)); }

}  // namespace gfs
