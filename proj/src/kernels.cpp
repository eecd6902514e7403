#include "gfs/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gfs/numerics.hpp"

namespace gfs {
namespace {

double observed_order(double err_coarse, double err_fine, double ratio) {
  constexpr double kFloor = 1e-12;
  if (err_coarse <= kFloor && err_fine <= kFloor) return std::numeric_limits<double>::infinity();
  if (err_fine <= 0.0) return std::numeric_limits<double>::infinity();
  return std::log(err_coarse / err_fine) / std::log(ratio);
}

}  // namespace

double GaussianDensity::operator()(double y) const {
  if (!(variance > 0.0)) throw std::domain_error("GaussianDensity: degenerate variance");
  const double d = y - mean;
  return std::exp(-d * d / (2.0 * variance)) / std::sqrt(2.0 * std::numbers::pi * variance);
}

double GaussianDensity::stddev() const { return std::sqrt(variance); }

void KernelSpec::validate() const {
  if (!(nu >= 0.0)) throw std::invalid_argument("KernelSpec: nu must be >= 0");
  if (!(dt > 0.0)) throw std::invalid_argument("KernelSpec: dt must be positive");
  if (!(nu * dt > 0.0)) {
    throw std::domain_error("KernelSpec: nu*dt == 0, use the delta-limit (identity) path");
  }
}

GaussianDensity heat_kernel(const KernelSpec& spec, double x) {
  spec.validate();
  return {x, 2.0 * spec.nu * spec.dt};
}

double heat_kernel(const KernelSpec& spec, double x, double x_prime) {
  return heat_kernel(spec, x)(x_prime);
}

GaussianDensity drift_kernel(const KernelSpec& spec, double x) {
  spec.validate();
  return {x - spec.drift_at_solution_point * spec.dt, 2.0 * spec.nu * spec.dt};
}

double drift_kernel(const KernelSpec& spec, double x, double x_prime) {
  return drift_kernel(spec, x)(x_prime);
}

GaussianDensity ou_kernel(const StrainRealization& strain, double nu, double x0, double t) {
  if (!(t > 0.0)) throw std::domain_error("ou_kernel: t must be positive");
  if (!(nu > 0.0)) throw std::domain_error("ou_kernel: nu must be positive");
  return {x0 * std::exp(-strain_h(strain, t)), 2.0 * nu * strain_p(strain, t)};
}

double ou_kernel(const StrainRealization& strain, double nu, double x, double x0, double t) {
  return ou_kernel(strain, nu, x0, t)(x);
}

ConsistencyReport check_consistency(const DensityFamily& kernel, double x,
                                    const std::vector<double>& dt_sequence, const Grid1D& grid,
                                    double expected_drift, double expected_diffusion) {
  if (dt_sequence.size() < 2) {
    throw std::invalid_argument("check_consistency: need at least two time increments");
  }
  ConsistencyReport report;
  std::vector<double> g(grid.size()), m1(grid.size()), m2(grid.size());
  for (double dt : dt_sequence) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double y = grid.x(i);
      g[i] = kernel(x, dt, y);
      m1[i] = (y - x) * g[i];
      m2[i] = (y - x) * (y - x) * g[i];
    }
    MomentEstimate e;
    e.dt = dt;
    e.mass = trapezoid(g, grid.dx());
    e.drift = trapezoid(m1, grid.dx()) / dt;
    e.diffusion = trapezoid(m2, grid.dx()) / dt;
    if (!std::isfinite(e.mass) || std::abs(e.mass - 1.0) > 1e-6) report.normalizable = false;
    report.estimates.push_back(e);
  }
  const auto& coarse = report.estimates[report.estimates.size() - 2];
  const auto& fine = report.estimates.back();
  const double ratio = coarse.dt / fine.dt;
  const double drift_coarse = std::abs(coarse.drift - expected_drift);
  const double drift_fine = std::abs(fine.drift - expected_drift);
  const double diff_coarse = std::abs(coarse.diffusion - expected_diffusion);
  const double diff_fine = std::abs(fine.diffusion - expected_diffusion);
  report.drift_error = drift_fine;
  report.diffusion_error = diff_fine;
  report.drift_order = observed_order(drift_coarse, drift_fine, ratio);
  report.diffusion_order = observed_order(diff_coarse, diff_fine, ratio);
  return report;
}

ChapmanKolmogorovResult chapman_kolmogorov_check(const PropagatorFamily& kernel, double x0,
                                                 double t1, double t2, const Grid1D& grid) {
  if (!(t1 > 0.0 && t2 > 0.0)) {
    throw std::domain_error("chapman_kolmogorov_check: times must be positive");
  }
  const auto n = grid.size();
  const GaussianDensity first = kernel(x0, t1);
  std::vector<double> inner(n);
  for (std::size_t j = 0; j < n; ++j) inner[j] = first(grid.x(j));

  ChapmanKolmogorovResult out;
  out.tail_mass = std::abs(1.0 - trapezoid(inner, grid.dx()));
  out.truncated = out.tail_mass > 1e-12;

  // Second leg from each intermediate point y_j.
  std::vector<GaussianDensity> second(n);
  for (std::size_t j = 0; j < n; ++j) second[j] = kernel(grid.x(j), t2);
  const GaussianDensity direct = kernel(x0, t1 + t2);

  std::vector<double> integrand(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = grid.x(i);
    for (std::size_t j = 0; j < n; ++j) integrand[j] = second[j](x) * inner[j];
    const double composed = trapezoid(integrand, grid.dx());
    out.max_defect = std::max(out.max_defect, std::abs(composed - direct(x)));
  }
  return out;
}

double default_half_width(double nu, double t, double x0, double h) {
  return std::max(8.0 * std::sqrt(2.0 * nu * t), 8.0 * std::abs(x0) * std::exp(-h));
}

}  // namespace gfs
