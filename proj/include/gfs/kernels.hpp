#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "gfs/grid.hpp"
#include "gfs/strain.hpp"

namespace gfs {

/// Below this ratio nu*dt / dx^2 a kernel is treated as a delta function and
/// callers substitute the identity map.
inline constexpr double kDegenerateRatio = 1e-14;

/// Gaussian transition density in the target coordinate.
struct GaussianDensity {
  double mean = 0.0;
  double variance = 0.0;

  double operator()(double y) const;
  double stddev() const;
  bool degenerate(double dx) const { return variance < 2.0 * kDegenerateRatio * dx * dx; }
};

/// Incremental kernel parameters. `drift_at_solution_point` is the forward
/// velocity u(x, t_j) frozen over the step.
struct KernelSpec {
  double nu = 0.0;
  double drift_at_solution_point = 0.0;
  double dt = 0.0;

  void validate() const;
};

/// Heat kernel as a density in x': mean x, variance 2 nu dt. The drift field
/// of the spec is ignored. Throws std::domain_error when nu*dt == 0.
GaussianDensity heat_kernel(const KernelSpec& spec, double x);
double heat_kernel(const KernelSpec& spec, double x, double x_prime);

/// Frozen-drift kernel: mean x - u dt, variance 2 nu dt.
GaussianDensity drift_kernel(const KernelSpec& spec, double x);
double drift_kernel(const KernelSpec& spec, double x, double x_prime);

/// Single-sheet (Ornstein-Uhlenbeck) transition density in x for a start at
/// x0: mean x0 exp(-h(t)), variance 2 nu p(t).
GaussianDensity ou_kernel(const StrainRealization& strain, double nu, double x0, double t);
double ou_kernel(const StrainRealization& strain, double nu, double x, double x0, double t);

/// A family of transition densities: (probe point, time increment) -> density
/// over the target coordinate.
using DensityFamily = std::function<double(double x, double dt, double y)>;

struct MomentEstimate {
  double dt = 0.0;
  double mass = 0.0;
  double drift = 0.0;      ///< first-moment rate
  double diffusion = 0.0;  ///< second-moment rate
};

struct ConsistencyReport {
  bool normalizable = true;
  std::vector<MomentEstimate> estimates;
  double drift_order = 0.0;      ///< observed order; +inf when errors sit at round-off
  double diffusion_order = 0.0;
  double drift_error = 0.0;      ///< error at the smallest dt
  double diffusion_error = 0.0;
};

/// Recovers the local drift and diffusion from a transition density by the
/// moment limits int (y-x) G dy / dt and int (y-x)^2 G dy / dt, evaluated with
/// the trapezoid rule on `grid`. Errors and orders are measured against the
/// supplied expected values.
ConsistencyReport check_consistency(const DensityFamily& kernel, double x,
                                    const std::vector<double>& dt_sequence, const Grid1D& grid,
                                    double expected_drift, double expected_diffusion);

/// Time-homogeneous family (x0, t) -> density over the target coordinate.
using PropagatorFamily = std::function<GaussianDensity(double x0, double t)>;

struct ChapmanKolmogorovResult {
  double max_defect = 0.0;
  double tail_mass = 0.0;
  bool truncated = false;  ///< grid misses more than 1e-12 of the intermediate mass
};

/// Composes G(x, t2 | y) G(y, t1 | x0) over y on `grid` and compares with
/// G(x, t1 + t2 | x0) at every grid point x.
ChapmanKolmogorovResult chapman_kolmogorov_check(const PropagatorFamily& kernel, double x0,
                                                 double t1, double t2, const Grid1D& grid);

/// Default half-width for kernel grids: max(8 sqrt(2 nu t), 8 |x0| e^{-h}).
double default_half_width(double nu, double t, double x0, double h = 0.0);

}  // namespace gfs
