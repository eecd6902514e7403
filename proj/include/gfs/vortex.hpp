#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gfs/grid.hpp"
#include "gfs/numerics.hpp"
#include "gfs/stats.hpp"
#include "gfs/strain.hpp"

namespace gfs {

/// Discrete vortex sheets of strength dv_i at x_i, evolving in the strain
/// field v = (-k x, 0, k z) with viscosity nu.
struct SheetSet {
  std::vector<double> positions;
  std::vector<double> strengths;
  double nu = 0.0;

  void validate() const;
  double total_strength() const;
};

struct SheetStats {
  double mean_position = 0.0;
  double spread = 0.0;  ///< variance (squared thickness)
  double strength = 0.0;
  double t = 0.0;
};

/// Sum of dv_i * G_ou(x; x_i e^{-h}, 2 nu p). Requires t > 0 and nu > 0.
double sheet_field(const SheetSet& sheets, const StrainRealization& strain, double x, double t);
Field sheet_field(const SheetSet& sheets, const StrainRealization& strain, const Grid1D& grid, double t);

/// Mean x0 e^{-h(t)} and spread 2 nu p(t) for one sheet in one realization.
SheetStats sheet_stats_deterministic(double x0, double strength, double nu,
                                     const StrainRealization& strain, double t);

/// <chi> = x0 e^{-k0 t} exp(I(t)), I(t) = int_0^t (t-s) R(|s|) ds.
double ensemble_mean_position(double x0, const StrainModel& model, double t);

enum class SpreadMode { kViscous, kInviscid };

/// How <p(t)> is evaluated for the viscous spread.
enum class SpreadClosure {
  /// Treats exp(-2 int_0^t k') and int_0^t e^{2 k0 t'} exp(2 int_0^t' k') dt'
  /// as independent: 2 nu e^{-2k0 t} e^{4 I(t)} int_0^t e^{2k0 t'} e^{4 I(t')} dt'.
  kIndependence,
  /// Exact Gaussian average: 2 nu int_0^t e^{-2 k0 u} e^{4 I(u)} du.
  kExact,
};

/// Ensemble sheet spread. Viscous: 2 nu <p(t)> under the chosen closure.
/// Inviscid: x0^2 e^{-2k0 t} (e^{4I} - e^{2I}).
double ensemble_spread(double x0, const StrainModel& model, double nu, double t, SpreadMode mode,
                       SpreadClosure closure = SpreadClosure::kIndependence);

/// Closed-form delta-correlated viscous spread with full endpoint weight:
/// nu/(k0 + 2 k~) e^{8 k~ t} (1 - e^{-(2k0 + 4k~) t}).
double delta_spread_full_weight(double k0, double k_tilde, double nu, double t);

/// <Omega> for Couette data Omega_0: Omega_0 <e^{h(t)}> = Omega_0 e^{k0 t} e^{I(t)}.
double ensemble_couette_vorticity(double omega0, const StrainModel& model, double t);

/// One sampled k(t) as step values on [0, t_end]. The delta model draws
/// independent N(0, k~/dt) per step; the exponential model advances the
/// exact AR(1) recursion from a stationary start and stores the average of
/// the two end-point values of each step.
PiecewiseStrain strain_path_sample(const StrainModel& model, double t_end, double dt,
                                   std::uint64_t seed, std::uint64_t path = 0);

/// chi(t) = x0 e^{-h(t)}
double inviscid_sheet_position(double x0, const StrainRealization& strain, double t);

/// Initial streamwise velocity v0 supported on [x_min, x_max]; derivatives
/// are fourth-order centered differences with spacing dx.
struct VelocityProfile {
  ScalarFn v;
  double x_min = -1.0;
  double x_max = 1.0;
  double dx = 1e-3;

  /// dv0/dx; throws std::out_of_range outside the support.
  double vorticity(double x) const;
};

/// e^{h(t)} v0'(x e^{h(t)})
double inviscid_continuous_vorticity(const VelocityProfile& v0, const StrainRealization& strain,
                                     double x, double t);

/// Strain-path Monte Carlo of the single-sheet ensemble statistics.
struct StrainEnsemble {
  Estimate mean_position;      ///< x0 <e^{-h}>
  Estimate inviscid_spread;    ///< Var(x0 e^{-h})
  Estimate viscous_spread;     ///< 2 nu <p>
  Estimate independence_spread;  ///< the independence closure evaluated on the same paths
  Estimate stretch;            ///< <e^{h}>
  Estimate lognormal;          ///< <exp(-int k')>
  Estimate fluctuation_variance;  ///< Var(int k')
  std::size_t n_paths = 0;
  double dt = 0.0;
};

struct StrainMcParams {
  std::size_t n_paths = 100000;
  double dt = 1e-3;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

StrainEnsemble strain_ensemble(const StrainModel& model, double x0, double nu, double t,
                               const StrainMcParams& mc);

struct FkVortexParams {
  std::size_t n_strain = 1;     ///< outer strain realizations (1 if non-random)
  std::size_t n_inner = 20000;  ///< diffusion paths per realization
  double dt = 1e-3;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

struct FkVortexResult {
  Estimate value;
  /// Mean within-realization standard error of E[Omega_0(chi(0))] e^{h}.
  double inner_std_error = 0.0;
};

/// <e^{h(t)} E[Omega_0(chi(0))]> where chi runs backward from (x, t) along
/// d chi = k chi d tau + sqrt(2 nu) dw. Outer average over strain paths,
/// inner average over diffusion paths. nu = 0 evaluates the exact
/// characteristic x e^{h(t)} per realization.
FkVortexResult feynman_kac_vorticity(const VelocityProfile& v0, const StrainModel& model, double nu,
                                     double x, double t, const FkVortexParams& params);

/// Method-of-lines reference for Omega_t - k x Omega_x = k Omega + nu Omega_xx:
/// fourth-order centered differences, classical RK4 in time, zero-gradient
/// edges. The grid must extend far enough that edge errors do not reach the
/// region of interest.
Field solve_vorticity_pde(const Field& omega0, const StrainRealization& strain, double nu,
                          double t_end, double dt);

}  // namespace gfs
