#pragma once

#include <cstddef>

#include "gfs/grid.hpp"
#include "gfs/numerics.hpp"

namespace gfs {

/// Velocity field of u_t + u u_x - nu u_xx = 0 at time t.
struct BurgersState {
  Field u;
  double t = 0.0;
  double nu = 0.0;

  void validate() const;
};

/// Drift-field scales bounding the incremental step.
struct StepBounds {
  double x_s = 0.0;
  double t_s = 0.0;
  double epsilon_max = 0.05;
};

/// x_s = max|u| / max|u_x|, t_s = x_s / max|u|. Constant (or zero) fields
/// give infinite scales.
StepBounds estimate_scales(const BurgersState& state, double epsilon_max = 0.05);

/// min(eps^2 x_s^2 / nu, eps t_s): keeps sqrt(nu dt)/x_s and dt/t_s below eps.
double admissible_dt(const StepBounds& bounds, double nu);

/// Which drift enters the incremental kernel.
enum class KernelDrift { kFrozen, kNone };

struct StepOptions {
  Boundary boundary = Boundary::kZero;
  KernelDrift drift = KernelDrift::kFrozen;
  unsigned threads = 1;
  double epsilon_max = 0.05;
};

struct StepOutcome {
  BurgersState state;
  bool exceeded_admissible_dt = false;
  /// Kernel narrower than dx: the step fell back to interpolating u at the
  /// shifted center (the delta-kernel limit).
  bool degenerate_kernel = false;
};

/// One incremental Green's-function step:
///   u(x, t+dt) = int u(x', t) G(x'; x - u(x,t) dt, 2 nu dt) dx'
/// evaluated with the grid trapezoid rule.
StepOutcome step_incremental(const BurgersState& state, double dt, const StepOptions& options = {});

struct SolveReport {
  BurgersState state;
  std::size_t steps = 0;
  std::size_t warnings = 0;
  double min_dt = 0.0;
  double max_dt = 0.0;
};

/// Marches to t_end with dt = dt_scale * admissible_dt re-estimated every step.
SolveReport solve_incremental(BurgersState state, double t_end, const StepOptions& options = {},
                              double dt_scale = 1.0);

/// Exact solution through the Cole-Hopf quadratures
///   v = int (x-x')/t e^{-H/2nu} dx' / int e^{-H/2nu} dx',
///   H = Phi(x') + (x-x')^2 / (2t),  Phi(x') = int_0^{x'} u0.
/// Exponentials are evaluated relative to min H, which the ratio ignores.
class ColeHopfSolution {
 public:
  /// `potential` is Phi; `max_speed` bounds |u0| and sizes the window.
  ColeHopfSolution(ScalarFn potential, double nu, double max_speed);

  double velocity(double x, double t) const;
  double nu() const { return nu_; }

 private:
  ScalarFn potential_;
  double nu_;
  double max_speed_;
};

/// Builds Phi from u0 by adaptive quadrature from 0.
ColeHopfSolution cole_hopf_from_velocity(ScalarFn u0, double nu, double max_speed);

/// Field form: Phi from the sampled u0 (fourth-order running integral from
/// x = 0, cubic interpolation between nodes). Outside the grid u0 is zero or
/// periodically extended. t == 0 returns u0(x).
double cole_hopf_exact(const Field& u0, double nu, double x, double t,
                       Boundary boundary = Boundary::kZero);

enum class TransformDirection {
  kHeightToPhi,    ///< phi = exp(-h / 2nu)
  kPhiToHeight,    ///< h = -2nu ln phi
  kVelocityToPhi,  ///< phi = exp(-int_0^x v / 2nu)
  kPhiToVelocity,  ///< v = d/dx (-2nu ln phi)
};

/// Cole-Hopf transforms between KPZ heights, Burgers velocities and the
/// diffusing potential. Throws std::domain_error for phi <= 0.
Field kpz_transform(const Field& in, double nu, TransformDirection direction,
                    Boundary boundary = Boundary::kZero);

/// max |h_t + h_x^2 / 2 - nu h_xx| between two slices dt apart, with the
/// spatial terms taken on the slice average (centered x-differences).
double kpz_residual(const Field& h_prev, const Field& h_next, double dt, double nu,
                    Boundary boundary = Boundary::kZero);

}  // namespace gfs
