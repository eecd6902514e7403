#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "gfs/grid.hpp"

namespace gfs {

/// Envelope of i eta_t + eta_xx + kappa |eta|^2 eta = 0 on a periodic grid.
///
/// `frame_speed` adds pure advection eta_t + U eta_x to the linear part
/// (a moving frame); it is unitary for real U.
struct WaveState {
  ComplexField eta;
  double t = 0.0;
  double kappa = 0.0;
  double frame_speed = 0.0;
};

/// Exact free propagator for dt: each Fourier mode k gains exp(-i (k^2 + U k) dt).
WaveState linear_step(const WaveState& state, double dt);

/// Exact pointwise phase rotation eta -> eta exp(i kappa |eta|^2 dt).
WaveState nonlinear_step(const WaveState& state, double dt);

struct PropagateResult {
  WaveState state;
  std::size_t steps = 0;
  /// dt * max(kappa |eta|^2, k_max^2) exceeded 0.1 at the start.
  bool phase_warning = false;
};

/// Strang splitting: half linear, full nonlinear, half linear per step. The
/// step is shrunk so that an integer number of steps spans T.
PropagateResult propagate(const WaveState& state, double T, double dt);

/// Soliton parameters in the dimensionless variables of the matched
/// expansion, plus the dimensional amplitude and length scales.
struct SolitonParams {
  double beta = 1.0;
  double kappa_tilde = 1.0;
  double delta_x = 1.0;  ///< dimensionless step displacement
  double speed = 0.0;
  double amplitude_scale = 1.0;
  double length_scale = 1.0;

  void validate() const;
};

/// h_s (2 beta / kappa)^{1/2} sech((beta / dX^2)^{1/2} X / x_s).
double soliton_envelope(const SolitonParams& params, double X);

/// Stationary soliton sqrt(2 beta / kappa) sech(sqrt(beta) x) e^{i beta t}.
ComplexField stationary_soliton(const Grid1D& grid, double beta, double kappa, double t = 0.0);

/// Max |i eta_t + eta_xx + kappa |eta|^2 eta| over the interior slices, with
/// centered differences (periodic in x). Needs at least three slices.
double nls_residual(std::span<const ComplexField> slices, double dt, double kappa);

/// sum |eta|^2 dx
double wave_norm(const ComplexField& eta);

/// Im sum conj(eta) eta_x dx with a spectral derivative.
double wave_momentum(const ComplexField& eta);

/// Unnormalized discrete Fourier coefficients (FFTW forward transform).
std::vector<std::complex<double>> fourier_coefficients(const ComplexField& eta);

}  // namespace gfs
