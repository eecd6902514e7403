#include "gfs/nls.hpp"

#include <fftw3.h>

#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "gfs/numerics.hpp"

namespace gfs {
namespace {

using cplx = std::complex<double>;

// FFTW planning is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

/// In-place forward/backward transform pair on an owned buffer.
class SpectralBuffer {
 public:
  explicit SpectralBuffer(std::size_t n) : n_(n) {
    data_ = reinterpret_cast<cplx*>(fftw_malloc(sizeof(fftw_complex) * n));
    if (!data_) throw std::bad_alloc();
    auto* raw = reinterpret_cast<fftw_complex*>(data_);
    std::lock_guard lock(planner_mutex());
    forward_ = fftw_plan_dft_1d(static_cast<int>(n), raw, raw, FFTW_FORWARD, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_1d(static_cast<int>(n), raw, raw, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  SpectralBuffer(const SpectralBuffer&) = delete;
  SpectralBuffer& operator=(const SpectralBuffer&) = delete;
  ~SpectralBuffer() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
    fftw_free(data_);
  }

  cplx* data() { return data_; }
  std::size_t size() const { return n_; }
  void forward() { fftw_execute(forward_); }
  /// Backward transform including the 1/n normalization.
  void backward() {
    fftw_execute(backward_);
    const double inv = 1.0 / static_cast<double>(n_);
    for (std::size_t i = 0; i < n_; ++i) data_[i] *= inv;
  }

 private:
  std::size_t n_;
  cplx* data_ = nullptr;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

// Angular wavenumber of FFT bin m on a grid of period L.
double wavenumber(std::size_t m, std::size_t n, double period) {
  const auto mm = static_cast<double>(m);
  const auto nn = static_cast<double>(n);
  const double signed_m = m <= n / 2 ? mm : mm - nn;
  return 2.0 * std::numbers::pi * signed_m / period;
}

void apply_linear(SpectralBuffer& buf, const Grid1D& grid, double speed, double dt) {
  buf.forward();
  const std::size_t n = buf.size();
  for (std::size_t m = 0; m < n; ++m) {
    const double k = wavenumber(m, n, grid.period());
    buf.data()[m] *= std::polar(1.0, -(k * k + speed * k) * dt);
  }
  buf.backward();
}

void apply_nonlinear(cplx* eta, std::size_t n, double kappa, double dt) {
  for (std::size_t i = 0; i < n; ++i) eta[i] *= std::polar(1.0, kappa * std::norm(eta[i]) * dt);
}

}  // namespace

WaveState linear_step(const WaveState& state, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("linear_step: dt must be positive");
  SpectralBuffer buf(state.eta.size());
  std::copy(state.eta.values.begin(), state.eta.values.end(), buf.data());
  apply_linear(buf, state.eta.grid, state.frame_speed, dt);
  WaveState out = state;
  std::copy(buf.data(), buf.data() + buf.size(), out.eta.values.begin());
  out.t += dt;
  return out;
}

WaveState nonlinear_step(const WaveState& state, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("nonlinear_step: dt must be positive");
  WaveState out = state;
  apply_nonlinear(out.eta.values.data(), out.eta.size(), state.kappa, dt);
  out.t += dt;
  return out;
}

PropagateResult propagate(const WaveState& state, double T, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("propagate: dt must be positive");
  if (!(T >= 0.0)) throw std::invalid_argument("propagate: T must be nonnegative");
  PropagateResult result{state, 0, false};
  if (T == 0.0) return result;
  const auto steps = static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
  const double h = T / static_cast<double>(steps);

  double peak = 0.0;
  for (const auto& v : state.eta.values) peak = std::max(peak, std::norm(v));
  const double k_max = std::numbers::pi / state.eta.grid.dx();
  result.phase_warning = h * std::max(std::abs(state.kappa) * peak, k_max * k_max) > 0.1;

  SpectralBuffer buf(state.eta.size());
  std::copy(state.eta.values.begin(), state.eta.values.end(), buf.data());
  const Grid1D& grid = state.eta.grid;
  for (std::size_t s = 0; s < steps; ++s) {
    apply_linear(buf, grid, state.frame_speed, 0.5 * h);
    apply_nonlinear(buf.data(), buf.size(), state.kappa, h);
    apply_linear(buf, grid, state.frame_speed, 0.5 * h);
  }
  std::copy(buf.data(), buf.data() + buf.size(), result.state.eta.values.begin());
  result.state.t = state.t + T;
  result.steps = steps;
  return result;
}

void SolitonParams::validate() const {
  if (!(beta > 0.0)) throw std::invalid_argument("SolitonParams: beta must be positive");
  if (!(kappa_tilde > 0.0)) throw std::invalid_argument("SolitonParams: kappa must be positive");
  if (!(delta_x != 0.0)) throw std::invalid_argument("SolitonParams: delta_x must be nonzero");
  if (!(amplitude_scale > 0.0 && length_scale > 0.0)) {
    throw std::invalid_argument("SolitonParams: scales must be positive");
  }
}

double soliton_envelope(const SolitonParams& params, double X) {
  params.validate();
  const double xt = X / params.length_scale;
  const double arg = std::sqrt(params.beta / (params.delta_x * params.delta_x)) * xt;
  return params.amplitude_scale * std::sqrt(2.0 * params.beta / params.kappa_tilde) /
         std::cosh(arg);
}

ComplexField stationary_soliton(const Grid1D& grid, double beta, double kappa, double t) {
  if (!(beta > 0.0 && kappa > 0.0)) {
    throw std::invalid_argument("stationary_soliton: beta and kappa must be positive");
  }
  const double amp = std::sqrt(2.0 * beta / kappa);
  const double rb = std::sqrt(beta);
  const cplx phase = std::polar(1.0, beta * t);
  return ComplexField::sample(grid, [&](double x) { return amp / std::cosh(rb * x) * phase; });
}

double nls_residual(std::span<const ComplexField> slices, double dt, double kappa) {
  if (slices.size() < 3) throw std::invalid_argument("nls_residual: need at least three slices");
  if (!(dt > 0.0)) throw std::invalid_argument("nls_residual: dt must be positive");
  const Grid1D& grid = slices.front().grid;
  for (const auto& s : slices) {
    if (!s.grid.same_as(grid)) throw std::invalid_argument("nls_residual: grid mismatch");
  }
  const std::size_t n = grid.size();
  const double dx2 = grid.dx() * grid.dx();
  const cplx I(0.0, 1.0);
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < slices.size(); ++k) {
    const auto& prev = slices[k - 1].values;
    const auto& cur = slices[k].values;
    const auto& next = slices[k + 1].values;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx left = cur[(i + n - 1) % n];
      const cplx right = cur[(i + 1) % n];
      const cplx eta_t = (next[i] - prev[i]) / (2.0 * dt);
      const cplx eta_xx = (left - 2.0 * cur[i] + right) / dx2;
      const cplx r = I * eta_t + eta_xx + kappa * std::norm(cur[i]) * cur[i];
      worst = std::max(worst, std::abs(r));
    }
  }
  return worst;
}

double wave_norm(const ComplexField& eta) {
  std::vector<double> m(eta.size());
  for (std::size_t i = 0; i < eta.size(); ++i) m[i] = std::norm(eta[i]);
  return pairwise_sum(m) * eta.grid.dx();
}

double wave_momentum(const ComplexField& eta) {
  const std::size_t n = eta.size();
  SpectralBuffer buf(n);
  std::copy(eta.values.begin(), eta.values.end(), buf.data());
  buf.forward();
  for (std::size_t m = 0; m < n; ++m) {
    // Drop the unpaired Nyquist mode so the derivative stays real-consistent.
    const double k = (n % 2 == 0 && m == n / 2) ? 0.0 : wavenumber(m, n, eta.grid.period());
    buf.data()[m] *= cplx(0.0, k);
  }
  buf.backward();
  std::vector<double> terms(n);
  for (std::size_t i = 0; i < n; ++i) terms[i] = std::imag(std::conj(eta[i]) * buf.data()[i]);
  return pairwise_sum(terms) * eta.grid.dx();
}

std::vector<std::complex<double>> fourier_coefficients(const ComplexField& eta) {
  SpectralBuffer buf(eta.size());
  std::copy(eta.values.begin(), eta.values.end(), buf.data());
  buf.forward();
  return {buf.data(), buf.data() + buf.size()};
}

}  // namespace gfs
