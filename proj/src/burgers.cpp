#include "gfs/burgers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "gfs/parallel.hpp"

namespace gfs {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Gaussian weights beyond this many standard deviations are below 1e-31.
constexpr double kKernelReach = 12.0;
// Below one grid spacing of kernel width the trapezoid sum stops being
// spectrally accurate (relative error ~exp(-2 pi^2 sd^2 / dx^2)).
constexpr double kResolvedWidth = 1.0;

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Four-point Lagrange interpolation of samples defined on every integer index
// through `at(j)`.
template <typename At>
double cubic_interpolate(At&& at, double s) {
  const auto i = static_cast<std::ptrdiff_t>(std::floor(s));
  const double f = s - static_cast<double>(i);
  const double p0 = at(i - 1), p1 = at(i), p2 = at(i + 1), p3 = at(i + 2);
  return -p0 * f * (f - 1.0) * (f - 2.0) / 6.0 + p1 * (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0 -
         p2 * (f + 1.0) * f * (f - 2.0) / 2.0 + p3 * (f + 1.0) * f * (f - 1.0) / 6.0;
}

}  // namespace

void BurgersState::validate() const {
  if (!(nu > 0.0)) throw std::invalid_argument("BurgersState: nu must be positive");
  for (double v : u.values) {
    if (!std::isfinite(v)) throw std::invalid_argument("BurgersState: non-finite velocity");
  }
}

StepBounds estimate_scales(const BurgersState& state, double epsilon_max) {
  if (!(epsilon_max > 0.0 && epsilon_max < 1.0)) {
    throw std::invalid_argument("estimate_scales: epsilon_max must lie in (0, 1)");
  }
  const double umax = max_abs(state.u.values);
  const double gmax = max_abs(derivative4(state.u));
  StepBounds b;
  b.epsilon_max = epsilon_max;
  if (umax == 0.0 || gmax <= 1e-14 * umax / state.u.grid.dx()) {
    b.x_s = kInf;
    b.t_s = kInf;
    return b;
  }
  b.x_s = umax / gmax;
  b.t_s = b.x_s / umax;
  return b;
}

double admissible_dt(const StepBounds& bounds, double nu) {
  const double eps = bounds.epsilon_max;
  const double diffusive = nu > 0.0 ? eps * eps * bounds.x_s * bounds.x_s / nu : kInf;
  return std::min(diffusive, eps * bounds.t_s);
}

StepOutcome step_incremental(const BurgersState& state, double dt, const StepOptions& options) {
  state.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("step_incremental: dt must be positive");

  StepOutcome out{state, false, false};
  out.state.t = state.t + dt;
  out.exceeded_admissible_dt =
      dt > admissible_dt(estimate_scales(state, options.epsilon_max), state.nu) * (1.0 + 1e-12);

  const Grid1D& grid = state.u.grid;
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
  const double dx = grid.dx();
  const double variance = 2.0 * state.nu * dt;
  const double sd = std::sqrt(variance);
  const double norm = dx / std::sqrt(2.0 * std::numbers::pi * variance);
  const bool periodic = options.boundary == Boundary::kPeriodic;
  const auto& u = state.u.values;
  auto& next = out.state.u.values;

  // A kernel narrower than the grid spacing is not resolved by the trapezoid
  // rule; take its delta limit and interpolate u at the shifted center.
  if (sd < kResolvedWidth * dx) {
    out.degenerate_kernel = true;
    auto u_at = [&](std::ptrdiff_t j) {
      if (periodic) return u[static_cast<std::size_t>(((j % n) + n) % n)];
      return (j < 0 || j >= n) ? 0.0 : u[static_cast<std::size_t>(j)];
    };
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double shift = options.drift == KernelDrift::kFrozen ? u[i] * dt : 0.0;
      next[i] = cubic_interpolate(u_at, (grid.x(i) - shift - grid.x_min()) / dx);
    }
    return out;
  }

  parallel_for(grid.size(), options.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double shift = options.drift == KernelDrift::kFrozen ? u[i] * dt : 0.0;
      const double center = grid.x(i) - shift;
      const double s_center = (center - grid.x_min()) / dx;
      const auto lo = static_cast<std::ptrdiff_t>(std::floor(s_center - kKernelReach * sd / dx));
      const auto hi = static_cast<std::ptrdiff_t>(std::ceil(s_center + kKernelReach * sd / dx));
      double acc = 0.0;
      for (std::ptrdiff_t j = lo; j <= hi; ++j) {
        double w = 1.0;
        std::ptrdiff_t idx = j;
        if (periodic) {
          idx = ((j % n) + n) % n;
        } else {
          if (j < 0 || j >= n) continue;
          if (j == 0 || j == n - 1) w = 0.5;
        }
        const double d = (static_cast<double>(j) - s_center) * dx;
        acc += w * u[static_cast<std::size_t>(idx)] * std::exp(-d * d / (2.0 * variance));
      }
      next[i] = acc * norm;
    }
  });
  return out;
}

SolveReport solve_incremental(BurgersState state, double t_end, const StepOptions& options,
                              double dt_scale) {
  if (!(dt_scale > 0.0)) throw std::invalid_argument("solve_incremental: dt_scale must be positive");
  SolveReport report{state, 0, 0, kInf, 0.0};
  while (report.state.t < t_end * (1.0 - 1e-14)) {
    const double remaining = t_end - report.state.t;
    double dt =
        dt_scale * admissible_dt(estimate_scales(report.state, options.epsilon_max), state.nu);
    dt = std::min(dt, remaining);
    StepOutcome step = step_incremental(report.state, dt, options);
    report.warnings += step.exceeded_admissible_dt ? 1 : 0;
    report.state = std::move(step.state);
    report.min_dt = std::min(report.min_dt, dt);
    report.max_dt = std::max(report.max_dt, dt);
    ++report.steps;
  }
  report.state.t = std::max(report.state.t, t_end);
  return report;
}

ColeHopfSolution::ColeHopfSolution(ScalarFn potential, double nu, double max_speed)
    : potential_(std::move(potential)), nu_(nu), max_speed_(std::abs(max_speed)) {
  if (!(nu > 0.0)) throw std::invalid_argument("ColeHopfSolution: nu must be positive");
}

double ColeHopfSolution::velocity(double x, double t) const {
  if (!(t > 0.0)) throw std::domain_error("ColeHopfSolution::velocity requires t > 0");
  const double sd = std::sqrt(2.0 * nu_ * t);
  const double lo = x - max_speed_ * t - 14.0 * sd;
  const double hi = x + max_speed_ * t + 14.0 * sd;
  const auto panels =
      static_cast<std::size_t>(std::clamp(std::ceil((hi - lo) / (sd / 3.0)), 64.0, 20000.0));

  auto H = [&](double xp) { return potential_(xp) + (x - xp) * (x - xp) / (2.0 * t); };
  double h_min = std::numeric_limits<double>::infinity();
  const std::size_t probes = 4 * panels;
  for (std::size_t k = 0; k <= probes; ++k) {
    h_min = std::min(h_min, H(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(probes)));
  }
  auto weight = [&](double xp) { return std::exp(-(H(xp) - h_min) / (2.0 * nu_)); };
  const double num =
      integrate_panels([&](double xp) { return (x - xp) / t * weight(xp); }, lo, hi, panels);
  const double den = integrate_panels(weight, lo, hi, panels);
  return num / den;
}

ColeHopfSolution cole_hopf_from_velocity(ScalarFn u0, double nu, double max_speed) {
  auto potential = [u0 = std::move(u0)](double xp) { return integrate_adaptive(u0, 0.0, xp, 1e-13); };
  return ColeHopfSolution(potential, nu, max_speed);
}

double cole_hopf_exact(const Field& u0, double nu, double x, double t, Boundary boundary) {
  const Grid1D& g = u0.grid;
  const auto n = static_cast<std::ptrdiff_t>(g.size());
  const bool periodic = boundary == Boundary::kPeriodic;
  auto u_at = [&](std::ptrdiff_t j) {
    if (periodic) return u0.values[static_cast<std::size_t>(((j % n) + n) % n)];
    return (j < 0 || j >= n) ? 0.0 : u0.values[static_cast<std::size_t>(j)];
  };
  if (t == 0.0) return cubic_interpolate(u_at, (x - g.x_min()) / g.dx());
  if (!(t > 0.0)) throw std::domain_error("cole_hopf_exact requires t >= 0");

  // Running potential on the nodes; periodic fields carry the per-period
  // increment so the potential extends beyond one period.
  std::vector<double> phi;
  double period_increment = 0.0;
  if (periodic) {
    std::vector<double> ext(u0.values);
    ext.push_back(u0.values.front());
    Field closed(Grid1D(g.x_min(), g.x_min() + g.period(), g.size() + 1), ext);
    phi = cumulative_integral(closed, 0.0);
    period_increment = phi.back() - phi.front();
    phi.pop_back();
  } else {
    phi = cumulative_integral(u0, 0.0);
  }
  auto phi_at = [&](std::ptrdiff_t j) {
    if (periodic) {
      const std::ptrdiff_t wraps = (j >= 0) ? j / n : -((-j + n - 1) / n);
      return phi[static_cast<std::size_t>(j - wraps * n)] + static_cast<double>(wraps) * period_increment;
    }
    if (j < 0) return phi.front();
    if (j >= n) return phi.back();
    return phi[static_cast<std::size_t>(j)];
  };
  auto potential = [&](double xp) {
    const double s = (xp - g.x_min()) / g.dx();
    if (!periodic && (s <= 0.0 || s >= static_cast<double>(n - 1))) {
      return s <= 0.0 ? phi.front() : phi.back();
    }
    return cubic_interpolate(phi_at, s);
  };
  const ColeHopfSolution solution(potential, nu, max_abs(u0.values));
  return solution.velocity(x, t);
}

Field kpz_transform(const Field& in, double nu, TransformDirection direction, Boundary boundary) {
  if (!(nu > 0.0)) throw std::invalid_argument("kpz_transform: nu must be positive");
  Field out(in.grid);
  switch (direction) {
    case TransformDirection::kHeightToPhi:
      for (std::size_t i = 0; i < in.size(); ++i) out[i] = std::exp(-in[i] / (2.0 * nu));
      break;
    case TransformDirection::kPhiToHeight:
      for (std::size_t i = 0; i < in.size(); ++i) {
        if (!(in[i] > 0.0)) throw std::domain_error("kpz_transform: phi must be positive");
        out[i] = -2.0 * nu * std::log(in[i]);
      }
      break;
    case TransformDirection::kVelocityToPhi: {
      const auto h = cumulative_integral(in, 0.0);
      for (std::size_t i = 0; i < in.size(); ++i) out[i] = std::exp(-h[i] / (2.0 * nu));
      break;
    }
    case TransformDirection::kPhiToVelocity: {
      const Field h = kpz_transform(in, nu, TransformDirection::kPhiToHeight);
      out.values = derivative4(h, boundary);
      break;
    }
  }
  return out;
}

double kpz_residual(const Field& h_prev, const Field& h_next, double dt, double nu,
                    Boundary boundary) {
  if (!h_prev.grid.same_as(h_next.grid)) throw std::invalid_argument("kpz_residual: grid mismatch");
  if (!(dt > 0.0)) throw std::invalid_argument("kpz_residual: dt must be positive");
  Field mid(h_prev.grid);
  for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = 0.5 * (h_prev[i] + h_next[i]);
  const auto hx = derivative4(mid, boundary);
  const auto hxx = second_derivative2(mid, boundary);
  const std::size_t skip = boundary == Boundary::kPeriodic ? 0 : 2;
  double worst = 0.0;
  for (std::size_t i = skip; i + skip < mid.size(); ++i) {
    const double r = (h_next[i] - h_prev[i]) / dt + 0.5 * hx[i] * hx[i] - nu * hxx[i];
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

}  // namespace gfs
