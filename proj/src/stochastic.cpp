#include "gfs/stochastic.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "gfs/parallel.hpp"
#include "gfs/rng.hpp"

namespace gfs {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct AffineDrift {
  double offset = 0.0;  // b(x) = offset + slope * x
  double slope = 0.0;
};

// Drifts used by the bridge checks must be affine and autonomous so that the
// exact moments are available for the compatibility test.
AffineDrift affine_drift(const SdeSpec& spec) {
  const double s0 = spec.s_start;
  const double s1 = spec.s_end;
  const double bm = spec.drift(-1.0, s0);
  const double b0 = spec.drift(0.0, s0);
  const double bp = spec.drift(1.0, s0);
  const double scale = std::max({1.0, std::abs(bm), std::abs(b0), std::abs(bp)});
  if (std::abs((bp - b0) - (b0 - bm)) > 1e-9 * scale ||
      std::abs(spec.drift(0.5, s1) - 0.5 * (b0 + bp)) > 1e-9 * scale) {
    throw std::invalid_argument("bridge check: drift must be affine and time-independent");
  }
  return {b0, 0.5 * (bp - bm)};
}

GaussianDensity affine_moments(const SdeSpec& spec, const AffineDrift& b, double t) {
  const double c = b.slope;
  if (std::abs(c * t) < 1e-12) {
    return {spec.x_start + b.offset * t, 2.0 * spec.nu * t};
  }
  const double g = std::expm1(c * t);
  const double mean = spec.x_start * std::exp(c * t) + b.offset * g / c;
  const double var = 2.0 * spec.nu * std::expm1(2.0 * c * t) / (2.0 * c);
  return {mean, var};
}

void require_compatible(const GaussianDensity& expected, const GaussianDensity& kernel) {
  const double mtol = 1e-6 * std::max(1.0, std::abs(expected.mean));
  const double vtol = 1e-6 * std::max(1e-12, expected.variance);
  if (std::abs(expected.mean - kernel.mean) > mtol ||
      std::abs(expected.variance - kernel.variance) > vtol) {
    throw std::invalid_argument("bridge check: kernel and SDE describe different processes");
  }
}

double gaussian_expectation(const ScalarFn& f, const GaussianDensity& k) {
  const double sd = k.stddev();
  if (sd < 1e-12 * std::max(1.0, std::abs(k.mean))) return f(k.mean);
  auto integrand = [&](double y) { return f(y) * k(y); };
  return integrate_panels(integrand, k.mean - 12.0 * sd, k.mean + 12.0 * sd, 96);
}

}  // namespace

void SdeSpec::validate() const {
  if (!drift) throw std::invalid_argument("SdeSpec: drift is not set");
  if (!(nu >= 0.0)) throw std::invalid_argument("SdeSpec: nu must be >= 0");
  if (!(s_end > s_start)) throw std::invalid_argument("SdeSpec: s_end must exceed s_start");
}

std::size_t PathEnsemble::absorbed() const {
  std::size_t n = 0;
  for (double t : exit_times) n += std::isfinite(t) ? 1 : 0;
  return n;
}

PathEnsemble sample_paths(const SdeSpec& spec, const McParams& mc, const Domain& domain,
                          const PathFunctional& forcing) {
  spec.validate();
  if (mc.n_paths < 1) throw std::invalid_argument("sample_paths: n_paths must be >= 1");
  if (!(mc.dt > 0.0)) throw std::invalid_argument("sample_paths: dt must be positive");
  const double horizon = spec.horizon();
  if (mc.dt > horizon * (1.0 + 1e-12)) {
    throw std::invalid_argument("sample_paths: dt exceeds the simulation horizon");
  }
  const auto n_steps = static_cast<std::size_t>(std::ceil(horizon / mc.dt - 1e-9));
  const double dt = horizon / static_cast<double>(n_steps);
  const double noise = std::sqrt(2.0 * spec.nu * dt);

  const HalfLine* wall = std::get_if<HalfLine>(&domain);
  if (wall && spec.x_start == wall->x_wall) {
    throw std::invalid_argument("sample_paths: path starts on the absorbing wall");
  }
  const double side = wall ? (spec.x_start > wall->x_wall ? 1.0 : -1.0) : 0.0;

  PathEnsemble out;
  out.n_paths = mc.n_paths;
  out.seed = mc.seed;
  out.dt = dt;
  out.n_steps = n_steps;
  out.terminal_values.assign(mc.n_paths, 0.0);
  out.exit_times.assign(mc.n_paths, kInf);
  out.functional_sums.assign(mc.n_paths, 0.0);

  parallel_for(mc.n_paths, mc.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      Philox4x32 rng(mc.seed, stream_id(p));
      double x = spec.x_start;
      double s = spec.s_start;
      double fsum = 0.0;
      double f_prev = forcing ? forcing(x, s) : 0.0;
      double exit = kInf;
      for (std::size_t n = 0; n < n_steps; ++n) {
        const double b = spec.drift(x, s);
        if (!std::isfinite(b)) {
          std::ostringstream msg;
          msg << "sample_paths: drift returned " << b << " at path " << p << ", step " << n
              << ", x=" << x << ", s=" << s;
          throw std::runtime_error(msg.str());
        }
        const double x_next = x + b * dt + noise * rng.normal();
        const double s_next = spec.s_start + static_cast<double>(n + 1) * dt;
        if (wall) {
          const double a = side * (x - wall->x_wall);
          const double c = side * (x_next - wall->x_wall);
          bool hit = c <= 0.0;
          double frac = hit ? a / (a - c) : 0.0;
          if (!hit && wall->bridge_crossing && spec.nu > 0.0) {
            const double u = rng.uniform();
            if (u < std::exp(-a * c / (spec.nu * dt))) {
              hit = true;
              frac = 0.5;
            }
          }
          if (hit) {
            exit = s + frac * dt;
            if (forcing) {
              const double f_wall = forcing(wall->x_wall, exit);
              fsum += 0.5 * (f_prev + f_wall) * frac * dt;
            }
            x = wall->x_wall;
            s = exit;
            break;
          }
        }
        if (forcing) {
          const double f_next = forcing(x_next, s_next);
          fsum += 0.5 * (f_prev + f_next) * dt;
          f_prev = f_next;
        }
        x = x_next;
        s = s_next;
      }
      out.terminal_values[p] = x;
      out.exit_times[p] = exit;
      out.functional_sums[p] = fsum;
    }
  });
  return out;
}

Estimate feynman_kac_estimate(const SdeSpec& spec, const FeynmanKacTerms& terms, const McParams& mc,
                              const Domain& domain) {
  const PathEnsemble paths = sample_paths(spec, mc, domain, terms.forcing);
  std::vector<double> values(paths.n_paths, 0.0);
  for (std::size_t p = 0; p < paths.n_paths; ++p) {
    double v = paths.functional_sums[p];
    if (std::isfinite(paths.exit_times[p])) {
      if (terms.boundary) v += terms.boundary(paths.exit_times[p]);
    } else if (terms.initial) {
      v += terms.initial(paths.terminal_values[p]);
    }
    values[p] = v;
  }
  const SampleSummary s = summarize(values);
  return {terms.weight * s.mean, std::abs(terms.weight) * s.std_error};
}

double BridgeResult::defect() const { return std::abs(mc_value - quadrature); }

double BridgeResult::relative_defect() const {
  return defect() / std::max(std::abs(quadrature), 1e-300);
}

double BridgeResult::defect_in_std_errors() const {
  if (mc_std_error > 0.0) return defect() / mc_std_error;
  return defect() <= 1e-10 * std::max(1.0, std::abs(quadrature)) ? 0.0 : kInf;
}

bool BridgeResult::passes(double n_std_errors) const {
  return defect() <= n_std_errors * mc_std_error + 1e-10 * std::max(1.0, std::abs(quadrature));
}

BridgeResult bridge_check_initial(const ScalarFn& phi, const GaussianDensity& kernel,
                                  const SdeSpec& spec, const McParams& mc) {
  spec.validate();
  const AffineDrift b = affine_drift(spec);
  require_compatible(affine_moments(spec, b, spec.horizon()), kernel);

  FeynmanKacTerms terms;
  terms.initial = phi;
  const Estimate est = feynman_kac_estimate(spec, terms, mc);
  return {est.value, est.std_error, gaussian_expectation(phi, kernel)};
}

BridgeResult bridge_check_forcing(const PathFunctional& f, const KernelInTime& kernel,
                                  const SdeSpec& spec, const McParams& mc) {
  spec.validate();
  const AffineDrift b = affine_drift(spec);
  const double t = spec.horizon();
  require_compatible(affine_moments(spec, b, t), kernel(t));
  require_compatible(affine_moments(spec, b, 0.5 * t), kernel(0.5 * t));

  FeynmanKacTerms terms;
  terms.forcing = f;
  const Estimate est = feynman_kac_estimate(spec, terms, mc);

  auto slice = [&](double elapsed) {
    const double s = spec.s_start + elapsed;
    if (elapsed <= 0.0) return f(spec.x_start, s);
    return gaussian_expectation([&](double y) { return f(y, s); }, kernel(elapsed));
  };
  const double quad = integrate_adaptive(slice, 0.0, t, 1e-10);
  return {est.value, est.std_error, quad};
}

double half_line_density(double nu, double x_start, double x_wall, double elapsed, double y) {
  const GaussianDensity direct{x_start, 2.0 * nu * elapsed};
  const GaussianDensity image{2.0 * x_wall - x_start, 2.0 * nu * elapsed};
  return direct(y) - image(y);
}

double half_line_exit_flux(double nu, double x_start, double x_wall, double elapsed) {
  if (elapsed <= 0.0) return 0.0;
  const double var = 2.0 * nu * elapsed;
  const GaussianDensity direct{x_start, var};
  const GaussianDensity image{2.0 * x_wall - x_start, var};
  // dG/dy at the wall from both Gaussians.
  const double grad = -(x_wall - direct.mean) / var * direct(x_wall) +
                      (x_wall - image.mean) / var * image(x_wall);
  const double outward = x_start > x_wall ? -1.0 : 1.0;
  return -nu * grad * outward;
}

BridgeResult bridge_check_boundary(const ScalarFn& g, const SdeSpec& spec, double x_wall,
                                   const McParams& mc) {
  spec.validate();
  for (double x : {-1.0, 0.0, 1.0, spec.x_start}) {
    if (spec.drift(x, spec.s_start) != 0.0) {
      throw std::invalid_argument(
          "bridge_check_boundary: only zero drift is supported (image-method kernel)");
    }
  }
  if (!(spec.nu > 0.0)) throw std::invalid_argument("bridge_check_boundary: nu must be positive");

  FeynmanKacTerms terms;
  terms.boundary = g;
  const Estimate est =
      feynman_kac_estimate(spec, terms, mc, HalfLine{x_wall, /*bridge_crossing=*/true});

  auto integrand = [&](double elapsed) {
    return g(spec.s_start + elapsed) * half_line_exit_flux(spec.nu, spec.x_start, x_wall, elapsed);
  };
  const double quad = integrate_adaptive(integrand, 0.0, spec.horizon(), 1e-11);
  return {est.value, est.std_error, quad};
}

}  // namespace gfs
