#include "gfs/vortex.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gfs/kernels.hpp"
#include "gfs/parallel.hpp"
#include "gfs/rng.hpp"
#include "gfs/stochastic.hpp"

namespace gfs {
namespace {

std::size_t step_count(double t_end, double dt) {
  return static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
}

// Independent seed for the diffusion paths of outer realization i.
std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t i) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (i + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Product of two independent sample means with a delta-method standard error.
Estimate product(const SampleSummary& a, const SampleSummary& b, double scale) {
  const double se = std::hypot(a.mean * b.std_error, b.mean * a.std_error);
  return {scale * a.mean * b.mean, std::abs(scale) * se};
}

}  // namespace

void SheetSet::validate() const {
  if (positions.size() != strengths.size()) {
    throw std::invalid_argument("SheetSet: positions and strengths differ in length");
  }
  for (std::size_t i = 1; i < positions.size(); ++i) {
    if (!(positions[i] > positions[i - 1])) {
      throw std::invalid_argument("SheetSet: positions must be strictly increasing");
    }
  }
  for (double s : strengths) {
    if (!std::isfinite(s)) throw std::invalid_argument("SheetSet: strengths must be finite");
  }
  if (!(nu >= 0.0)) throw std::invalid_argument("SheetSet: nu must be >= 0");
}

double SheetSet::total_strength() const { return pairwise_sum(strengths); }

double sheet_field(const SheetSet& sheets, const StrainRealization& strain, double x, double t) {
  sheets.validate();
  if (!(t > 0.0)) throw std::domain_error("sheet_field requires t > 0");
  double sum = 0.0;
  for (std::size_t i = 0; i < sheets.positions.size(); ++i) {
    sum += sheets.strengths[i] * ou_kernel(strain, sheets.nu, x, sheets.positions[i], t);
  }
  return sum;
}

Field sheet_field(const SheetSet& sheets, const StrainRealization& strain, const Grid1D& grid,
                  double t) {
  sheets.validate();
  if (!(t > 0.0)) throw std::domain_error("sheet_field requires t > 0");
  Field out(grid);
  for (std::size_t i = 0; i < sheets.positions.size(); ++i) {
    const GaussianDensity g = ou_kernel(strain, sheets.nu, sheets.positions[i], t);
    for (std::size_t j = 0; j < grid.size(); ++j) out[j] += sheets.strengths[i] * g(grid.x(j));
  }
  return out;
}

SheetStats sheet_stats_deterministic(double x0, double strength, double nu,
                                     const StrainRealization& strain, double t) {
  if (!(nu >= 0.0)) throw std::invalid_argument("sheet_stats_deterministic: nu must be >= 0");
  SheetStats s;
  s.t = t;
  s.strength = strength;
  s.mean_position = x0 * std::exp(-strain_h(strain, t));
  s.spread = 2.0 * nu * strain_p(strain, t);
  return s;
}

double ensemble_mean_position(double x0, const StrainModel& model, double t) {
  model.validate();
  if (!(t >= 0.0)) throw std::domain_error("ensemble_mean_position requires t >= 0");
  return x0 * std::exp(-model.k0 * t + correlation_integral(model, t));
}

double delta_spread_full_weight(double k0, double k_tilde, double nu, double t) {
  const double rate = 2.0 * k0 + 4.0 * k_tilde;
  return nu / (k0 + 2.0 * k_tilde) * std::exp(8.0 * k_tilde * t) * -std::expm1(-rate * t);
}

double ensemble_spread(double x0, const StrainModel& model, double nu, double t, SpreadMode mode,
                       SpreadClosure closure) {
  model.validate();
  if (!(t >= 0.0)) throw std::domain_error("ensemble_spread requires t >= 0");
  const double k0 = model.k0;
  auto I = [&](double s) { return correlation_integral(model, s); };

  if (mode == SpreadMode::kInviscid) {
    const double i = I(t);
    // e^{4I} - e^{2I} = e^{2I} (e^{2I} - 1)
    return x0 * x0 * std::exp(-2.0 * k0 * t + 2.0 * i) * std::expm1(2.0 * i);
  }
  if (!(nu > 0.0)) throw std::invalid_argument("ensemble_spread: viscous mode needs nu > 0");
  if (t == 0.0) return 0.0;

  const auto* delta = std::get_if<DeltaCorrelated>(&model.fluctuation);
  if (closure == SpreadClosure::kExact) {
    // 2 nu int_0^t exp(-2 k0 u + 4 I(u)) du
    if (delta || !model.is_random()) {
      const double c = delta ? model.boundary_delta_weight * delta->k_tilde : 0.0;
      const double rate = 2.0 * k0 - 4.0 * c;
      if (std::abs(rate * t) < 1e-12) return 2.0 * nu * t;
      return 2.0 * nu * -std::expm1(-rate * t) / rate;
    }
    auto f = [&](double u) { return std::exp(-2.0 * k0 * u + 4.0 * I(u)); };
    return 2.0 * nu * integrate_adaptive(f, 0.0, t, 1e-13 / nu);
  }

  if (delta || !model.is_random()) {
    // I(u) = c u: 2 nu e^{(4c-2k0) t} (e^{(2k0+4c) t} - 1) / (2k0 + 4c)
    const double c = delta ? model.boundary_delta_weight * delta->k_tilde : 0.0;
    const double rate = 2.0 * k0 + 4.0 * c;
    return 2.0 * nu * std::exp((8.0 * c) * t) * -std::expm1(-rate * t) / rate;
  }
  auto g = [&](double u) { return std::exp(2.0 * k0 * (u - t) + 4.0 * I(u)); };
  return 2.0 * nu * std::exp(4.0 * I(t)) * integrate_adaptive(g, 0.0, t, 1e-13 / nu);
}

double ensemble_couette_vorticity(double omega0, const StrainModel& model, double t) {
  model.validate();
  if (!(t >= 0.0)) throw std::domain_error("ensemble_couette_vorticity requires t >= 0");
  return omega0 * std::exp(model.k0 * t + correlation_integral(model, t));
}

PiecewiseStrain strain_path_sample(const StrainModel& model, double t_end, double dt,
                                   std::uint64_t seed, std::uint64_t path) {
  model.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("strain_path_sample: dt must be positive");
  if (!(t_end > 0.0)) throw std::invalid_argument("strain_path_sample: t_end must be positive");
  const std::size_t n = step_count(t_end, dt);
  PiecewiseStrain out{t_end / static_cast<double>(n), std::vector<double>(n, model.k0)};
  Philox4x32 rng(seed, stream_id(path));

  if (const auto* d = std::get_if<DeltaCorrelated>(&model.fluctuation)) {
    const double sd = std::sqrt(d->k_tilde / out.dt);
    for (double& k : out.k) k += sd * rng.normal();
  } else if (const auto* e = std::get_if<ExponentialCorrelated>(&model.fluctuation)) {
    const double sigma = std::sqrt(e->variance);
    const double rho = std::exp(-out.dt / e->tau_c);
    const double innovation = sigma * std::sqrt(-std::expm1(-2.0 * out.dt / e->tau_c));
    double cur = sigma * rng.normal();
    for (double& k : out.k) {
      const double next = rho * cur + innovation * rng.normal();
      k += 0.5 * (cur + next);
      cur = next;
    }
  }
  return out;
}

double inviscid_sheet_position(double x0, const StrainRealization& strain, double t) {
  return x0 * std::exp(-strain_h(strain, t));
}

double VelocityProfile::vorticity(double x) const {
  if (!v) throw std::invalid_argument("VelocityProfile: v is not set");
  if (!(x >= x_min && x <= x_max)) {
    throw std::out_of_range("VelocityProfile: x = " + std::to_string(x) +
                            " lies outside the profile support");
  }
  return central_derivative4(v, x, dx);
}

double inviscid_continuous_vorticity(const VelocityProfile& v0, const StrainRealization& strain,
                                     double x, double t) {
  const double h = strain_h(strain, t);
  return std::exp(h) * v0.vorticity(x * std::exp(h));
}

StrainEnsemble strain_ensemble(const StrainModel& model, double x0, double nu, double t,
                               const StrainMcParams& mc) {
  model.validate();
  if (mc.n_paths < 2) throw std::invalid_argument("strain_ensemble: need at least two paths");
  if (!(t > 0.0)) throw std::invalid_argument("strain_ensemble: t must be positive");

  const std::size_t n = mc.n_paths;
  std::vector<double> pos(n), p2(n), stretch(n), logn(n), fluct(n), end_factor(n), integral(n);
  parallel_for(n, mc.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const PiecewiseStrain s = strain_path_sample(model, t, mc.dt, mc.seed, i);
      double h = 0.0;
      double p = 0.0;
      for (double k : s.k) {
        h += k * s.dt;
        const double a = 2.0 * k * s.dt;
        p = p * std::exp(-a) + (std::abs(a) < 1e-12 ? s.dt : -std::expm1(-a) / (2.0 * k));
      }
      const double j = h - model.k0 * t;
      pos[i] = x0 * std::exp(-h);
      p2[i] = 2.0 * nu * p;
      stretch[i] = std::exp(h);
      logn[i] = std::exp(-j);
      fluct[i] = j;
      end_factor[i] = std::exp(-2.0 * j);
      integral[i] = std::exp(2.0 * h) * p;  // int_0^t e^{2 h(t')} dt'
    }
  });

  StrainEnsemble out;
  out.n_paths = n;
  out.dt = t / static_cast<double>(step_count(t, mc.dt));
  const SampleSummary ps = summarize(pos);
  out.mean_position = {ps.mean, ps.std_error};
  out.inviscid_spread = {ps.variance, ps.variance_std_error};
  const SampleSummary vs = summarize(p2);
  out.viscous_spread = {vs.mean, vs.std_error};
  out.independence_spread =
      product(summarize(end_factor), summarize(integral), 2.0 * nu * std::exp(-2.0 * model.k0 * t));
  const SampleSummary st = summarize(stretch);
  out.stretch = {st.mean, st.std_error};
  const SampleSummary ln = summarize(logn);
  out.lognormal = {ln.mean, ln.std_error};
  const SampleSummary fv = summarize(fluct);
  out.fluctuation_variance = {fv.variance, fv.variance_std_error};
  return out;
}

FkVortexResult feynman_kac_vorticity(const VelocityProfile& v0, const StrainModel& model, double nu,
                                     double x, double t, const FkVortexParams& params) {
  model.validate();
  if (!(nu >= 0.0)) throw std::invalid_argument("feynman_kac_vorticity: nu must be >= 0");
  if (!(t > 0.0)) throw std::invalid_argument("feynman_kac_vorticity: t must be positive");
  if (params.n_strain < 1 || params.n_inner < 1) {
    throw std::invalid_argument("feynman_kac_vorticity: path counts must be >= 1");
  }
  const bool random = model.is_random();
  const std::size_t n_outer = random ? params.n_strain : 1;
  if (random && n_outer < 2) {
    throw std::invalid_argument("feynman_kac_vorticity: random strain needs n_strain >= 2");
  }
  const std::size_t n_inner = params.n_inner;
  const double h_step = t / static_cast<double>(step_count(t, params.dt));

  std::vector<double> values(n_outer), inner_se(n_outer);
  for (std::size_t i = 0; i < n_outer; ++i) {
    StrainRealization strain = ConstantStrain{model.k0};
    if (random) strain = strain_path_sample(model, t, params.dt, params.seed, i);
    const double h = strain_h(strain, t);
    if (nu == 0.0) {
      // Exact characteristic: chi(0) = x e^{h(t)}.
      values[i] = inviscid_continuous_vorticity(v0, strain, x, t);
      inner_se[i] = 0.0;
      continue;
    }

    // Backward clock tau = t - s; the drift is sampled at the middle of each
    // Euler step so it sees the strain value of the interval being crossed.
    SdeSpec spec;
    spec.nu = nu;
    spec.x_start = x;
    spec.s_start = 0.0;
    spec.s_end = t;
    spec.drift = [&strain, t, h_step](double chi, double tau) {
      const double s = std::max(0.0, t - tau - 0.5 * h_step);
      return strain_rate(strain, s) * chi;
    };
    McParams mc{n_inner, params.dt, random ? derived_seed(params.seed, i) : params.seed,
                params.threads};
    FeynmanKacTerms terms;
    terms.initial = [&v0](double y) { return v0.vorticity(y); };
    terms.weight = std::exp(h);
    const Estimate e = feynman_kac_estimate(spec, terms, mc);
    values[i] = e.value;
    inner_se[i] = e.std_error;
  }

  FkVortexResult out;
  out.inner_std_error = summarize(inner_se).mean;
  if (n_outer == 1) {
    out.value = {values[0], inner_se[0]};
  } else {
    const SampleSummary s = summarize(values);
    out.value = {s.mean, s.std_error};
  }
  return out;
}

Field solve_vorticity_pde(const Field& omega0, const StrainRealization& strain, double nu,
                          double t_end, double dt) {
  if (!(nu >= 0.0)) throw std::invalid_argument("solve_vorticity_pde: nu must be >= 0");
  if (!(dt > 0.0 && t_end >= 0.0)) throw std::invalid_argument("solve_vorticity_pde: bad times");
  const Grid1D& g = omega0.grid;
  const std::size_t n = g.size();
  if (n < 5) throw std::invalid_argument("solve_vorticity_pde: grid too small");
  const double dx = g.dx();

  // Mirror ghosts give a zero gradient at both edges.
  auto at = [n](const std::vector<double>& w, std::ptrdiff_t j) {
    const auto last = static_cast<std::ptrdiff_t>(n) - 1;
    if (j < 0) j = -j;
    if (j > last) j = 2 * last - j;
    return w[static_cast<std::size_t>(j)];
  };
  auto rhs = [&](const std::vector<double>& w, double time, std::vector<double>& out) {
    const double k = strain_rate(strain, time);
    for (std::size_t i = 0; i < n; ++i) {
      const auto j = static_cast<std::ptrdiff_t>(i);
      const double m2 = at(w, j - 2), m1 = at(w, j - 1), p1 = at(w, j + 1), p2 = at(w, j + 2);
      const double wx = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * dx);
      const double wxx = (-m2 + 16.0 * m1 - 30.0 * w[i] + 16.0 * p1 - p2) / (12.0 * dx * dx);
      out[i] = k * g.x(i) * wx + k * w[i] + nu * wxx;
    }
  };

  const std::size_t steps = t_end == 0.0 ? 0 : step_count(t_end, dt);
  const double h = steps ? t_end / static_cast<double>(steps) : 0.0;
  std::vector<double> w = omega0.values, k1(n), k2(n), k3(n), k4(n), tmp(n);
  for (std::size_t s = 0; s < steps; ++s) {
    const double t0 = static_cast<double>(s) * h;
    rhs(w, t0, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = w[i] + 0.5 * h * k1[i];
    rhs(tmp, t0 + 0.5 * h, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = w[i] + 0.5 * h * k2[i];
    rhs(tmp, t0 + 0.5 * h, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = w[i] + h * k3[i];
    rhs(tmp, t0 + h, k4);
    for (std::size_t i = 0; i < n; ++i) {
      w[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
  }
  return Field(g, std::move(w));
}

}  // namespace gfs
