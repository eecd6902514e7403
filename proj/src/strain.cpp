#include "gfs/strain.hpp"

#include <cmath>
#include <stdexcept>

#include "gfs/numerics.hpp"

namespace gfs {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

void require_nonnegative_time(double t) {
  if (!(t >= 0.0)) throw std::domain_error("strain functional requires t >= 0");
}

// (1 - exp(-2 k dt)) / (2 k), continuous through k = 0.
double relax(double k, double dt) {
  const double a = 2.0 * k * dt;
  if (std::abs(a) < 1e-12) return dt * (1.0 - 0.5 * a);
  return -std::expm1(-a) / (2.0 * k);
}

double piecewise_h(const PiecewiseStrain& s, double t) {
  if (s.k.empty()) return 0.0;
  double h = 0.0;
  double elapsed = 0.0;
  for (std::size_t i = 0; i < s.k.size() && elapsed < t; ++i) {
    const bool last = i + 1 == s.k.size();
    const double step = last ? t - elapsed : std::min(s.dt, t - elapsed);
    h += s.k[i] * step;
    elapsed += step;
  }
  return h;
}

double piecewise_p(const PiecewiseStrain& s, double t) {
  if (s.k.empty()) return t;
  double p = 0.0;
  double elapsed = 0.0;
  for (std::size_t i = 0; i < s.k.size() && elapsed < t; ++i) {
    const bool last = i + 1 == s.k.size();
    const double step = last ? t - elapsed : std::min(s.dt, t - elapsed);
    p = p * std::exp(-2.0 * s.k[i] * step) + relax(s.k[i], step);
    elapsed += step;
  }
  return p;
}

}  // namespace

void StrainModel::validate() const {
  if (!(k0 > 0.0)) throw std::invalid_argument("StrainModel: k0 must be positive");
  if (boundary_delta_weight != 0.5 && boundary_delta_weight != 1.0) {
    throw std::invalid_argument("StrainModel: boundary_delta_weight must be 0.5 or 1.0");
  }
  std::visit(Overloaded{[](const NoFluctuation&) {},
                        [](const DeltaCorrelated& d) {
                          if (!(d.k_tilde >= 0.0)) {
                            throw std::invalid_argument("StrainModel: k_tilde must be >= 0");
                          }
                        },
                        [](const ExponentialCorrelated& e) {
                          if (!(e.variance >= 0.0)) {
                            throw std::invalid_argument("StrainModel: variance must be >= 0");
                          }
                          if (!(e.tau_c > 0.0)) {
                            throw std::invalid_argument("StrainModel: tau_c must be positive");
                          }
                        }},
             fluctuation);
}

std::vector<std::string> StrainModel::warnings() const {
  std::vector<std::string> out;
  double effective = 0.0;
  if (const auto* d = std::get_if<DeltaCorrelated>(&fluctuation)) effective = d->k_tilde;
  if (const auto* e = std::get_if<ExponentialCorrelated>(&fluctuation)) {
    effective = 2.0 * e->variance * e->tau_c;
  }
  if (is_random() && effective >= k0) {
    out.emplace_back(
        "random strain intensity >= mean strain: results are subject to the sheet-stability "
        "proviso (no stability model is applied)");
  }
  return out;
}

double correlation(const StrainModel& model, double tau) {
  return std::visit(
      Overloaded{[](const NoFluctuation&) { return 0.0; },
                 [](const DeltaCorrelated&) -> double {
                   throw std::domain_error("delta correlation has no pointwise value");
                 },
                 [tau](const ExponentialCorrelated& e) {
                   return e.variance * std::exp(-std::abs(tau) / e.tau_c);
                 }},
      model.fluctuation);
}

double correlation_integral(const StrainModel& model, double t) {
  require_nonnegative_time(t);
  return std::visit(
      Overloaded{[](const NoFluctuation&) { return 0.0; },
                 [&](const DeltaCorrelated& d) {
                   return model.boundary_delta_weight * d.k_tilde * t;
                 },
                 [t](const ExponentialCorrelated& e) {
                   // sigma^2 tau_c (t - tau_c (1 - exp(-t/tau_c)))
                   return e.variance * e.tau_c * (t + e.tau_c * std::expm1(-t / e.tau_c));
                 }},
      model.fluctuation);
}

double strain_rate(const StrainRealization& s, double t) {
  return std::visit(Overloaded{[](const ConstantStrain& c) { return c.k0; },
                               [t](const FunctionStrain& f) { return f.rate(t); },
                               [t](const PiecewiseStrain& p) {
                                 if (p.k.empty()) return 0.0;
                                 auto i = static_cast<std::size_t>(std::max(0.0, t / p.dt));
                                 return p.k[std::min(i, p.k.size() - 1)];
                               }},
                    s);
}

double strain_h(const StrainRealization& s, double t) {
  require_nonnegative_time(t);
  return std::visit(Overloaded{[t](const ConstantStrain& c) { return c.k0 * t; },
                               [t](const FunctionStrain& f) {
                                 return integrate_adaptive(f.rate, 0.0, t, 1e-12);
                               },
                               [t](const PiecewiseStrain& p) { return piecewise_h(p, t); }},
                    s);
}

double strain_p(const StrainRealization& s, double t) {
  require_nonnegative_time(t);
  return std::visit(
      Overloaded{[t](const ConstantStrain& c) { return relax(c.k0, t); },
                 [t](const FunctionStrain& f) {
                   // exp(2 h(t') - 2 h(t)) = exp(-2 int_{t'}^{t} k)
                   auto integrand = [&](double tp) {
                     return std::exp(-2.0 * integrate_adaptive(f.rate, tp, t, 1e-13));
                   };
                   return integrate_adaptive(integrand, 0.0, t, 1e-12);
                 },
                 [t](const PiecewiseStrain& p) { return piecewise_p(p, t); }},
      s);
}

}  // namespace gfs
