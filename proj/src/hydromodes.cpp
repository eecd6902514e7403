#include "gfs/hydromodes.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace gfs {
namespace {

constexpr double kResidualLimit = 1e-9;

void require_wavenumber(double q) {
  if (!(q >= 0.0) || !std::isfinite(q)) throw std::invalid_argument("wavenumber must be >= 0");
}

}  // namespace

void FluidProps::validate() const {
  if (!(gamma > 1.0)) throw std::invalid_argument("FluidProps: gamma must exceed 1");
  if (!(alpha_T > 0.0 && a0 > 0.0 && nu > 0.0)) {
    throw std::invalid_argument("FluidProps: alpha_T, a0 and nu must be positive");
  }
  if (!(nu_B >= 0.0)) throw std::invalid_argument("FluidProps: nu_B must be >= 0");
  if (!(rho > 0.0 && beta != 0.0)) {
    throw std::invalid_argument("FluidProps: rho must be positive and beta nonzero");
  }
}

double FluidProps::longitudinal_viscosity() const { return 4.0 * nu / 3.0 + nu_B; }

double FluidProps::acoustic_damping() const {
  return 0.5 * (longitudinal_viscosity() + (gamma - 1.0) * alpha_T);
}

Rate shear_mode(const FluidProps& props, double q) {
  require_wavenumber(q);
  return {-props.nu * q * q, 0.0};
}

std::array<Rate, 3> asymptotic_modes(const FluidProps& props, double q) {
  props.validate();
  require_wavenumber(q);
  const double q2 = q * q;
  const double damp = -props.acoustic_damping() * q2;
  return {Rate(-props.alpha_T * q2, 0.0), Rate(damp, props.a0 * q), Rate(damp, -props.a0 * q)};
}

Rate ModeCubic::operator()(Rate s) const { return ((s + c2) * s + c1) * s + c0; }

Rate ModeCubic::derivative(Rate s) const { return (3.0 * s + 2.0 * c2) * s + c1; }

double ModeCubic::scale(Rate s) const {
  const double a = std::abs(s);
  return a * a * a + std::abs(c2) * a * a + std::abs(c1) * a + std::abs(c0);
}

ModeCubic mode_cubic(const FluidProps& props, double q) {
  props.validate();
  require_wavenumber(q);
  const double q2 = q * q;
  const double a = (props.gamma - 1.0) * props.alpha_T * q2;  // (1,1) diagonal shift
  const double b = props.longitudinal_viscosity() * q2;       // (2,2)
  const double c = props.alpha_T * q2;                        // (3,3)
  const double sound = props.a0 * props.a0 * q2;              // -(1,2)(2,1)
  const double cross = (props.gamma - 1.0) * props.alpha_T * q2 * q2;  // (1,3)(3,1)
  ModeCubic m;
  m.c2 = a + b + c;
  m.c1 = a * b + a * c + b * c + sound - cross;
  m.c0 = a * b * c + sound * c - cross * b;
  return m;
}

Rate mode_determinant(const FluidProps& props, double q, Rate s) {
  props.validate();
  require_wavenumber(q);
  const double q2 = q * q;
  const double gm1 = props.gamma - 1.0;
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 0) = s + gm1 * props.alpha_T * q2;
  m(0, 1) = props.a0 * props.a0;
  m(0, 2) = props.rho / props.beta * gm1 * props.alpha_T * q2;
  m(1, 0) = -q2;
  m(1, 1) = s + props.longitudinal_viscosity() * q2;
  m(2, 0) = props.beta / props.rho * q2;
  m(2, 2) = s + props.alpha_T * q2;
  m(3, 3) = s + props.nu * q2;

  // Entries span q^2 to a0^2, which costs LU most of its precision. Row and
  // column scalings with unit product leave the determinant unchanged and
  // bring every entry to O(a0 q); dividing by a0 q then makes them O(1).
  const double S = props.a0 * q;
  const double balance = std::sqrt(gm1 * props.alpha_T);
  const Eigen::Vector4d rows(1.0, props.a0 / q, props.rho / props.beta * balance, 1.0);
  const Eigen::Vector4d cols(1.0, q / props.a0, props.beta / props.rho / balance, 1.0);
  const Eigen::Matrix4cd scaled = rows.asDiagonal() * m * cols.asDiagonal() / S;
  return scaled.determinant() * (S * S * S * S);
}

ModeSolution exact_modes(const FluidProps& props, double q) {
  props.validate();
  if (!(q > 0.0) || !std::isfinite(q)) throw std::invalid_argument("exact_modes requires q > 0");
  const ModeCubic cubic = mode_cubic(props, q);

  // Work in z = s / (a0 q) so the coefficients are O(1) in the acoustic regime.
  const double S = props.a0 * q;
  const double d2 = cubic.c2 / S, d1 = cubic.c1 / (S * S), d0 = cubic.c0 / (S * S * S);
  Eigen::Matrix3d companion;
  companion << 0.0, 0.0, -d0, 1.0, 0.0, -d1, 0.0, 1.0, -d2;
  const Eigen::Vector3cd eig = companion.eigenvalues();

  std::array<Rate, 3> roots;
  for (int i = 0; i < 3; ++i) {
    Rate s = eig(i) * S;
    for (int it = 0; it < 50; ++it) {
      const Rate f = cubic(s);
      if (std::abs(f) <= 1e-15 * cubic.scale(s)) break;
      const Rate df = cubic.derivative(s);
      if (df == Rate(0.0, 0.0)) break;
      const Rate next = s - f / df;
      if (next == s) break;
      s = next;
    }
    roots[static_cast<std::size_t>(i)] = s;
  }

  // Real coefficients: one real root and a conjugate pair, or three real roots.
  std::sort(roots.begin(), roots.end(),
            [](Rate a, Rate b) { return std::abs(a.imag()) < std::abs(b.imag()); });
  const double imag_tol = 1e-12 * std::max(std::abs(roots[1]), std::abs(roots[2]));
  roots[0] = {roots[0].real(), 0.0};
  if (std::abs(roots[2].imag()) > imag_tol) {
    const Rate pair{0.5 * (roots[1].real() + roots[2].real()),
                    0.5 * (std::abs(roots[1].imag()) + std::abs(roots[2].imag()))};
    roots[1] = pair;
    roots[2] = std::conj(pair);
  } else {
    roots[1] = {roots[1].real(), 0.0};
    roots[2] = {roots[2].real(), 0.0};
  }

  ModeSolution out;
  for (const Rate& r : roots) {
    const double rel = std::abs(cubic(r)) / cubic.scale(r);
    out.max_relative_residual = std::max(out.max_relative_residual, rel);
  }
  if (!(out.max_relative_residual < kResidualLimit)) {
    std::ostringstream msg;
    msg << "exact_modes: root finder did not converge (relative residual "
        << out.max_relative_residual << " at q = " << q << ")";
    throw std::runtime_error(msg.str());
  }

  const Rate sum = roots[0] + roots[1] + roots[2];
  const Rate pairs = roots[0] * roots[1] + roots[0] * roots[2] + roots[1] * roots[2];
  const Rate prod = roots[0] * roots[1] * roots[2];
  auto rel = [](Rate got, double want, double scale) { return std::abs(got - want) / scale; };
  const double r = std::max({std::abs(roots[0]), std::abs(roots[1]), std::abs(roots[2])});
  out.vieta_error = std::max({rel(sum, -cubic.c2, std::max(std::abs(cubic.c2), r)),
                              rel(pairs, cubic.c1, std::max(std::abs(cubic.c1), r * r)),
                              rel(prod, -cubic.c0, std::max(std::abs(cubic.c0), r * r * r))});

  // Pair with the asymptotic modes by the permutation of least total distance.
  const auto asym = asymptotic_modes(props, q);
  std::array<int, 3> perm{0, 1, 2}, best = perm;
  double best_cost = std::numeric_limits<double>::infinity();
  do {
    double cost = 0.0;
    for (int i = 0; i < 3; ++i) {
      cost += std::abs(roots[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] -
                       asym[static_cast<std::size_t>(i)]);
    }
    if (cost < best_cost) {
      best_cost = cost;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (std::size_t i = 0; i < 3; ++i) out.roots[i] = roots[static_cast<std::size_t>(best[i])];
  out.roots[3] = shear_mode(props, q);
  return out;
}

}  // namespace gfs
