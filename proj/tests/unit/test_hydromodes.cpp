#include <doctest.h>

#include <cmath>
#include <complex>

#include "gfs/hydromodes.hpp"

using namespace gfs;

namespace {

// The cubic evaluated directly from its factors.
Rate product_form(const FluidProps& f, double q, Rate s) {
  const double q2 = q * q, gm1 = f.gamma - 1.0, nl = 4.0 * f.nu / 3.0 + f.nu_B;
  return (s + gm1 * f.alpha_T * q2) * (s + nl * q2) * (s + f.alpha_T * q2) +
         f.a0 * f.a0 * q2 * (s + f.alpha_T * q2) - gm1 * f.alpha_T * q2 * q2 * (s + nl * q2);
}

double rel(Rate a, Rate b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("fluid properties and asymptotic modes") {
  const FluidProps f;
  CHECK(f.longitudinal_viscosity() == doctest::Approx(4e-6 / 3.0 + 2.8e-6));
  CHECK(f.acoustic_damping() == doctest::Approx(0.5 * (f.longitudinal_viscosity() + 0.01 * 1.4e-7)));
  CHECK(shear_mode(f, 10.0).real() == doctest::Approx(-1e-4));
  CHECK(shear_mode(f, 10.0).imag() == 0.0);
  const auto m = asymptotic_modes(f, 10.0);
  CHECK(m[0].real() == doctest::Approx(-1.4e-5));
  CHECK(m[1] == std::conj(m[2]));
  CHECK(m[1].imag() == doctest::Approx(14800.0));

  FluidProps bad;
  bad.gamma = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_THROWS_AS(exact_modes(f, 0.0), std::invalid_argument);
}

TEST_CASE("expanded cubic matches its factored form") {
  const FluidProps f;
  for (double q : {1.0, 1e4, 1e7}) {
    const ModeCubic c = mode_cubic(f, q);
    const double S = f.a0 * q;
    for (Rate z : {Rate(0.3, 0.7), Rate(-1.0, 0.1), Rate(2.0, -3.0)}) {
      const Rate s = z * S;
      CHECK(rel(c(s), product_form(f, q, s)) < 1e-12);
      const Rate h = s * 1e-6;
      CHECK(rel(c.derivative(s), (c(s + h) - c(s - h)) / (2.0 * h)) < 1e-6);
    }
  }
}

TEST_CASE("exact modes: residuals and the determinant") {
  const FluidProps f;
  for (double q : {1.0, 1e3, 1e6, 1e8}) {
    const ModeSolution sol = exact_modes(f, q);
    CHECK(sol.max_relative_residual < 1e-12);
    CHECK(sol.vieta_error < 1e-12);
    CHECK(sol.roots[3] == shear_mode(f, q));
    for (const Rate& s : sol.roots) {
      // The determinant vanishes at each root relative to a nearby point.
      const Rate off = s + 1e-3 * std::abs(s);
      CHECK(std::abs(mode_determinant(f, q, s)) < 1e-8 * std::abs(mode_determinant(f, q, off)));
    }
  }
}

TEST_CASE("decaying conjugate acoustic pair below the constant-term sign change") {
  const FluidProps f;
  for (double q : {1.0, 1e3, 1e6}) {
    const ModeSolution sol = exact_modes(f, q);
    CHECK(sol.roots[2] == std::conj(sol.roots[1]));
    CHECK(sol.roots[1].imag() > 0.0);
    for (const Rate& s : sol.roots) CHECK(s.real() < 0.0);
  }
}

TEST_CASE("the mode cubic acquires a growing root at very large q") {
  // c0 = alpha q^4 [a0^2 + (gamma-1) nu_l q^2 (alpha - 1)] changes sign near
  // q ~ 7e6 for water; beyond it one real root is positive.
  const FluidProps f;
  CHECK(mode_cubic(f, 1e6).c0 > 0.0);
  CHECK(mode_cubic(f, 1e8).c0 < 0.0);
  const ModeSolution sol = exact_modes(f, 1e8);
  bool growing = false;
  for (int i = 0; i < 3; ++i) growing |= sol.roots[i].real() > 0.0 && sol.roots[i].imag() == 0.0;
  CHECK(growing);
}

TEST_CASE("exact modes approach the asymptotic modes at small q") {
  const FluidProps f;
  const ModeSolution sol = exact_modes(f, 1e3);
  const auto asym = asymptotic_modes(f, 1e3);
  const double S = f.a0 * 1e3;
  for (int i = 0; i < 3; ++i) CHECK(std::abs(sol.roots[i] - asym[i]) / S < 1e-7);
  CHECK(rel(sol.roots[0], asym[0]) < 1e-2);
  // Far outside the hydrodynamic regime the pairing no longer holds.
  const ModeSolution far = exact_modes(f, 1e10);
  const auto asym_far = asymptotic_modes(f, 1e10);
  CHECK(std::abs(far.roots[1] - asym_far[1]) / (f.a0 * 1e10) > 1e-3);
}
