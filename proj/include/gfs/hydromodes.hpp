#pragma once

#include <array>
#include <complex>

namespace gfs {

/// Thermophysical constants of a simple liquid.
struct FluidProps {
  double gamma = 1.01;     ///< C_p / C_v
  double alpha_T = 1.4e-7; ///< thermal diffusivity
  double a0 = 1480.0;      ///< adiabatic sound speed
  double nu = 1.0e-6;      ///< kinematic shear viscosity
  double nu_B = 2.8e-6;    ///< kinematic bulk viscosity
  double rho = 1000.0;     ///< mean density (cancels from the roots)
  double beta = 2.1e-4;    ///< expansion coefficient (cancels from the roots)

  void validate() const;
  /// 4 nu / 3 + nu_B
  double longitudinal_viscosity() const;
  /// [nu_l + (gamma - 1) alpha_T] / 2
  double acoustic_damping() const;
};

using Rate = std::complex<double>;

/// s4 = -nu q^2
Rate shear_mode(const FluidProps& props, double q);

/// {s1, s2, s3}: entropy -alpha_T q^2, acoustic +-i a0 q - A q^2.
std::array<Rate, 3> asymptotic_modes(const FluidProps& props, double q);

/// Monic cubic s^3 + c2 s^2 + c1 s + c0 left after removing the shear factor
/// (s + nu q^2) from the 4x4 solvability determinant:
///   (s + (gamma-1) alpha q^2)(s + nu_l q^2)(s + alpha q^2)
///   + a0^2 q^2 (s + alpha q^2) - (gamma-1) alpha q^4 (s + nu_l q^2).
struct ModeCubic {
  double c2 = 0.0;
  double c1 = 0.0;
  double c0 = 0.0;

  Rate operator()(Rate s) const;
  Rate derivative(Rate s) const;
  /// sum |c_k| |s|^k: the scale against which a residual is judged.
  double scale(Rate s) const;
};

ModeCubic mode_cubic(const FluidProps& props, double q);

/// Full 4x4 determinant assembled from the matrix entries (rho and beta
/// included), for residual checks independent of the expanded cubic.
Rate mode_determinant(const FluidProps& props, double q, Rate s);

struct ModeSolution {
  /// {entropy, acoustic +, acoustic -, shear}, paired to the asymptotic modes.
  std::array<Rate, 4> roots;
  /// Largest |cubic(s)| / scale(s) over the three cubic roots.
  double max_relative_residual = 0.0;
  /// Vieta relations: relative mismatch of sum, pair sum and product.
  double vieta_error = 0.0;
};

/// Roots of the cubic from the eigenvalues of its companion matrix (in units
/// of a0 q), polished by Newton's method; non-real roots are returned as an
/// exact conjugate pair. Throws std::runtime_error with the residual when a
/// root cannot be brought below 1e-9 relative residual.
ModeSolution exact_modes(const FluidProps& props, double q);

}  // namespace gfs
