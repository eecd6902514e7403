#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <variant>
#include <vector>

#include "gfs/kernels.hpp"
#include "gfs/numerics.hpp"
#include "gfs/stats.hpp"

namespace gfs {

/// b(x, s): backward drift (b = -v) evaluated on the simulation clock s.
using DriftFn = std::function<double(double x, double s)>;
/// f(x, s): a path functional integrated along the path.
using PathFunctional = std::function<double(double x, double s)>;

/// d chi = b ds + sqrt(2 nu) dw started at x_start on [s_start, s_end].
struct SdeSpec {
  DriftFn drift;
  double nu = 0.0;
  double x_start = 0.0;
  double s_start = 0.0;
  double s_end = 1.0;

  void validate() const;
  double horizon() const { return s_end - s_start; }
};

struct McParams {
  std::size_t n_paths = 100000;
  double dt = 1e-3;
  std::uint64_t seed = 1;
  unsigned threads = 0;  ///< 0 selects the hardware concurrency
};

struct Unbounded {};

/// Absorbing wall. `bridge_crossing` additionally absorbs paths whose
/// Brownian bridge between two monitored steps touches the wall (exact for
/// zero drift); otherwise only discretely observed crossings count.
struct HalfLine {
  double x_wall = 0.0;
  bool bridge_crossing = false;
};

using Domain = std::variant<Unbounded, HalfLine>;

struct PathEnsemble {
  std::size_t n_paths = 0;
  std::uint64_t seed = 0;
  double dt = 0.0;  ///< effective step, horizon / n_steps
  std::size_t n_steps = 0;
  std::vector<double> terminal_values;
  /// First-passage time on the simulation clock; +inf for surviving paths.
  std::vector<double> exit_times;
  /// Trapezoid accumulation of the forcing functional up to exit or s_end.
  std::vector<double> functional_sums;

  std::size_t absorbed() const;
};

/// Euler-Maruyama sampling with one Philox stream per path derived from
/// (seed, path index). Results do not depend on the thread count.
PathEnsemble sample_paths(const SdeSpec& spec, const McParams& mc, const Domain& domain = Unbounded{},
                          const PathFunctional& forcing = {});

struct FeynmanKacTerms {
  ScalarFn initial;           ///< phi at the terminal position (survivors)
  PathFunctional forcing;     ///< f integrated along the path
  ScalarFn boundary;          ///< g(exit time) for absorbed paths
  double weight = 1.0;        ///< multiplicative factor, e.g. exp(h(t))
};

/// Mean of phi(chi(T)) + int f ds' (+ g(tau) for absorbed paths), with its
/// standard error, scaled by the weight.
Estimate feynman_kac_estimate(const SdeSpec& spec, const FeynmanKacTerms& terms, const McParams& mc,
                              const Domain& domain = Unbounded{});

struct BridgeResult {
  double mc_value = 0.0;
  double mc_std_error = 0.0;
  double quadrature = 0.0;

  double defect() const;
  double relative_defect() const;
  /// |MC - quadrature| in units of the MC standard error.
  double defect_in_std_errors() const;
  bool passes(double n_std_errors = 3.0) const;
};

/// E[phi(chi(T))] against int phi(x') G(x'; T) dx'. The kernel must describe
/// the same (drift, nu): affine drifts are checked through their exact moments.
BridgeResult bridge_check_initial(const ScalarFn& phi, const GaussianDensity& kernel,
                                  const SdeSpec& spec, const McParams& mc);

/// Kernel density after an elapsed time s (s > 0).
using KernelInTime = std::function<GaussianDensity(double elapsed)>;

/// E[int f ds'] against int_0^t int f(x', s') G(x'; s') dx' ds'.
BridgeResult bridge_check_forcing(const PathFunctional& f, const KernelInTime& kernel,
                                  const SdeSpec& spec, const McParams& mc);

/// Zero-drift absorbing half line: E[g(tau) 1{tau <= T}] against
/// -nu int g(t') dG/dn' dt' with the method-of-images kernel.
BridgeResult bridge_check_boundary(const ScalarFn& g, const SdeSpec& spec, double x_wall,
                                   const McParams& mc);

/// Method-of-images density for a driftless process absorbed at x_wall.
double half_line_density(double nu, double x_start, double x_wall, double elapsed, double y);

/// Boundary flux -nu dG/dn' at the wall: the first-passage time density.
double half_line_exit_flux(double nu, double x_start, double x_wall, double elapsed);

}  // namespace gfs
