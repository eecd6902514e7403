#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace gfs {

// ---------------------------------------------------------------------------
// Statistical strain description: k(t) = k0 + k'(t)
// ---------------------------------------------------------------------------

struct NoFluctuation {};

/// <k'(t+tau) k'(t)> = k_tilde * delta(tau)
struct DeltaCorrelated {
  double k_tilde = 0.0;
};

/// <k'(t+tau) k'(t)> = variance * exp(-|tau| / tau_c)
struct ExponentialCorrelated {
  double variance = 0.0;
  double tau_c = 1.0;
};

using Fluctuation = std::variant<NoFluctuation, DeltaCorrelated, ExponentialCorrelated>;

/// Mean strain plus a stationary Gaussian fluctuation model.
///
/// `boundary_delta_weight` is the weight given to a delta function sitting on
/// an integration end point when evaluating int_0^t (t-s) R(|s|) ds for the
/// delta-correlated model. 0.5 is the value consistent with the double
/// integral; 1.0 gives the full-weight closed forms.
struct StrainModel {
  double k0 = 1.0;
  Fluctuation fluctuation = NoFluctuation{};
  double boundary_delta_weight = 0.5;

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;
  /// Non-fatal diagnostics (for example the sheet-stability proviso).
  std::vector<std::string> warnings() const;
  bool is_random() const { return !std::holds_alternative<NoFluctuation>(fluctuation); }
};

/// Correlation function R(|tau|) for the exponential model; zero for none.
/// The delta model has no pointwise value and throws.
double correlation(const StrainModel& model, double tau);

/// I(t) = int_0^t (t-s) R(|s|) ds, closed form per correlation model.
double correlation_integral(const StrainModel& model, double t);

// ---------------------------------------------------------------------------
// Strain realizations: one concrete k(t)
// ---------------------------------------------------------------------------

struct ConstantStrain {
  double k0 = 0.0;
};

/// Arbitrary deterministic k(t); h and p use adaptive quadrature.
struct FunctionStrain {
  std::function<double(double)> rate;
};

/// Piecewise-constant k(t): value k[i] on [i*dt, (i+1)*dt). Beyond the last
/// step the final value is held.
struct PiecewiseStrain {
  double dt = 0.0;
  std::vector<double> k;
};

using StrainRealization = std::variant<ConstantStrain, FunctionStrain, PiecewiseStrain>;

double strain_rate(const StrainRealization& s, double t);

/// h(t) = int_0^t k(t') dt'
double strain_h(const StrainRealization& s, double t);

/// p(t) = exp(-2 h(t)) int_0^t exp(2 h(t')) dt'
double strain_p(const StrainRealization& s, double t);

}  // namespace gfs
