#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gfs/burgers.hpp"

using namespace gfs;

namespace {

constexpr double kPi = std::numbers::pi;

BurgersState minus_sin(std::size_t n, double nu) {
  const Grid1D g = Grid1D::periodic(-1.0, 2.0, n);
  return {Field::sample(g, [](double x) { return -std::sin(kPi * x); }), 0.0, nu};
}

}  // namespace

TEST_CASE("drift scales and admissible step") {
  const BurgersState s = minus_sin(256, 0.1);
  const StepBounds b = estimate_scales(s, 0.05);
  CHECK(b.x_s == doctest::Approx(1.0 / kPi).epsilon(1e-6));
  CHECK(b.t_s == doctest::Approx(1.0 / kPi).epsilon(1e-6));
  CHECK(admissible_dt(b, 0.1) == doctest::Approx(std::min(0.0025 / (kPi * kPi * 0.1), 0.05 / kPi)));

  BurgersState flat = s;
  for (double& v : flat.u.values) v = 0.3;
  CHECK(std::isinf(estimate_scales(flat).x_s));
  CHECK_THROWS_AS(estimate_scales(s, 1.5), std::invalid_argument);
}

TEST_CASE("incremental step preserves constants and flags its provisos") {
  BurgersState s = minus_sin(128, 0.05);
  for (double& v : s.u.values) v = 0.7;
  const StepOutcome o = step_incremental(s, 0.01, {Boundary::kPeriodic});
  for (double v : o.state.u.values) CHECK(v == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(o.state.t == doctest::Approx(0.01));

  const BurgersState w = minus_sin(128, 0.05);
  CHECK(step_incremental(w, 0.5, {Boundary::kPeriodic}).exceeded_admissible_dt);
  CHECK_FALSE(step_incremental(w, 1e-3, {Boundary::kPeriodic}).exceeded_admissible_dt);
  const StepOutcome thin = step_incremental(w, 1e-9, {Boundary::kPeriodic});
  CHECK(thin.degenerate_kernel);
  for (std::size_t i = 0; i < w.u.size(); i += 7) CHECK(thin.state.u[i] == doctest::Approx(w.u[i]).epsilon(1e-6));

  BurgersState bad = w;
  bad.nu = 0.0;
  CHECK_THROWS_AS(step_incremental(bad, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(step_incremental(w, 0.0), std::invalid_argument);
}

TEST_CASE("steady viscous shock is a fixed point of the Cole-Hopf solution") {
  const double nu = 0.05, a = 1.0;
  // u = -a tanh(a x / 2nu), Phi = -2 nu ln cosh(a x / 2nu).
  const ColeHopfSolution ch([=](double x) { return -2.0 * nu * std::log(std::cosh(a * x / (2.0 * nu))); }, nu,
                            a);
  for (double x : {-0.3, -0.05, 0.0, 0.02, 0.4}) {
    CHECK(ch.velocity(x, 0.5) == doctest::Approx(-a * std::tanh(a * x / (2.0 * nu))).epsilon(1e-8));
  }
}

TEST_CASE("Cole-Hopf: field and callable forms agree; t = 0 returns u0") {
  const double nu = 0.1;
  const Grid1D g = Grid1D::periodic(-1.0, 2.0, 512);
  const Field u0 = Field::sample(g, [](double x) { return -std::sin(kPi * x); });
  const ColeHopfSolution ch = cole_hopf_from_velocity([](double x) { return -std::sin(kPi * x); }, nu, 1.0);
  for (double x : {-0.5, 0.0, 0.25, 0.9}) {
    CHECK(cole_hopf_exact(u0, nu, x, 0.0, Boundary::kPeriodic) == doctest::Approx(-std::sin(kPi * x)));
    CHECK(cole_hopf_exact(u0, nu, x, 0.2, Boundary::kPeriodic) == doctest::Approx(ch.velocity(x, 0.2)).epsilon(1e-7));
  }
  // Odd symmetry of the data is preserved.
  CHECK(std::abs(ch.velocity(0.0, 0.3)) < 1e-12);
}

TEST_CASE("incremental solve converges to the Cole-Hopf solution") {
  const double nu = 0.1, t_end = 0.1;
  auto error = [&](std::size_t n, double eps) {
    const BurgersState s = minus_sin(n, nu);
    StepOptions opt{Boundary::kPeriodic, KernelDrift::kFrozen, 1, eps};
    const SolveReport r = solve_incremental(s, t_end, opt);
    CHECK(r.state.t == doctest::Approx(t_end));
    CHECK(r.warnings == 0);
    double e = 0.0;
    for (std::size_t i = 0; i < n; i += 8) {
      const double x = r.state.u.grid.x(i);
      e = std::max(e, std::abs(r.state.u[i] - cole_hopf_exact(s.u, nu, x, t_end, Boundary::kPeriodic)));
    }
    return e;
  };
  const double coarse = error(256, 0.1);
  const double fine = error(256, 0.05);
  CHECK(fine < coarse);
  CHECK(fine < 5e-3);
}

TEST_CASE("KPZ transforms round-trip and the heights satisfy KPZ") {
  const double nu = 0.2, k = kPi;
  const Grid1D g = Grid1D::periodic(-1.0, 2.0, 256);
  auto phi_at = [&](double t) {
    return Field::sample(g, [&](double x) { return 1.0 + 0.5 * std::exp(-nu * k * k * t) * std::cos(k * x); });
  };
  const Field phi = phi_at(0.0);
  const Field h = kpz_transform(phi, nu, TransformDirection::kPhiToHeight, Boundary::kPeriodic);
  const Field back = kpz_transform(h, nu, TransformDirection::kHeightToPhi, Boundary::kPeriodic);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(back[i] == doctest::Approx(phi[i]).epsilon(1e-14));

  const Field v = kpz_transform(phi, nu, TransformDirection::kPhiToVelocity, Boundary::kPeriodic);
  for (std::size_t i = 0; i < g.size(); i += 16) {
    const double x = g.x(i);
    const double want = -2.0 * nu * (-0.5 * k * std::sin(k * x)) / phi[i];
    CHECK(v[i] == doctest::Approx(want).epsilon(1e-6));
  }

  const double dt = 1e-4;
  const Field h1 = kpz_transform(phi_at(0.1), nu, TransformDirection::kPhiToHeight, Boundary::kPeriodic);
  const Field h2 = kpz_transform(phi_at(0.1 + dt), nu, TransformDirection::kPhiToHeight, Boundary::kPeriodic);
  CHECK(kpz_residual(h1, h2, dt, nu, Boundary::kPeriodic) < 1e-3);

  Field negative = phi;
  negative[3] = -0.1;
  CHECK_THROWS_AS(kpz_transform(negative, nu, TransformDirection::kPhiToHeight), std::domain_error);
}
