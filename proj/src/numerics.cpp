#include "gfs/numerics.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <stdexcept>

namespace gfs {
namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;

double adaptive_step(const ScalarFn& f, double a, double b, double tol, int depth) {
  double err = 0.0;
  const double est = Kronrod::integrate(f, a, b, 0, 0.0, &err);
  if (err <= tol || std::abs(b - a) < 1e-300) return est;
  if (depth <= 0) {
    throw std::runtime_error("integrate_adaptive: recursion depth exhausted");
  }
  const double mid = 0.5 * (a + b);
  return adaptive_step(f, a, mid, 0.5 * tol, depth - 1) +
         adaptive_step(f, mid, b, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_adaptive(const ScalarFn& f, double a, double b, double abs_tol, int max_depth) {
  if (a == b) return 0.0;
  if (a > b) return -integrate_adaptive(f, b, a, abs_tol, max_depth);
  return adaptive_step(f, a, b, abs_tol, max_depth);
}

double integrate_panels(const ScalarFn& f, double a, double b, std::size_t panels) {
  if (panels == 0) throw std::invalid_argument("integrate_panels: panels must be positive");
  const double w = (b - a) / static_cast<double>(panels);
  std::vector<double> parts(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + static_cast<double>(p) * w;
    parts[p] = boost::math::quadrature::gauss<double, 10>::integrate(f, lo, lo + w);
  }
  return pairwise_sum(parts);
}

double trapezoid(std::span<const double> values, double dx, bool periodic) {
  if (values.empty()) return 0.0;
  std::vector<double> w(values.begin(), values.end());
  if (!periodic && w.size() > 1) {
    w.front() *= 0.5;
    w.back() *= 0.5;
  }
  return pairwise_sum(w) * dx;
}

std::vector<double> cumulative_integral(const Field& f, double x_ref) {
  const auto n = f.size();
  const double dx = f.grid.dx();
  const auto& v = f.values;
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double panel = 0.0;
    if (n >= 4 && i >= 1 && i + 2 < n) {
      panel = dx / 24.0 * (-v[i - 1] + 13.0 * v[i] + 13.0 * v[i + 1] - v[i + 2]);
    } else if (n >= 4 && i == 0) {
      panel = dx / 24.0 * (9.0 * v[0] + 19.0 * v[1] - 5.0 * v[2] + v[3]);
    } else if (n >= 4) {
      panel = dx / 24.0 * (9.0 * v[i + 1] + 19.0 * v[i] - 5.0 * v[i - 1] + v[i - 2]);
    } else {
      panel = 0.5 * dx * (v[i] + v[i + 1]);
    }
    out[i + 1] = out[i] + panel;
  }
  // Shift so that the antiderivative vanishes at x_ref.
  const double s = (x_ref - f.grid.x_min()) / dx;
  double offset = 0.0;
  if (s <= 0.0) {
    offset = out[0] + s * (n > 1 ? out[1] - out[0] : 0.0);
  } else if (s >= static_cast<double>(n - 1)) {
    offset = out[n - 1] + (s - static_cast<double>(n - 1)) * (out[n - 1] - out[n - 2]);
  } else {
    const auto i = static_cast<std::size_t>(std::floor(s));
    const double frac = s - static_cast<double>(i);
    if (frac == 0.0) {
      offset = out[i];
    } else {
      // Integrate the linear interpolant of f over the partial panel.
      const double part = dx * frac * (v[i] + 0.5 * frac * (v[i + 1] - v[i]));
      offset = out[i] + part;
    }
  }
  for (auto& o : out) o -= offset;
  return out;
}

std::vector<double> derivative4(const Field& f, Boundary boundary) {
  const auto n = f.size();
  const double dx = f.grid.dx();
  const auto& v = f.values;
  std::vector<double> d(n, 0.0);
  if (n < 5) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t lo = i == 0 ? 0 : i - 1;
      const std::size_t hi = i + 1 == n ? i : i + 1;
      d[i] = (v[hi] - v[lo]) / (static_cast<double>(hi - lo) * dx);
    }
    return d;
  }
  auto at = [&](std::ptrdiff_t j) {
    const auto nn = static_cast<std::ptrdiff_t>(n);
    return v[static_cast<std::size_t>(((j % nn) + nn) % nn)];
  };
  for (std::size_t i = 0; i < n; ++i) {
    const auto j = static_cast<std::ptrdiff_t>(i);
    const bool interior = i >= 2 && i + 2 < n;
    if (interior || boundary == Boundary::kPeriodic) {
      d[i] = (at(j - 2) - 8.0 * at(j - 1) + 8.0 * at(j + 1) - at(j + 2)) / (12.0 * dx);
    } else if (i < 2) {
      // Forward stencil on points i..i+4.
      const double c[5][5] = {{-25.0, 48.0, -36.0, 16.0, -3.0}, {-3.0, -10.0, 18.0, -6.0, 1.0}};
      const std::size_t base = 0;
      double acc = 0.0;
      for (std::size_t k = 0; k < 5; ++k) acc += c[i][k] * v[base + k];
      d[i] = acc / (12.0 * dx);
    } else {
      const std::size_t from_end = n - 1 - i;  // 0 or 1
      const double c[2][5] = {{3.0, -16.0, 36.0, -48.0, 25.0}, {-1.0, 6.0, -18.0, 10.0, 3.0}};
      const std::size_t base = n - 5;
      double acc = 0.0;
      for (std::size_t k = 0; k < 5; ++k) acc += c[from_end][k] * v[base + k];
      d[i] = acc / (12.0 * dx);
    }
  }
  return d;
}

std::vector<double> second_derivative2(const Field& f, Boundary boundary) {
  const auto n = f.size();
  const double dx2 = f.grid.dx() * f.grid.dx();
  const auto& v = f.values;
  std::vector<double> d(n, 0.0);
  if (n < 4) return d;
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (v[i - 1] - 2.0 * v[i] + v[i + 1]) / dx2;
  if (boundary == Boundary::kPeriodic) {
    d[0] = (v[n - 1] - 2.0 * v[0] + v[1]) / dx2;
    d[n - 1] = (v[n - 2] - 2.0 * v[n - 1] + v[0]) / dx2;
  } else {
    d[0] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / dx2;
    d[n - 1] = (2.0 * v[n - 1] - 5.0 * v[n - 2] + 4.0 * v[n - 3] - v[n - 4]) / dx2;
  }
  return d;
}

double pairwise_sum(std::span<const double> values) {
  const auto n = values.size();
  if (n == 0) return 0.0;
  if (n <= 16) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const auto half = n / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double central_derivative4(const ScalarFn& f, double x, double h) {
  return (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h);
}

}  // namespace gfs
