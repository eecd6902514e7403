#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "gfs/grid.hpp"

namespace gfs {

using ScalarFn = std::function<double(double)>;

/// Adaptive Gauss-Kronrod (7/15) quadrature with an absolute error target.
/// Throws std::runtime_error if the recursion depth is exhausted.
double integrate_adaptive(const ScalarFn& f, double a, double b, double abs_tol = 1e-12,
                          int max_depth = 40);

/// Composite 10-point Gauss-Legendre rule over `panels` equal panels.
double integrate_panels(const ScalarFn& f, double a, double b, std::size_t panels);

/// Trapezoid rule over uniformly spaced samples. With `periodic` the samples
/// cover one period and every sample carries full weight.
double trapezoid(std::span<const double> values, double dx, bool periodic = false);

/// Running integral F(x_i) = int_{x_ref}^{x_i} f dx with fourth-order
/// panel weights. The result is shifted so that F vanishes at x_ref (linearly
/// interpolated when x_ref falls between nodes).
std::vector<double> cumulative_integral(const Field& f, double x_ref = 0.0);

/// Fourth-order first derivative. Interior points are centered; edge points
/// use one-sided stencils unless the boundary is periodic.
std::vector<double> derivative4(const Field& f, Boundary boundary = Boundary::kZero);

/// Second-order centered second derivative (one-sided at non-periodic edges).
std::vector<double> second_derivative2(const Field& f, Boundary boundary = Boundary::kZero);

/// Pairwise summation in a fixed order; identical inputs give identical bits.
double pairwise_sum(std::span<const double> values);

/// Fourth-order centered difference of a callable.
double central_derivative4(const ScalarFn& f, double x, double h);

}  // namespace gfs
