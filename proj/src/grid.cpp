#include "gfs/grid.hpp"

#include <cmath>

namespace gfs {

Grid1D::Grid1D(double x_min, double x_max, std::size_t n_points)
    : x_min_(x_min), x_max_(x_max), n_(n_points), dx_(0.0) {
  if (n_points < 2) throw std::invalid_argument("Grid1D needs at least 2 points");
  if (!(x_min < x_max)) throw std::invalid_argument("Grid1D requires x_min < x_max");
  dx_ = (x_max - x_min) / static_cast<double>(n_points - 1);
}

Grid1D Grid1D::periodic(double x_min, double period, std::size_t n_points) {
  if (!(period > 0.0)) throw std::invalid_argument("period must be positive");
  if (n_points < 2) throw std::invalid_argument("Grid1D needs at least 2 points");
  const double dx = period / static_cast<double>(n_points);
  return Grid1D(x_min, x_min + period - dx, n_points);
}

Grid1D Grid1D::centered(double half_width, std::size_t n_points) {
  return Grid1D(-half_width, half_width, n_points);
}

std::vector<double> Grid1D::points() const {
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = x(i);
  return out;
}

bool Grid1D::same_as(const Grid1D& other) const {
  const double tol = 1e-12 * std::max(1.0, std::abs(dx_));
  return n_ == other.n_ && std::abs(x_min_ - other.x_min_) <= tol &&
         std::abs(dx_ - other.dx_) <= tol;
}

}  // namespace gfs
