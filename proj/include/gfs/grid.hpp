#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace gfs {

/// Uniform 1-D grid with inclusive end points.
///
/// A periodic grid built with `Grid1D::periodic` stores one period without
/// repeating the first sample: x_max + dx is identified with x_min.
class Grid1D {
 public:
  Grid1D(double x_min, double x_max, std::size_t n_points);

  static Grid1D periodic(double x_min, double period, std::size_t n_points);
  /// Symmetric grid on [-half_width, half_width].
  static Grid1D centered(double half_width, std::size_t n_points);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  std::size_t size() const { return n_; }
  double dx() const { return dx_; }
  double x(std::size_t i) const { return x_min_ + static_cast<double>(i) * dx_; }
  /// Length of one period when the grid is used periodically.
  double period() const { return static_cast<double>(n_) * dx_; }
  std::vector<double> points() const;

  bool same_as(const Grid1D& other) const;

 private:
  double x_min_;
  double x_max_;
  std::size_t n_;
  double dx_;
};

/// Samples of a field on a grid.
template <typename T>
struct BasicField {
  Grid1D grid;
  std::vector<T> values;

  explicit BasicField(Grid1D g) : grid(g), values(g.size(), T{}) {}
  BasicField(Grid1D g, std::vector<T> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size()) {
      throw std::invalid_argument("field size does not match grid");
    }
  }
  template <typename F>
  static BasicField sample(const Grid1D& g, F&& f) {
    BasicField out(g);
    for (std::size_t i = 0; i < g.size(); ++i) out.values[i] = f(g.x(i));
    return out;
  }

  std::size_t size() const { return values.size(); }
  T& operator[](std::size_t i) { return values[i]; }
  const T& operator[](std::size_t i) const { return values[i]; }
};

using Field = BasicField<double>;
using ComplexField = BasicField<std::complex<double>>;

enum class Boundary { kZero, kPeriodic };

}  // namespace gfs
