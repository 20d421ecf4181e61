#ifndef KINSHOCK_GRID_HPP_
#define KINSHOCK_GRID_HPP_

#include "kinshock/numerics.hpp"

namespace kinshock {

/// Vector-valued function sampled on a uniform 1-D grid.
/// Nodes are x0 + i*h, i = 0..size()-1; values stored one column per node.
struct GridFunction {
  double x0 = 0.0;
  double h = 1.0;
  Matrix values;  // dim x nodes

  GridFunction() = default;
  GridFunction(double x0_, double h_, int dim, int nodes)
      : x0(x0_), h(h_), values(Matrix::Zero(dim, nodes)) {}

  int dim() const { return static_cast<int>(values.rows()); }
  int size() const { return static_cast<int>(values.cols()); }
  double x(int i) const { return x0 + h * i; }
  double x_end() const { return x(size() - 1); }

  /// Throws if any stored value is not finite.
  void check_finite() const;

  /// Index of the node closest to x (clamped to the grid).
  int nearest_index(double xq) const;
};

/// Uniform grid on [a, b] with n nodes (n >= 2).
GridFunction make_grid(double a, double b, int n, int dim);

/// Trapezoid quadrature of a scalar sample set on spacing h.
double trapz(const Vector& samples, double h);

/// Cumulative integral from the left endpoint, composite Simpson on interior
/// pairs with a quadratic-fit correction on trailing odd intervals.
/// Fourth-order accurate for smooth integrands; returns one value per node.
Vector cumulative_integral(const Vector& samples, double h);

/// First derivative on a uniform grid, centered 4th-order stencils in the
/// interior with one-sided 4th-order closures at the boundary.
Matrix derivative_fd4(const Matrix& values, double h);

/// j-th derivative (j = 0, 1, 2) with 7-point stencils, 6th-order interior.
/// Used where the spec calls for high-order (quintic-spline grade) smoothing
/// of profile data.
Matrix derivative_high_order(const Matrix& values, double h, int order);

/// Second-order centered derivative (one-sided at ends).
Matrix derivative_fd2(const Matrix& values, double h);

/// Discrete L2 norm: sqrt(trapz |f|^2).
double l2_norm(const GridFunction& f);

/// Discrete H1 norm with FD4 derivative.
double h1_norm(const GridFunction& f);

}  // namespace kinshock

#endif  // KINSHOCK_GRID_HPP_
