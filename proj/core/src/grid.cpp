#include "kinshock/grid.hpp"

#include <cmath>

namespace kinshock {

void GridFunction::check_finite() const {
  if (!values.allFinite())
    throw SolverError("GridFunction contains non-finite values");
}

int GridFunction::nearest_index(double xq) const {
  int i = static_cast<int>(std::lround((xq - x0) / h));
  if (i < 0) i = 0;
  if (i >= size()) i = size() - 1;
  return i;
}

GridFunction make_grid(double a, double b, int n, int dim) {
  if (n < 2) throw SolverError("make_grid: need at least two nodes");
  GridFunction g;
  g.x0 = a;
  g.h = (b - a) / (n - 1);
  g.values = Matrix::Zero(dim, n);
  return g;
}

double trapz(const Vector& samples, double h) {
  const int n = static_cast<int>(samples.size());
  if (n < 2) return 0.0;
  double s = 0.5 * (samples[0] + samples[n - 1]);
  for (int i = 1; i < n - 1; ++i) s += samples[i];
  return s * h;
}

Vector cumulative_integral(const Vector& f, double h) {
  const int n = static_cast<int>(f.size());
  Vector out = Vector::Zero(n);
  if (n < 2) return out;
  if (n == 2) {
    out[1] = 0.5 * h * (f[0] + f[1]);
    return out;
  }
  // Simpson over pairs of intervals; odd trailing interval integrated with
  // the quadratic through the last three nodes.
  for (int i = 2; i < n; i += 2)
    out[i] = out[i - 2] + h / 3.0 * (f[i - 2] + 4.0 * f[i - 1] + f[i]);
  for (int i = 1; i < n; i += 2) {
    if (i + 1 < n) {
      // integral over [x_{i-1}, x_i] from the quadratic on nodes i-1, i, i+1
      out[i] = out[i - 1] + h / 12.0 * (5.0 * f[i - 1] + 8.0 * f[i] - f[i + 1]);
    } else {
      out[i] = out[i - 1] + h / 12.0 * (-f[i - 2] + 8.0 * f[i - 1] + 5.0 * f[i]);
    }
  }
  return out;
}

namespace {

// Apply a stencil row-wise: out(:,i) = sum_k w[k] * values(:, i + off[k]) / h^p
Vector apply_stencil(const Matrix& v, int i, const int* off, const double* w,
                     int len, double scale) {
  Vector acc = Vector::Zero(v.rows());
  for (int k = 0; k < len; ++k) acc += w[k] * v.col(i + off[k]);
  return acc * scale;
}

// Derivative weights at offset 0 from the polynomial through the given node
// offsets (Vandermonde solve); exact for polynomials of degree < len.
Vector derivative_weights(const std::vector<int>& offsets, int order) {
  const int len = static_cast<int>(offsets.size());
  Matrix vand(len, len);
  for (int i = 0; i < len; ++i)
    for (int j = 0; j < len; ++j)
      vand(i, j) = std::pow(static_cast<double>(offsets[j]), i);
  Vector rhs = Vector::Zero(len);
  double fact = 1.0;
  for (int i = 2; i <= order; ++i) fact *= i;
  rhs[order] = fact;
  return vand.partialPivLu().solve(rhs);
}

}  // namespace

Matrix derivative_fd4(const Matrix& v, double h) {
  const int n = static_cast<int>(v.cols());
  Matrix d(v.rows(), n);
  if (n < 5) return derivative_fd2(v, h);
  static const int ci[5] = {-2, -1, 0, 1, 2};
  static const double cw[5] = {1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12};
  static const int li[5] = {0, 1, 2, 3, 4};
  static const double l0[5] = {-25.0 / 12, 4.0, -3.0, 4.0 / 3, -0.25};
  static const double l1[5] = {-0.25, -5.0 / 6, 1.5, -0.5, 1.0 / 12};
  for (int i = 2; i < n - 2; ++i)
    d.col(i) = apply_stencil(v, i, ci, cw, 5, 1.0 / h);
  d.col(0) = apply_stencil(v, 0, li, l0, 5, 1.0 / h);
  d.col(1) = apply_stencil(v, 1 - 1, li, l1, 5, 1.0 / h);
  // mirrored one-sided closures on the right
  static const int ri[5] = {-4, -3, -2, -1, 0};
  static const double r0[5] = {0.25, -4.0 / 3, 3.0, -4.0, 25.0 / 12};
  static const double r1[5] = {-1.0 / 12, 0.5, -1.5, 5.0 / 6, 0.25};
  d.col(n - 1) = apply_stencil(v, n - 1, ri, r0, 5, 1.0 / h);
  d.col(n - 2) = apply_stencil(v, n - 1, ri, r1, 5, 1.0 / h);
  return d;
}

Matrix derivative_fd2(const Matrix& v, double h) {
  const int n = static_cast<int>(v.cols());
  Matrix d(v.rows(), n);
  if (n < 3) {
    d.col(0) = (v.col(n - 1) - v.col(0)) / ((n - 1) * h);
    if (n == 2) d.col(1) = d.col(0);
    return d;
  }
  for (int i = 1; i < n - 1; ++i)
    d.col(i) = (v.col(i + 1) - v.col(i - 1)) / (2.0 * h);
  d.col(0) = (-3.0 * v.col(0) + 4.0 * v.col(1) - v.col(2)) / (2.0 * h);
  d.col(n - 1) = (3.0 * v.col(n - 1) - 4.0 * v.col(n - 2) + v.col(n - 3)) / (2.0 * h);
  return d;
}

Matrix derivative_high_order(const Matrix& v, double h, int order) {
  if (order == 0) return v;
  const int n = static_cast<int>(v.cols());
  if (order == 2) {
    if (n < 7) {
      Matrix d1 = derivative_fd2(v, h);
      return derivative_fd2(d1, h);
    }
    Matrix d(v.rows(), n);
    static const int ci[7] = {-3, -2, -1, 0, 1, 2, 3};
    static const double cw[7] = {1.0 / 90,  -3.0 / 20, 3.0 / 2, -49.0 / 18,
                                 3.0 / 2,   -3.0 / 20, 1.0 / 90};
    for (int i = 3; i < n - 3; ++i)
      d.col(i) = apply_stencil(v, i, ci, cw, 7, 1.0 / (h * h));
    // one-sided 7-point closures from exact polynomial-fit weights
    for (int i : {0, 1, 2}) {
      std::vector<int> off;
      for (int k = 0; k < 7; ++k) off.push_back(k - i);
      const Vector w = derivative_weights(off, 2);
      d.col(i) = apply_stencil(v, i, off.data(), w.data(), 7, 1.0 / (h * h));
    }
    for (int i : {n - 3, n - 2, n - 1}) {
      std::vector<int> off;
      for (int k = 0; k < 7; ++k) off.push_back(n - 7 + k - i);
      const Vector w = derivative_weights(off, 2);
      d.col(i) = apply_stencil(v, i, off.data(), w.data(), 7, 1.0 / (h * h));
    }
    return d;
  }
  if (order != 1) throw SolverError("derivative_high_order: order must be <= 2");
  if (n < 7) return derivative_fd4(v, h);
  Matrix d(v.rows(), n);
  static const int ci[7] = {-3, -2, -1, 0, 1, 2, 3};
  static const double cw[7] = {-1.0 / 60, 3.0 / 20, -3.0 / 4, 0.0,
                               3.0 / 4,   -3.0 / 20, 1.0 / 60};
  for (int i = 3; i < n - 3; ++i)
    d.col(i) = apply_stencil(v, i, ci, cw, 7, 1.0 / h);
  Matrix fallback = derivative_fd4(v, h);
  for (int i : {0, 1, 2, n - 3, n - 2, n - 1}) d.col(i) = fallback.col(i);
  return d;
}

double l2_norm(const GridFunction& f) {
  Vector sq(f.size());
  for (int i = 0; i < f.size(); ++i) sq[i] = f.values.col(i).squaredNorm();
  return std::sqrt(trapz(sq, f.h));
}

double h1_norm(const GridFunction& f) {
  Matrix d = derivative_fd4(f.values, f.h);
  Vector sq(f.size());
  for (int i = 0; i < f.size(); ++i)
    sq[i] = f.values.col(i).squaredNorm() + d.col(i).squaredNorm();
  return std::sqrt(trapz(sq, f.h));
}

}  // namespace kinshock
