#include "kinshock/numerics.hpp"

#include <cmath>
#include <cstdio>

namespace kinshock {

NonConvergence::NonConvergence(const std::string& where, int iters, double res)
    : SolverError(where + ": no convergence after " + std::to_string(iters) +
                  " iterations, residual " + std::to_string(res)),
      iterations(iters),
      residual(res) {}

ContractionFailure::ContractionFailure(double f)
    : SolverError("fixed-point iteration not contractive, factor " +
                  std::to_string(f)),
      factor(f) {}

Matrix orthonormal_complement(const Matrix& basis) {
  const int n = static_cast<int>(basis.rows());
  const int k = static_cast<int>(basis.cols());
  if (k == 0) return Matrix::Identity(n, n);
  // Full QR of the basis; trailing columns of Q span the complement.
  Eigen::HouseholderQR<Matrix> qr(basis);
  Matrix q = qr.householderQ();
  Matrix comp = q.rightCols(n - k);
  // Householder can flip orientation relative to the input columns; project
  // out any residual overlap and re-orthonormalize for cleanliness.
  comp -= basis * (basis.transpose() * comp);
  return orthonormalize(comp);
}

Matrix orthonormalize(const Matrix& cols) {
  Matrix out = cols;
  for (int j = 0; j < out.cols(); ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i < j; ++i)
        out.col(j) -= out.col(i).dot(out.col(j)) * out.col(i);
    }
    const double nrm = out.col(j).norm();
    if (nrm < 1e-13)
      throw SolverError("orthonormalize: rank-deficient column set");
    out.col(j) /= nrm;
  }
  return out;
}

double max_principal_angle(const Matrix& basis_a, const Matrix& basis_b) {
  if (basis_a.cols() != basis_b.cols())
    throw SolverError("principal angles need equal subspace dimensions");
  if (basis_a.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(basis_a.transpose() * basis_b);
  const double smin = svd.singularValues().minCoeff();
  return std::acos(std::min(1.0, std::max(-1.0, smin)));
}

Matrix spd_sqrt(const Matrix& spd) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(spd);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw SolverError("spd_sqrt: matrix not positive definite");
  return es.operatorSqrt();
}

Matrix random_spd(int n, double lo, double hi, Rng& rng) {
  Matrix g = rng.gaussian_matrix(n, n);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Vector eigs(n);
  for (int i = 0; i < n; ++i) eigs[i] = rng.uniform(lo, hi);
  return q * eigs.asDiagonal() * q.transpose();
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw SolverError("fit_slope: need at least two points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-300) throw SolverError("fit_slope: degenerate x");
  return (n * sxy - sx * sy) / denom;
}

double fit_loglog_slope(const std::vector<double>& x,
                        const std::vector<double>& y, double floor) {
  std::vector<double> lx, ly;
  for (size_t i = 0; i < x.size(); ++i) {
    if (y[i] > floor && x[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  if (lx.size() < 2)
    throw SolverError("fit_loglog_slope: fewer than two usable points");
  return fit_slope(lx, ly);
}

double fit_decay_rate(const std::vector<double>& x,
                      const std::vector<double>& y, double floor) {
  std::vector<double> fx, fy;
  for (size_t i = 0; i < x.size(); ++i) {
    if (y[i] > floor) {
      fx.push_back(x[i]);
      fy.push_back(std::log(y[i]));
    }
  }
  if (fx.size() < 2)
    throw SolverError("fit_decay_rate: fewer than two usable points");
  return -fit_slope(fx, fy);
}

std::string format_g17(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return std::string(buf);
}

std::string fnv1a_digest(const std::string& content) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : content) {
    h ^= static_cast<std::uint64_t>(c);
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace kinshock
