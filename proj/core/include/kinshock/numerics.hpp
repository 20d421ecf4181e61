#ifndef KINSHOCK_NUMERICS_HPP_
#define KINSHOCK_NUMERICS_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace kinshock {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Base class for solver failures carrying a short diagnostic message.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

class NonConvergence : public SolverError {
 public:
  NonConvergence(const std::string& where, int iterations, double residual);
  int iterations;
  double residual;
};

class ContractionFailure : public SolverError {
 public:
  explicit ContractionFailure(double factor);
  double factor;
};

class InvalidModel : public SolverError {
 public:
  explicit InvalidModel(const std::string& what) : SolverError(what) {}
};

/// Deterministic RNG wrapper; every stochastic ingredient in the library
/// draws from one of these, seeded from the run configuration.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double a, double b) {
    std::uniform_real_distribution<double> d(a, b);
    return d(engine_);
  }
  double gaussian() {
    std::normal_distribution<double> d(0.0, 1.0);
    return d(engine_);
  }
  Vector gaussian_vector(int n) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = gaussian();
    return v;
  }
  Matrix gaussian_matrix(int rows, int cols) {
    Matrix m(rows, cols);
    for (int j = 0; j < cols; ++j)
      for (int i = 0; i < rows; ++i) m(i, j) = gaussian();
    return m;
  }
  Vector unit_vector(int n) {
    Vector v = gaussian_vector(n);
    return v / v.norm();
  }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// Orthonormal basis of the orthogonal complement of the columns of `basis`
/// (n x k, orthonormal columns), computed by Householder QR. Deterministic.
Matrix orthonormal_complement(const Matrix& basis);

/// Orthonormalize columns (Gram-Schmidt with reorthogonalization).
Matrix orthonormalize(const Matrix& cols);

/// Largest principal angle (radians) between the column spans of two
/// orthonormal bases of equal dimension.
double max_principal_angle(const Matrix& basis_a, const Matrix& basis_b);

/// Symmetric positive-definite square root via eigendecomposition.
Matrix spd_sqrt(const Matrix& spd);

/// Random SPD matrix with eigenvalues drawn uniformly from [lo, hi].
Matrix random_spd(int n, double lo, double hi, Rng& rng);

/// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Least-squares slope of log(y) against log(x); entries with y below
/// `floor` are dropped. Throws if fewer than two usable points remain.
double fit_loglog_slope(const std::vector<double>& x,
                        const std::vector<double>& y, double floor = 1e-300);

/// Exponential decay rate nu from fitting log(y) = c - nu * x.
double fit_decay_rate(const std::vector<double>& x,
                      const std::vector<double>& y, double floor = 1e-300);

/// Format a double with 17 significant digits (lossless decimal encoding).
std::string format_g17(double value);

/// FNV-1a 64-bit content digest, hex-encoded.
std::string fnv1a_digest(const std::string& content);

}  // namespace kinshock

#endif  // KINSHOCK_NUMERICS_HPP_
