#ifndef KINSHOCK_RESOLVENT_HPP_
#define KINSHOCK_RESOLVENT_HPP_

#include <utility>
#include <vector>

#include "kinshock/grid.hpp"

namespace kinshock {

class ZeroEigenvalue : public SolverError {
 public:
  explicit ZeroEigenvalue(const std::string& what) : SolverError(what) {}
};

/// Eigen-structure of Gamma0 driving the degenerate equation
/// (Gamma0 d/dx + I) w = g. Modes with alpha > 0 decay forward under the
/// homogeneous flow Gamma0 w' = -w (stable); alpha < 0 decay backward.
struct SpectralDecomposition {
  Vector alphas;        // ascending, all nonzero
  Matrix eigenvectors;  // orthonormal columns matching alphas
  std::vector<int> stable_indices;
  std::vector<int> unstable_indices;

  int dim() const { return static_cast<int>(alphas.size()); }
  double alpha_max_abs() const { return alphas.cwiseAbs().maxCoeff(); }
  double alpha_min_abs() const { return alphas.cwiseAbs().minCoeff(); }
  /// nu = 1/|Gamma0|: the uniform bi-semigroup decay rate.
  double nu() const { return 1.0 / alpha_max_abs(); }
};

SpectralDecomposition spectral_decompose(const Matrix& gamma0);

/// Solve alpha u' + u = g on the grid (zero extension outside), by exact
/// convolution of the one-sided exponential kernel with the piecewise-linear
/// interpolant of g: an O(N) recursive update, unconditionally stable.
Vector apply_scalar_resolvent(double alpha, const Vector& g, double h);

/// (Gamma0 d/dx + I)^{-1} g: expand in the eigenbasis, solve per mode,
/// recombine. L2-bounded with constant 1 (Parseval).
GridFunction apply_resolvent(const SpectralDecomposition& decomp,
                             const GridFunction& g);

/// Adjoint resolvent = flip o resolvent o flip (symmetry of Gamma0).
GridFunction apply_resolvent_adjoint(const SpectralDecomposition& decomp,
                                     const GridFunction& g);

/// Operator norm of the resolvent kernel at offset theta:
/// sup over modes of |alpha|^{-1} e^{-|theta|/|alpha|}. Grows like C/theta as
/// theta -> 0 when the spectrum accumulates at zero.
std::vector<std::pair<double, double>> kernel_norm_probe(
    const SpectralDecomposition& decomp, const std::vector<double>& thetas);

struct SymbolBound {
  double omega;
  double symbol;             // max_mode |i w a + 1|^{-1}
  double symbol_derivative;  // (1 + |w|) max_mode |a| |i w a + 1|^{-2}
};

/// Fourier-symbol bounds of the resolvent; |S| <= 1 always, and the scaled
/// derivative column is <= 1 whenever |Gamma0| <= 3/4.
std::vector<SymbolBound> symbol_bounds(const SpectralDecomposition& decomp,
                                       const std::vector<double>& omegas);

/// Forward-decaying part of the homogeneous flow: sum over stable modes of
/// e^{-x/alpha} <f, e> e. At x = 0 this is the stable spectral projection.
Vector semigroup_apply(const SpectralDecomposition& decomp, double x,
                       const Vector& f);

/// Stable spectral projection Pi_S.
Vector stable_projection(const SpectralDecomposition& decomp, const Vector& f);
Vector unstable_projection(const SpectralDecomposition& decomp,
                           const Vector& f);

/// Graph norm || |Gamma0|^{-1/2} Pi_S f ||: the H1-stable-subspace probe,
/// finite in finite dimension but growing as min|alpha| -> 0.
double h1_stable_graph_norm(const SpectralDecomposition& decomp,
                            const Vector& f);

/// Exponentially weighted norms; <x> = sqrt(1 + x^2).
struct WeightedNorm {
  enum class Kind { L2, H1, Mixed };
  Kind kind = Kind::L2;
  double eta = 0.0;     // weight rate for L2/H1 kinds
  double alpha1 = 0.0;  // mixed: 0 < alpha1 << alpha << alpha2, all explicit
  double alpha = 0.0;
  double alpha2 = 0.0;

  static WeightedNorm l2(double eta_) { return {Kind::L2, eta_, 0, 0, 0}; }
  static WeightedNorm h1(double eta_) { return {Kind::H1, eta_, 0, 0, 0}; }
  static WeightedNorm mixed(double a1, double a, double a2);
};

/// Trapezoid quadrature of the weighted integrals; centered differences for
/// the derivative terms. Mixed kind: ||f||_{L2_{-alpha}} + ||f'||_{L2_{-alpha2}}.
double weighted_norm(const GridFunction& f, const WeightedNorm& w);

}  // namespace kinshock

#endif  // KINSHOCK_RESOLVENT_HPP_
