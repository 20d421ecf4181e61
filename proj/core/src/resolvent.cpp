#include "kinshock/resolvent.hpp"

#include <cmath>

namespace kinshock {

SpectralDecomposition spectral_decompose(const Matrix& gamma0) {
  if ((gamma0 - gamma0.transpose()).norm() > 1e-10 * gamma0.norm())
    throw SolverError("spectral_decompose: Gamma0 must be symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (gamma0 + gamma0.transpose()));
  SpectralDecomposition d;
  d.alphas = es.eigenvalues();
  d.eigenvectors = es.eigenvectors();
  const double amax = d.alphas.cwiseAbs().maxCoeff();
  for (int i = 0; i < d.dim(); ++i) {
    if (std::abs(d.alphas[i]) < 1e-12 * amax)
      throw ZeroEigenvalue("Gamma0 has a numerically zero eigenvalue");
    (d.alphas[i] > 0 ? d.stable_indices : d.unstable_indices).push_back(i);
  }
  return d;
}

namespace {

// Exact cell integrals of the one-sided exponential kernel against the two
// linear hat contributions: with beta = h/|alpha|,
//   I0 = 1 - e^{-beta},  I1 = I0 - (1 - (1+beta) e^{-beta})/beta,
// evaluated by series for small beta to avoid cancellation.
void kernel_weights(double beta, double& i0, double& i1) {
  if (beta < 0.5) {
    double term = beta;  // beta^j / j!
    i0 = 0.0;
    i1 = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 14; ++j) {
      i0 += sign * term;
      i1 += sign * term / (j + 1);
      term *= beta / (j + 1);
      sign = -sign;
    }
  } else {
    const double e = std::exp(-beta);
    i0 = 1.0 - e;
    i1 = i0 - (1.0 - (1.0 + beta) * e) / beta;
  }
}

}  // namespace

Vector apply_scalar_resolvent(double alpha, const Vector& g, double h) {
  if (alpha == 0.0) throw ZeroEigenvalue("scalar resolvent needs alpha != 0");
  const int n = static_cast<int>(g.size());
  Vector u = Vector::Zero(n);
  const double beta = h / std::abs(alpha);
  const double decay = std::exp(-beta);
  double i0, i1;
  kernel_weights(beta, i0, i1);
  if (alpha > 0) {
    // u(x) = (1/a) int_{-inf}^x e^{-(x-y)/a} g(y) dy, zero extension left
    u[0] = 0.0;
    for (int k = 0; k + 1 < n; ++k)
      u[k + 1] = decay * u[k] + g[k] * (i0 - i1) + g[k + 1] * i1;
  } else {
    u[n - 1] = 0.0;
    for (int k = n - 1; k > 0; --k)
      u[k - 1] = decay * u[k] + g[k] * (i0 - i1) + g[k - 1] * i1;
  }
  return u;
}

GridFunction apply_resolvent(const SpectralDecomposition& decomp,
                             const GridFunction& g) {
  if (g.dim() != decomp.dim())
    throw SolverError("apply_resolvent: dimension mismatch");
  GridFunction out = g;
  // coordinates of g in the eigenbasis, one row per mode
  Matrix coords = decomp.eigenvectors.transpose() * g.values;
  Matrix ucoords(coords.rows(), coords.cols());
  for (int mode = 0; mode < decomp.dim(); ++mode)
    ucoords.row(mode) = apply_scalar_resolvent(
        decomp.alphas[mode], coords.row(mode).transpose(), g.h).transpose();
  out.values = decomp.eigenvectors * ucoords;
  return out;
}

GridFunction apply_resolvent_adjoint(const SpectralDecomposition& decomp,
                                     const GridFunction& g) {
  GridFunction flipped = g;
  flipped.values = g.values.rowwise().reverse();
  GridFunction u = apply_resolvent(decomp, flipped);
  u.values = u.values.rowwise().reverse().eval();
  return u;
}

std::vector<std::pair<double, double>> kernel_norm_probe(
    const SpectralDecomposition& decomp, const std::vector<double>& thetas) {
  std::vector<std::pair<double, double>> out;
  out.reserve(thetas.size());
  for (double theta : thetas) {
    if (theta == 0.0)
      throw SolverError("kernel_norm_probe: theta must be nonzero");
    double best = 0.0;
    for (int i = 0; i < decomp.dim(); ++i) {
      const double a = std::abs(decomp.alphas[i]);
      best = std::max(best, std::exp(-std::abs(theta) / a) / a);
    }
    out.emplace_back(theta, best);
  }
  return out;
}

std::vector<SymbolBound> symbol_bounds(const SpectralDecomposition& decomp,
                                       const std::vector<double>& omegas) {
  std::vector<SymbolBound> out;
  out.reserve(omegas.size());
  for (double w : omegas) {
    SymbolBound b{w, 0.0, 0.0};
    for (int i = 0; i < decomp.dim(); ++i) {
      const double a = decomp.alphas[i];
      const double m2 = 1.0 + w * w * a * a;  // |i w a + 1|^2
      b.symbol = std::max(b.symbol, 1.0 / std::sqrt(m2));
      b.symbol_derivative = std::max(b.symbol_derivative, std::abs(a) / m2);
    }
    b.symbol_derivative *= 1.0 + std::abs(w);
    out.push_back(b);
  }
  return out;
}

Vector semigroup_apply(const SpectralDecomposition& decomp, double x,
                       const Vector& f) {
  if (x < 0) throw SolverError("semigroup_apply: x must be >= 0");
  Vector out = Vector::Zero(decomp.dim());
  for (int i : decomp.stable_indices) {
    const Vector e = decomp.eigenvectors.col(i);
    out += std::exp(-x / decomp.alphas[i]) * e.dot(f) * e;
  }
  return out;
}

Vector stable_projection(const SpectralDecomposition& decomp, const Vector& f) {
  return semigroup_apply(decomp, 0.0, f);
}

Vector unstable_projection(const SpectralDecomposition& decomp,
                           const Vector& f) {
  return f - stable_projection(decomp, f);
}

double h1_stable_graph_norm(const SpectralDecomposition& decomp,
                            const Vector& f) {
  double acc = 0.0;
  for (int i : decomp.stable_indices) {
    const double c = decomp.eigenvectors.col(i).dot(f);
    acc += c * c / std::abs(decomp.alphas[i]);
  }
  return std::sqrt(acc);
}

WeightedNorm WeightedNorm::mixed(double a1, double a, double a2) {
  if (!(0 < a1 && a1 < a && a < a2))
    throw SolverError("mixed norm requires 0 < alpha1 < alpha < alpha2");
  WeightedNorm w;
  w.kind = Kind::Mixed;
  w.alpha1 = a1;
  w.alpha = a;
  w.alpha2 = a2;
  return w;
}

namespace {

double weighted_l2(const GridFunction& f, const Matrix& values, double eta) {
  Vector sq(f.size());
  for (int i = 0; i < f.size(); ++i) {
    const double x = f.x(i);
    const double w = std::exp(eta * std::sqrt(1.0 + x * x));
    sq[i] = w * w * values.col(i).squaredNorm();
  }
  return std::sqrt(trapz(sq, f.h));
}

}  // namespace

double weighted_norm(const GridFunction& f, const WeightedNorm& w) {
  f.check_finite();
  switch (w.kind) {
    case WeightedNorm::Kind::L2:
      return weighted_l2(f, f.values, w.eta);
    case WeightedNorm::Kind::H1: {
      const Matrix d = derivative_fd2(f.values, f.h);
      return weighted_l2(f, f.values, w.eta) + weighted_l2(f, d, w.eta);
    }
    case WeightedNorm::Kind::Mixed: {
      const Matrix d = derivative_fd2(f.values, f.h);
      return weighted_l2(f, f.values, -w.alpha) +
             weighted_l2(f, d, -w.alpha2);
    }
  }
  throw SolverError("weighted_norm: unknown kind");
}

}  // namespace kinshock
