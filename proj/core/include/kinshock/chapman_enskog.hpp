#ifndef KINSHOCK_CHAPMAN_ENSKOG_HPP_
#define KINSHOCK_CHAPMAN_ENSKOG_HPP_

#include <string>

#include "kinshock/model.hpp"

namespace kinshock {

class NonSimpleEigenvalue : public SolverError {
 public:
  explicit NonSimpleEigenvalue(const std::string& what) : SolverError(what) {}
};

/// Second-order Chapman-Enskog data of a model: micro linearization
/// E = Q'(u_bar)|_V, transport blocks, and the diffusion D*.
///
/// Sign convention: the paper's D* = A12 E^{-1} A12^T is negative
/// semidefinite for E <= -delta I; we store D* = -A12 E^{-1} A12^T =
/// A12 (-E)^{-1} A12^T, which is PSD and satisfies r.D*r = delta > 0.
struct ChapmanEnskogData {
  KineticModel model;
  Matrix E;       // (n-r) x (n-r), symmetric negative definite
  Matrix A11;     // r x r
  Matrix A12;     // r x (n-r)
  Matrix D_star;  // r x r PSD
  Vector u_bar_macro;
  double newton_tol = 1e-12;
  int newton_max_iter = 25;
  double basin_radius = 0.0;  // 0.5 * delta / |B| by default

  int r() const { return model.r; }
};

ChapmanEnskogData make_chapman_enskog(const KineticModel& model);

/// Newton solve for the equilibrium graph v*: micro coordinates v with
/// P_V Q(lift(u, v)) = 0, near the equilibrium. `u` is the absolute macro
/// coordinate vector (length r). Throws NonConvergence.
struct GraphSolve {
  Vector v;        // micro coordinates, length n-r
  int iterations;
  double residual;
};
GraphSolve solve_equilibrium_graph(const ChapmanEnskogData& ced,
                                   const Vector& u);

/// f*(u) = P_{Vperp} A (u, v*(u)) in macro coordinates.
Vector compute_flux(const ChapmanEnskogData& ced, const Vector& u);

/// h*(u) = P_{Vperp} A0 (u, v*(u)) for a symmetric positive definite A0.
Vector compute_hstar(const ChapmanEnskogData& ced, const Vector& u,
                     const Matrix& A0);

/// D* under the stored sign convention (see ChapmanEnskogData).
Matrix compute_diffusion(const ChapmanEnskogData& ced);

/// Jacobian of f* by central differences with one Richardson level.
Matrix flux_jacobian(const ChapmanEnskogData& ced, const Vector& u);

/// Jacobian of f* through the implicit function theorem applied to the
/// equilibrium graph (v*' = -(P_V Q'|_V)^{-1} P_V Q'|_{Vperp}); exact up to
/// the graph solve, used on per-node hot paths. Agrees with flux_jacobian
/// to the FD truncation error.
Matrix flux_jacobian_ift(const ChapmanEnskogData& ced, const Vector& u);

/// Sorted eigenvalues of f*'(u) (IFT Jacobian); the cheap sampler behind
/// monotonicity scans along profiles.
Vector characteristic_speeds(const ChapmanEnskogData& ced, const Vector& u);

/// Jacobian of v* by central differences (tangency probe: zero at u_bar).
Matrix vstar_jacobian(const ChapmanEnskogData& ced, const Vector& u);

struct CharacteristicData {
  Vector u;        // base point, macro coordinates
  Vector lambdas;  // ascending eigenvalues of f*'(u)
  Vector r_bar;    // unit eigenvector of lambda_p, first nonzero entry > 0
  int p = 0;       // selected characteristic (0-based)
  double Lambda = 0.0;  // r.f*''(u)(r,r)
  double delta = 0.0;   // r.D* r
};

/// Eigen-structure of f*'(u) with the genuine-nonlinearity coefficient.
/// Throws NonSimpleEigenvalue when the selected eigenvalue gap is below
/// 1e-6 times the spectral radius.
CharacteristicData compute_characteristics(const ChapmanEnskogData& ced,
                                           const Vector& u, int p);

/// Hard-sphere Navier-Stokes reference coefficients.
struct NsReference {
  double mu;
  double kappa;
  double c;           // sound speed
  double lambdas[5];  // v1 - c, v1, v1, v1, v1 + c
  double Gamma;       // 2/3
  double c_v;         // 3/4
};
NsReference ns_reference(double T, double rho, double e, double v1);

/// CSV: one row (u1, lambda_1..lambda_r, Lambda, delta) per sweep point
/// u = u_bar + u1 * r_bar.
std::string characteristic_sweep_csv(const ChapmanEnskogData& ced,
                                     const std::vector<double>& u1_values,
                                     int p);

}  // namespace kinshock

#endif  // KINSHOCK_CHAPMAN_ENSKOG_HPP_
