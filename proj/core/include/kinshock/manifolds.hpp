#ifndef KINSHOCK_MANIFOLDS_HPP_
#define KINSHOCK_MANIFOLDS_HPP_

#include "kinshock/canonical.hpp"
#include "kinshock/polynomial.hpp"
#include "kinshock/resolvent.hpp"

namespace kinshock {

class RadiusExceeded : public SolverError {
 public:
  explicit RadiusExceeded(const std::string& what) : SolverError(what) {}
};

/// Cutoff-truncated quadratic nonlinearity N_eps(z) = rho(|z|/eps) Q~(z),
/// rho the quintic smoothstep: 1 on [0,1], 0 on [2,inf), C^2 monotone between.
struct TruncatedNonlinearity {
  const CanonicalSystem* canon = nullptr;
  double epsilon = 0.0;
  // sampled bound constants: |N| <= c0 eps^2, |N'| <= c1 eps, |N''| <= c2
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;

  Vector apply(const Vector& z) const;
  static double cutoff(double t);
};

/// Wrap Q~ of a canonical system with truncation radius eps; the bound
/// constants are measured by deterministic sampling and reported.
TruncatedNonlinearity truncate(const CanonicalSystem& canon, double epsilon,
                               std::uint64_t sample_seed = 7);

struct StableParams {
  double X = 0.0;        // domain [0, X]; 0 -> 20 / nu_tilde
  double h = 0.0;        // 0 -> min(5e-3, min|alpha|/20)
  double nu_tilde = 0.0; // target decay rate; 0 -> 0.8 / |Gamma0|
  int max_iter = 60;
  double tol = 1e-12;
  double radius = 0.0;   // admissible |v0|; 0 -> contraction-based default
};

struct StableSolveResult {
  GridFunction trajectory;  // canonical coordinates z(x) on [0, X]
  Vector v0;
  int iterations = 0;
  double contraction_factor = 0.0;
  double fitted_decay_rate = 0.0;
  double nu_tilde = 0.0;
  double radius = 0.0;
};

/// Stable-manifold solve: Picard iteration of the coupled fixed-point system
///   z(t) = -int_t^X e^{J(t-s)} Qc(w,w)(s) ds,
///   u(t) = T_S(t) Pi_S(v0 - Qh(w(0),w(0))) + (Gamma0 d/dx + I)^{-1} Qh(w,w),
/// v0 parametrizing the H1-stable data. Throws ContractionFailure or
/// RadiusExceeded.
StableSolveResult solve_stable(const CanonicalSystem& canon, const Vector& v0,
                               const StableParams& params = {});

/// Graph point of the stable manifold over v0: the trace z(0).
Vector stable_graph_eval(const CanonicalSystem& canon, const Vector& v0,
                         const StableParams& params = {});

/// Taylor coefficients of the center graph w_h = Xi(w_c), orders 2..k.
struct CenterGraphTaylor {
  int order = 0;
  VectorPoly Xi;  // nout = dim_h over dim_c variables
  std::vector<double> residual_by_order;  // coefficient defect, index 0 <-> order 2

  Vector eval(const Vector& wc) const { return Xi.eval(wc); }
  Matrix jacobian(const Vector& wc) const { return poly_jacobian(Xi, wc); }
};

/// Solve the matching relation Xi = -Gamma0 Xi'(w_c)(J w_c + Qc) + Qh order
/// by order; the degree-j linear map is unipotent by nilpotency of J and is
/// inverted by a finite Neumann series.
CenterGraphTaylor center_taylor(const CanonicalSystem& canon, int k);

/// Defect of the matching relation at a point, with the exact quadratic maps:
/// Xi(w_c) + Gamma0 Xi'(w_c)(J w_c + Qc(z)) - Qh(z), z = (w_c, Xi(w_c)).
Vector center_matching_defect(const CanonicalSystem& canon,
                              const CenterGraphTaylor& taylor,
                              const Vector& wc);

struct CenterFixedPointParams {
  double X = 0.0;  // domain [-X, X]; 0 -> 30 * |Gamma0|
  double h = 0.0;  // 0 -> min(5e-3, min|alpha|/20)
  int max_iter = 200;
  double tol = 1e-13;
};

struct CenterFixedPointResult {
  GridFunction trajectory;  // canonical z on [-X, X]
  int iterations = 0;
  double contraction_factor = 0.0;
  Vector graph_value;  // Pi_h w(0)
};

/// Truncated center fixed point (mixed-norm contraction): w(t) =
/// T_c(t) Pi_c w0c + int_0^t T_c(t-s) Pi_c N_eps ds + R Pi_h N_eps.
CenterFixedPointResult solve_center_fixed_point(
    const CanonicalSystem& canon, const Vector& w0c,
    const TruncatedNonlinearity& trunc, const WeightedNorm& mixed,
    const CenterFixedPointParams& params = {});

struct ExpApproximationResult {
  double rate_fit = 0.0;
  bool pass = false;
};

/// Fit the decay rate of d(x) = |Pi_h w(x) - Xi(Pi_c w(x))| over [M, 0.75 X];
/// pass iff the rate reaches nu_tilde. Trajectory must stay within `radius`
/// on the fit window when radius > 0.
ExpApproximationResult exp_approximation_check(const CanonicalSystem& canon,
                                               const GridFunction& trajectory,
                                               const CenterGraphTaylor& taylor,
                                               double nu_tilde, double M = -1.0,
                                               double radius = 0.0);

}  // namespace kinshock

#endif  // KINSHOCK_MANIFOLDS_HPP_
