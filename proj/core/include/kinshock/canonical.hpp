#ifndef KINSHOCK_CANONICAL_HPP_
#define KINSHOCK_CANONICAL_HPP_

#include <string>
#include <vector>

#include "kinshock/grid.hpp"
#include "kinshock/model.hpp"

namespace kinshock {

/// Block decomposition of the steady equation in the (Vperp, V) splitting,
/// with the micro linearization E and (optionally) the E-normalization
/// transform applied. Micro coordinates after normalization are v = S v_raw,
/// which makes E = -I exactly.
struct MacroMicroSplit {
  Matrix A11, A12, A21, A22;
  Matrix E;
  Matrix S, S_inv;  // normalization pair; identity before normalize_E
  bool normalized = false;
};

MacroMicroSplit macro_micro_split(const KineticModel& model);

/// Change of variables v -> (-E)^{1/2} v combined with left-multiplication of
/// the micro equation by (-E)^{-1/2}; afterwards E = -I exactly.
MacroMicroSplit normalize_E(const MacroMicroSplit& split);

/// Kernel/range splitting of A11 with the operators of the reduction.
struct A11Decomposition {
  int m = 0;
  Matrix ker_basis;  // r x m, orthonormal (K)
  Matrix im_basis;   // r x (r-m), orthonormal
  Matrix T12;        // m x (n-r): P_ker A12
  Matrix Atilde12;   // (r-m) x (n-r): P_im A12
  Matrix Atilde11;   // (r-m) x (r-m), invertible
  double t12_min_sv = 0.0;      // smallest singular value of T12 (m > 0)
  double atilde11_min_abs = 0.0;
  double ker_angle = 0.0;       // principal angle im T12 vs ker A11
};

/// SVD-based split; verifies Lemma 2.2 (T12* injective, im T12 = ker A11,
/// Atilde11 invertible) and throws with residuals on failure.
A11Decomposition decompose_A11(const MacroMicroSplit& split);

/// The canonical system of Lemma 1.1 in coordinates
///   z = (w_c, w_h), w_c = (u1 - Gamma1 vt, -(That^T)^{-1} v1,
///                          ut + Atilde11^{-1} Atilde12 vt),  w_h = vt,
/// satisfying w_c' = J w_c + Qc(z,z) and Gamma0 w_h' = -w_h + Qh(z,z).
struct CanonicalSystem {
  int n = 0, r = 0, m = 0;
  int dim_c = 0, dim_h = 0;
  Matrix Gamma0;       // dim_h x dim_h, symmetric one-to-one
  Matrix Gamma1;       // m x dim_h
  Matrix J;            // dim_c x dim_c nilpotent (I_m block at (1,2))
  Matrix That;         // m x m invertible: T12 restricted to V1
  Matrix T12;          // m x (n-r)
  Matrix Atilde11_inv; // (r-m) x (r-m)
  Matrix Atilde12;     // (r-m) x (n-r)
  Matrix ker_basis;    // r x m, kernel of A11 within Vperp coordinates
  Matrix im_basis;     // r x (r-m)
  Matrix V1;           // (n-r) x m: im T12* within normalized V coordinates
  Matrix Vt;           // (n-r) x (n-r-m): ker T12
  Matrix S, S_inv;     // micro normalization pair
  Matrix P;            // z -> ambient offset, n x n
  Matrix C;            // ambient offset -> z, n x n
  Matrix W;            // ambient residual -> canonical residual, n x n
  Vector u_bar;
  std::vector<Matrix> Qtilde;  // canonical quadratic tensor, n slices over z
  double gamma0_min_abs_eig = 0.0;
  double reduction_residual = 0.0;  // max defect of the W/P/J identities

  Vector to_canonical(const Vector& state) const { return C * (state - u_bar); }
  Vector from_canonical(const Vector& z) const { return u_bar + P * z; }

  Vector wc(const Vector& z) const { return z.head(dim_c); }
  Vector wh(const Vector& z) const { return z.tail(dim_h); }

  /// Quadratic forcing (Qc; Qh) evaluated at z (or its symmetric bilinear).
  Vector apply_Q(const Vector& z) const;
  Vector apply_Q(const Vector& z1, const Vector& z2) const;
  Vector Qc(const Vector& z) const { return apply_Q(z).head(dim_c); }
  Vector Qh(const Vector& z) const { return apply_Q(z).tail(dim_h); }
};

/// Assemble the canonical system; verifies the defining identities
/// (round-trip coordinates, W A P and W Q' P block structure, Gamma0
/// symmetric and one-to-one) and throws on failure.
CanonicalSystem build_canonical(const MacroMicroSplit& split,
                                const A11Decomposition& dec,
                                const KineticModel& model);

/// Full reduction pipeline.
CanonicalSystem reduce_to_canonical(const KineticModel& model);

/// Max over the grid of |w_c' - J w_c - Qc| + |Gamma0 w_h' + w_h - Qh| for a
/// trajectory given in original (full-state) coordinates; derivatives by
/// centered differences.
double residual_canonical(const CanonicalSystem& canon,
                          const GridFunction& trajectory);

/// Max over the grid of |P_{Vperp} A state(x) - q|.
double conservation_check(const KineticModel& model,
                          const GridFunction& trajectory, const Vector& q);

/// Structured-text serialization of the canonical data (same encoding rules
/// as models).
std::string serialize_canonical(const CanonicalSystem& canon);
CanonicalSystem parse_canonical(const std::string& text);

}  // namespace kinshock

#endif  // KINSHOCK_CANONICAL_HPP_
