#ifndef KINSHOCK_MODEL_HPP_
#define KINSHOCK_MODEL_HPP_

#include <optional>
#include <string>
#include <vector>

#include "kinshock/numerics.hpp"

namespace kinshock {

/// Symmetric bilinear map R^n x R^n -> R^n stored as an order-3 coefficient
/// tensor, one n x n slice per output component: B(x,y)_k = x^T slice[k] y.
struct BilinearMap {
  std::vector<Matrix> slices;

  int dim() const { return static_cast<int>(slices.size()); }
  Vector apply(const Vector& x, const Vector& y) const;
  /// Linearization w -> 2 B(u, w) as a matrix.
  Matrix linearization(const Vector& u) const;
  /// Max Frobenius norm over slices; the natural magnitude of the map.
  double scale() const;
};

/// Finite-dimensional kinetic model: steady equation A u' = Q(u) with
/// Q(u) = B(u,u) valued in V, equilibrium u_bar, and the orthogonal
/// macro/micro splitting R^n = Vperp (+) V.
struct KineticModel {
  int n = 0;
  int r = 0;
  Matrix A;            // n x n symmetric transport operator
  Matrix vperp_basis;  // n x r, orthonormal columns spanning Vperp
  Matrix v_basis;      // n x (n-r), orthonormal columns spanning V
  BilinearMap B;
  Vector u_bar;
  std::string label;

  Vector evaluate_Q(const Vector& u) const { return B.apply(u, u); }
  Matrix linearize_Q(const Vector& u) const { return B.linearization(u); }

  /// Macro / raw-micro coordinates of a full state (offsets are up to caller).
  Vector macro_coords(const Vector& state) const {
    return vperp_basis.transpose() * state;
  }
  Vector micro_coords(const Vector& state) const {
    return v_basis.transpose() * state;
  }
  Vector lift(const Vector& macro, const Vector& micro) const {
    return vperp_basis * macro + v_basis * micro;
  }
};

struct HypothesisCheck {
  std::string name;
  bool pass = false;
  double residual = 0.0;
};

struct HypothesisReport {
  std::vector<HypothesisCheck> checks;
  double spectral_gap_delta = 0.0;  // delta of (H2)(ii)
  double min_abs_eig_A = 0.0;

  bool all_passed() const;
  const HypothesisCheck& find(const std::string& name) const;
};

/// Generator parameters for synthetic models realizing (H1)-(H2).
struct SyntheticSpec {
  int target_m = 0;              // dim ker A11, 0 or 1
  std::vector<double> velocities;  // spectrum of A; all nonzero
  std::uint64_t seed = 1;
  double curvature_scale = 0.3;  // magnitude of the quadratic seed G
  bool micro_identity = false;   // E = -I exactly (skip normalization work)
  double micro_eig_lo = 0.7;     // eigenvalue range of -E otherwise
  double micro_eig_hi = 1.5;
  double u_scale = 1.0;
  bool negative_complement = false;  // m=1: remaining A11 block negative definite
  std::optional<Matrix> vperp;   // explicit macro basis overrides the draws
};

/// Construct a model satisfying (H1)-(H2) with dim Vperp = r and prescribed
/// kernel dimension of A11. Throws InvalidModel when the requested structure
/// is infeasible (zero velocity, or m=1 without a sign change).
KineticModel build_synthetic_model(int r, int n, const SyntheticSpec& spec);

/// Verify (H1)-(H2) with residuals; failures are report entries, never throws.
HypothesisReport check_hypotheses(const KineticModel& model, double tol = 1e-10);

/// Structured-text serialization; decimal encoding with 17 significant
/// digits, bit-exact on round trip. v_basis is rederived deterministically.
std::string serialize_model(const KineticModel& model);
KineticModel parse_model(const std::string& text);
void save_model(const KineticModel& model, const std::string& path);
KineticModel load_model(const std::string& path);

}  // namespace kinshock

#endif  // KINSHOCK_MODEL_HPP_
