#ifndef KINSHOCK_PROFILES_HPP_
#define KINSHOCK_PROFILES_HPP_

#include "kinshock/chapman_enskog.hpp"
#include "kinshock/manifolds.hpp"

namespace kinshock {

class NoSolution : public SolverError {
 public:
  explicit NoSolution(const std::string& what) : SolverError(what) {}
};
class NoConnection : public SolverError {
 public:
  explicit NoConnection(const std::string& what) : SolverError(what) {}
};
class NotGenuinelyNonlinear : public SolverError {
 public:
  explicit NotGenuinelyNonlinear(const std::string& what) : SolverError(what) {}
};
class ShootingFailure : public SolverError {
 public:
  explicit ShootingFailure(const std::string& what) : SolverError(what) {}
};

/// Endstate pair solving the Rankine-Hugoniot condition f*(u-) = f*(u+) = q.
struct RHSolution {
  Vector q;
  Vector u_minus, u_plus;  // macro coordinates; u_minus carries lambda_p > 0
  double eps = 0.0;        // |u_plus - u_minus|
  bool lax_type = false;
  double residual = 0.0;   // max |f*(u+-) - q|
};

/// Newton from seeds along +-r_bar; dedupes to rh_tol; classifies Lax type by
/// lambda_p(u-) > 0 > lambda_p(u+). Throws NoSolution / NonConvergence.
std::vector<RHSolution> solve_rankine_hugoniot(const ChapmanEnskogData& ced,
                                               const Vector& q, int p,
                                               double rh_tol = 1e-12);

/// Exact Burgers connection eta(x) = -eps tanh(Lambda eps x / (2 delta)).
GridFunction exact_burgers(double eps, double Lambda, double delta,
                           const GridFunction& x_grid);

/// Scalar Burgers normal form on the center-manifold fiber with q~ = 0.
struct BurgersNormalForm {
  double delta = 0.0;   // T12 T12* (= r.D* r)
  double Lambda = 0.0;
  double q1 = 0.0;      // = Lambda eps^2 / 2 (see sign_convention)
  double zeta = 0.0;    // conserved w_{c,2} value: -q1 / delta
  double eps = 0.0;
  double remainder_bound = 0.0;  // measured cubic-remainder constant
  Vector q;             // full flux constant realizing q~ = 0
  int p = 0;
  std::string sign_convention;
};

/// Assemble the normal form for amplitude parameter eps (endstates near
/// +-eps in the u1 coordinate). Requires m = 1 and |Lambda| above threshold.
BurgersNormalForm build_normal_form(const CanonicalSystem& canon,
                                    const ChapmanEnskogData& ced, double eps,
                                    int p,
                                    const CenterGraphTaylor* taylor = nullptr);

/// Scalar field of the one-dimensional fiber: y -> [J w_c + Qc(z)]_1 at
/// w_c = (y, zeta, 0), w_h = Xi(w_c).
double fiber_field(const CanonicalSystem& canon, const CenterGraphTaylor& taylor,
                   double zeta, double y);

struct RelaxationProfile {
  GridFunction states;  // full kinetic states, n x N
  GridFunction fiber;   // fiber coordinate y(x), 1 x N
  double y_left = 0.0, y_right = 0.0;  // fiber equilibria (x -> -inf, +inf)
};

struct ProfileParams {
  double equil_clip = 1e-13;  // endstate approach tolerance
  double center_x = 0.0;      // translation normalization point
};

/// Integrate the fiber ODE between its equilibria and reconstruct full
/// states through the center graph. Translation normalized so the u1
/// midpoint crossing sits at x = center_x. Throws NoConnection.
RelaxationProfile compute_relaxation_profile(const CanonicalSystem& canon,
                                             const CenterGraphTaylor& taylor,
                                             const BurgersNormalForm& nf,
                                             const GridFunction& x_grid,
                                             const ProfileParams& params = {});

/// Viscous (Chapman-Enskog) profile D* u' = f*(u) - q by shooting from the
/// unstable direction at u-, same translation normalization.
GridFunction compute_viscous_profile(const ChapmanEnskogData& ced,
                                     const RHSolution& rh,
                                     const GridFunction& x_grid, int p,
                                     const ProfileParams& params = {});

/// Per-amplitude comparison data.
struct ProfileComparison {
  double eps = 0.0;
  double mu_hat = 0.0;  // weight rate used in the sup norms
  std::vector<double> u_diff_weighted_sup;  // index j = derivative order
  std::vector<double> v_diff_weighted_sup;
  double endstate_weighted_sup = 0.0;  // e^{mu|x|} |u_REL - u_+-|
  double eta_endstate_gap = 0.0;       // |eta_+- - etabar_+-|
  bool lambda_monotone_rel = false;
  bool lambda_monotone_ce = false;
  double burgers_residual = 0.0;
  double conservation = 0.0;
  double rh_residual = 0.0;
  // grids for emission
  GridFunction x_grid, u_rel, v_rel, u_ce, v_star_ce, eta_bar;
  Vector lambda_rel, lambda_ce;
};

struct ShockProfileReport {
  std::vector<ProfileComparison> per_eps;
  std::vector<double> order_u_diff;  // fitted order per derivative j
  std::vector<double> order_v_diff;
  double order_endstate = 0.0;
  double order_eta_gap = 0.0;
  bool orders_pass = false;
  bool monotone_pass = false;
  std::string normalization;  // translation normalization record
};

struct CompareParams {
  std::vector<double> eps_sweep{0.02, 0.04, 0.08, 0.16};
  int nodes = 4001;
  double domain_rate_widths = 10.0;  // X = widths / (Lambda eps / delta)
  double order_tolerance = 0.3;
  ProfileParams profile;
};

/// Single-amplitude comparison: profiles, weighted sup norms, monotonicity,
/// conservation. Building block of the sweep; safe to run concurrently for
/// distinct eps.
ProfileComparison compute_profile_comparison(const CanonicalSystem& canon,
                                             const ChapmanEnskogData& ced,
                                             const CenterGraphTaylor& taylor,
                                             int p, double eps,
                                             const CompareParams& params = {});

/// Order fits across a completed sweep (entries ordered by eps).
ShockProfileReport assemble_profile_report(std::vector<ProfileComparison> sweep,
                                           const CompareParams& params = {});

/// Full amplitude sweep with weighted-difference sup norms and log-log
/// order fits (Chapman-Enskog closeness estimates at desk scale).
ShockProfileReport compare_profiles(const CanonicalSystem& canon,
                                    const ChapmanEnskogData& ced,
                                    const CenterGraphTaylor& taylor, int p,
                                    const CompareParams& params = {});

struct BlowupCheck {
  double forcing_sup = 0.0;   // sup |deta/dxt - (eta^2 - 1)/2|
  GridFunction rescaled;      // eta/eps on the stretched grid
};

/// Rescale a fiber trajectory to blowup variables and measure the O(eps)
/// forcing of the rescaled Burgers equation.
BlowupCheck blowup_rescale_check(const GridFunction& eta, double eps,
                                 double Lambda, double delta);

}  // namespace kinshock

#endif  // KINSHOCK_PROFILES_HPP_
