#include "kinshock/profiles.hpp"

#include <cmath>

#include "kinshock/ode.hpp"

namespace kinshock {

std::vector<RHSolution> solve_rankine_hugoniot(const ChapmanEnskogData& ced,
                                               const Vector& q, int p,
                                               double rh_tol) {
  const auto base = compute_characteristics(ced, ced.u_bar_macro, p);
  const Vector qbar = compute_flux(ced, ced.u_bar_macro);
  const double dq = (q - qbar).norm();
  // Endstate distance scale: the normal form gives u1 ~ sqrt(2 q1 / Lambda).
  const double q1_est = base.r_bar.dot(q - qbar);
  const double amp =
      (std::abs(base.Lambda) > 1e-8)
          ? std::sqrt(std::abs(2.0 * q1_est / base.Lambda)) + std::sqrt(rh_tol)
          : std::sqrt(std::max(dq, 1e-14));

  auto newton = [&](Vector u) -> std::optional<Vector> {
    try {
      for (int it = 0; it < 50; ++it) {
        const Vector f = compute_flux(ced, u) - q;
        if (f.norm() <= rh_tol) return u;
        const Matrix jac = flux_jacobian(ced, u);
        Eigen::FullPivLU<Matrix> lu(jac);
        if (lu.rank() < ced.r()) return std::nullopt;  // singular at the fold
        const Vector step = lu.solve(f);
        if (!step.allFinite() || step.norm() > ced.basin_radius)
          return std::nullopt;
        u -= step;
      }
    } catch (const SolverError&) {
      return std::nullopt;  // iterate left the equilibrium-graph basin
    }
    return std::nullopt;
  };

  std::vector<Vector> roots;
  std::vector<double> seeds{1.0, 0.5, 1.5, 0.25, 0.75, 1.25};
  for (double s : seeds) {
    for (double sign : {+1.0, -1.0}) {
      const Vector u0 = ced.u_bar_macro + sign * s * amp * base.r_bar;
      auto root = newton(u0);
      if (!root) continue;
      bool dup = false;
      for (const auto& rt : roots)
        if ((rt - *root).norm() <= 100 * rh_tol + 1e-10 * amp) dup = true;
      if (!dup) roots.push_back(*root);
    }
  }
  if (roots.empty())
    throw NoSolution("Rankine-Hugoniot: no root near u_bar for this q");

  std::vector<RHSolution> out;
  if (roots.size() == 1) {
    RHSolution sol;
    sol.q = q;
    sol.u_minus = sol.u_plus = roots[0];
    sol.eps = 0.0;
    sol.lax_type = false;
    sol.residual = (compute_flux(ced, roots[0]) - q).norm();
    out.push_back(sol);
    return out;
  }
  if (roots.size() > 2)
    throw NoSolution("Rankine-Hugoniot: more than two local roots");

  const double l0 = compute_characteristics(ced, roots[0], p).lambdas[p];
  const double l1 = compute_characteristics(ced, roots[1], p).lambdas[p];
  RHSolution sol;
  sol.q = q;
  sol.u_minus = (l0 > l1) ? roots[0] : roots[1];
  sol.u_plus = (l0 > l1) ? roots[1] : roots[0];
  sol.eps = (sol.u_plus - sol.u_minus).norm();
  const double lm = std::max(l0, l1), lp = std::min(l0, l1);
  sol.lax_type = (lm > 0.0) && (lp < 0.0);
  sol.residual = std::max((compute_flux(ced, sol.u_minus) - q).norm(),
                          (compute_flux(ced, sol.u_plus) - q).norm());
  out.push_back(sol);
  return out;
}

GridFunction exact_burgers(double eps, double Lambda, double delta,
                           const GridFunction& x_grid) {
  if (eps <= 0 || delta <= 0 || Lambda == 0.0)
    throw SolverError("exact_burgers: need eps, delta > 0 and Lambda != 0");
  GridFunction out = x_grid;
  out.values = Matrix::Zero(1, x_grid.size());
  for (int i = 0; i < x_grid.size(); ++i)
    out.values(0, i) = -eps * std::tanh(Lambda * eps * x_grid.x(i) / (2 * delta));
  return out;
}

double fiber_field(const CanonicalSystem& canon, const CenterGraphTaylor& taylor,
                   double zeta, double y) {
  if (canon.m != 1)
    throw SolverError("fiber_field: needs an m = 1 canonical system");
  Vector wc = Vector::Zero(canon.dim_c);
  wc[0] = y;
  wc[1] = zeta;
  Vector z(canon.n);
  z.head(canon.dim_c) = wc;
  z.tail(canon.dim_h) = taylor.eval(wc);
  const Vector q = canon.apply_Q(z);
  return (canon.J * wc + q.head(canon.dim_c))[0];
}

BurgersNormalForm build_normal_form(const CanonicalSystem& canon,
                                    const ChapmanEnskogData& ced, double eps,
                                    int p, const CenterGraphTaylor* taylor) {
  if (canon.m != 1)
    throw SolverError("build_normal_form: requires m = 1");
  const auto cd = compute_characteristics(ced, ced.u_bar_macro, p);
  const double radius = cd.lambdas.cwiseAbs().maxCoeff();
  if (std::abs(cd.Lambda) < 1e-4 * std::max(radius, 1.0))
    throw NotGenuinelyNonlinear("Lambda below genuine-nonlinearity threshold");

  BurgersNormalForm nf;
  nf.p = p;
  nf.eps = eps;
  nf.Lambda = cd.Lambda;
  nf.delta = (canon.That * canon.That.transpose())(0, 0);
  // Connections of u1' = (-q1 + Lambda u1^2/2)/delta + h.o.t. need real
  // equilibria u1 ~ +-sqrt(2 q1/Lambda): the proof's convention q1 Lambda > 0.
  nf.q1 = cd.Lambda * eps * eps / 2.0;
  nf.sign_convention =
      "q1 = +Lambda eps^2/2 (Lemma proof convention; connection exists for "
      "q1 Lambda > 0 under u1' = (-q1 + Lambda u1^2/2)/delta)";
  nf.zeta = -nf.q1 / nf.delta;

  // Flux constant with q~ = 0: Delta q = K q1 + Rim (Atilde12 V1 That^{-1} q1).
  const Vector qbar =
      ced.model.vperp_basis.transpose() * (ced.model.A * ced.model.u_bar);
  Vector q1v(1);
  q1v[0] = nf.q1;
  Vector dq = canon.ker_basis * q1v;
  if (canon.r - canon.m > 0)
    dq += canon.im_basis *
          (canon.Atilde12 * canon.V1 * canon.That.partialPivLu().solve(q1v));
  nf.q = qbar + dq;

  if (eps > 0.0) {
    CenterGraphTaylor local;
    const CenterGraphTaylor* ty = taylor;
    if (!ty) {
      local = center_taylor(canon, 3);
      ty = &local;
    }
    double worst = 0.0;
    for (int i = -40; i <= 40; ++i) {
      const double y = 1.5 * eps * i / 40.0;
      const double rem = fiber_field(canon, *ty, nf.zeta, y) -
                         (-nf.q1 + nf.Lambda * y * y / 2.0) / nf.delta;
      const double gauge =
          (std::abs(y) * y * y + std::abs(nf.q1) * std::abs(y) + nf.q1 * nf.q1) /
              nf.delta +
          1e-300;
      worst = std::max(worst, std::abs(rem) / gauge);
    }
    nf.remainder_bound = worst;
  }
  return nf;
}

namespace {

// Scalar observable used for translation normalization of both profiles:
// the r_bar component of the macro state.
double u1_observable(const Vector& macro, const Vector& r_bar) {
  return r_bar.dot(macro);
}

Vector reconstruct_state(const CanonicalSystem& canon,
                         const CenterGraphTaylor& taylor, double zeta,
                         double y) {
  Vector wc = Vector::Zero(canon.dim_c);
  wc[0] = y;
  wc[1] = zeta;
  Vector z(canon.n);
  z.head(canon.dim_c) = wc;
  z.tail(canon.dim_h) = taylor.eval(wc);
  return canon.from_canonical(z);
}

}  // namespace

RelaxationProfile compute_relaxation_profile(const CanonicalSystem& canon,
                                             const CenterGraphTaylor& taylor,
                                             const BurgersNormalForm& nf,
                                             const GridFunction& x_grid,
                                             const ProfileParams& params) {
  if (taylor.order < 3)
    throw SolverError("relaxation profile: Taylor order must be >= 3");
  auto F = [&](double y) {
    return fiber_field(canon, taylor, nf.zeta, y);
  };

  if (nf.eps == 0.0) {
    RelaxationProfile out;
    out.fiber = x_grid;
    out.fiber.values = Matrix::Zero(1, x_grid.size());
    out.states = x_grid;
    out.states.values.resize(canon.n, x_grid.size());
    const Vector eq = reconstruct_state(canon, taylor, nf.zeta, 0.0);
    for (int i = 0; i < x_grid.size(); ++i) out.states.values.col(i) = eq;
    out.y_left = out.y_right = 0.0;
    return out;
  }

  // Fiber equilibria by sign-change bracketing on [-2 eps, 2 eps].
  const double span = 2.0 * nf.eps;
  const int scan = 801;
  std::vector<double> roots;
  double yprev = -span, fprev = F(yprev);
  for (int i = 1; i < scan; ++i) {
    const double y = -span + 2.0 * span * i / (scan - 1);
    const double f = F(y);
    if (fprev == 0.0) roots.push_back(yprev);
    if (fprev * f < 0.0) {
      double lo = yprev, hi = y, flo = fprev;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = F(mid);
        if (fm == 0.0) { lo = hi = mid; break; }
        if (flo * fm < 0) hi = mid; else { lo = mid; flo = fm; }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    yprev = y;
    fprev = f;
  }
  if (roots.size() < 2)
    throw NoConnection("fiber field has no sign change: no Lax connection");
  const double y_lo = roots.front(), y_hi = roots.back();
  const double fmid = F(0.5 * (y_lo + y_hi));
  // decreasing connection runs from y_hi at -inf to y_lo at +inf
  const bool decreasing = fmid < 0.0;

  // Translation normalization: the u1 coordinate (kernel component of the
  // macro offset, u1 = w_c1 + Gamma1 w_h) crosses the midpoint of its
  // endstate values at x = center_x. Solve for y0 by bisection.
  auto u1_of = [&](double y) {
    const Vector state = reconstruct_state(canon, taylor, nf.zeta, y);
    const Vector z = canon.to_canonical(state);
    Vector u1 = z.head(1);
    if (canon.Gamma1.size() > 0) u1 += canon.Gamma1 * z.tail(canon.dim_h);
    return u1[0];
  };
  const double mid_target = 0.5 * (u1_of(y_lo) + u1_of(y_hi));
  double lo = std::min(y_lo, y_hi), hi = std::max(y_lo, y_hi);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (u1_of(mid) < mid_target) lo = mid; else hi = mid;
  }
  const double y0 = 0.5 * (lo + hi);

  // Integrate the scalar autonomous fiber ODE across the grid.
  RelaxationProfile out;
  out.fiber = x_grid;
  out.fiber.values = Matrix::Zero(1, x_grid.size());
  out.y_left = decreasing ? y_hi : y_lo;   // value as x -> -inf
  out.y_right = decreasing ? y_lo : y_hi;  // value as x -> +inf
  OdeOptions opts;
  opts.initial_step = x_grid.h;
  opts.max_step = 50.0 * x_grid.h;
  Dopri5 ode(
      [&](double, const Vector& y) {
        Vector d(1);
        d[0] = F(y[0]);
        return d;
      },
      opts);
  const int i0 = x_grid.nearest_index(params.center_x);
  Vector y(1);
  y[0] = y0;
  out.fiber.values(0, i0) = y0;
  // forward
  for (int i = i0; i + 1 < x_grid.size(); ++i) {
    y = ode.integrate(x_grid.x(i), x_grid.x(i + 1), y);
    out.fiber.values(0, i + 1) = y[0];
  }
  // backward
  y[0] = y0;
  for (int i = i0; i > 0; --i) {
    y = ode.integrate(x_grid.x(i), x_grid.x(i - 1), y);
    out.fiber.values(0, i - 1) = y[0];
  }

  out.states = x_grid;
  out.states.values.resize(canon.n, x_grid.size());
  for (int i = 0; i < x_grid.size(); ++i)
    out.states.values.col(i) =
        reconstruct_state(canon, taylor, nf.zeta, out.fiber.values(0, i));
  return out;
}

GridFunction compute_viscous_profile(const ChapmanEnskogData& ced,
                                     const RHSolution& rh,
                                     const GridFunction& x_grid, int p,
                                     const ProfileParams& params) {
  Eigen::SelfAdjointEigenSolver<Matrix> ed(ced.D_star);
  if (ed.eigenvalues().minCoeff() <= 0.0)
    throw SolverError("viscous profile: D* must be positive definite");
  if (!rh.lax_type)
    throw ShootingFailure("viscous profile: endstates are not a Lax pair");
  const Eigen::LDLT<Matrix> dstar_ldlt(ced.D_star);
  auto field = [&](double, const Vector& u) -> Vector {
    return dstar_ldlt.solve(compute_flux(ced, u) - rh.q);
  };

  // Unstable direction and rate at u-.
  const Matrix m_minus = dstar_ldlt.solve(flux_jacobian(ced, rh.u_minus));
  Eigen::EigenSolver<Matrix> es(m_minus);
  int iu = -1;
  for (int i = 0; i < m_minus.rows(); ++i) {
    if (es.eigenvalues()[i].real() > 0 &&
        std::abs(es.eigenvalues()[i].imag()) <
            1e-10 * std::abs(es.eigenvalues()[i].real()) &&
        (iu < 0 || es.eigenvalues()[i].real() < es.eigenvalues()[iu].real()))
      iu = i;
  }
  if (iu < 0)
    throw ShootingFailure("viscous profile: no unstable direction at u-");
  const double kappa = es.eigenvalues()[iu].real();
  Vector e = es.eigenvectors().col(iu).real();
  e /= e.norm();
  if (e.dot(rh.u_plus - rh.u_minus) < 0) e = -e;

  const auto base = compute_characteristics(ced, ced.u_bar_macro, p);
  const double mid =
      0.5 * (u1_observable(rh.u_minus, base.r_bar) +
             u1_observable(rh.u_plus, base.r_bar));

  const double X = params.center_x - x_grid.x0;  // distance seed -> crossing
  if (X <= 0)
    throw ShootingFailure("viscous profile: center must lie inside the grid");
  OdeOptions opts;
  opts.initial_step = x_grid.h;
  opts.max_step = 50.0 * x_grid.h;
  Dopri5 ode(field, opts);

  // Signed observable normalized so it increases from seed toward u+; the
  // u1 component decreases across a Lax shock when Lambda > 0.
  const double sgn =
      (u1_observable(rh.u_plus - rh.u_minus, base.r_bar) > 0) ? 1.0 : -1.0;
  auto obs = [&](const Vector& u) {
    return sgn * (u1_observable(u, base.r_bar) - mid);
  };

  // Crossing time of the observable from the seed state; -1 if beyond cap.
  auto obs_time = [&](double s, double cap) -> double {
    Vector u = rh.u_minus + s * e;
    double t = 0.0;
    const double step = std::max(x_grid.h, cap / 1024.0);
    double prev = obs(u);
    if (prev >= 0)
      throw ShootingFailure("viscous profile: seed already past the crossing");
    while (t < cap) {
      Vector unext = ode.integrate(t, t + step, u);
      const double val = obs(unext);
      if (prev < 0 && val >= 0) {
        // refine by bisection within [t, t+step]
        double lo = 0.0, hi = step;
        for (int it = 0; it < 60; ++it) {
          const double m2 = 0.5 * (lo + hi);
          if (obs(ode.integrate(t, t + m2, u)) < 0) lo = m2; else hi = m2;
        }
        return t + 0.5 * (lo + hi);
      }
      u = unext;
      prev = val;
      t += step;
      if (u.norm() > 1e3 * (1.0 + rh.u_minus.norm()))
        throw ShootingFailure("viscous profile: trajectory escaped");
    }
    return -1.0;
  };

  // Calibrate the seed magnitude so the crossing sits at tau = X.
  double s = 1e-6 * rh.eps;
  const double cap = 4.0 * X + 16.0 / kappa;
  double tstar = -1.0;
  for (int attempt = 0; attempt < 12; ++attempt) {
    tstar = obs_time(s, cap);
    if (tstar < 0) {
      s *= std::exp(kappa * X / 2);  // too far out: crossing beyond cap
      continue;
    }
    if (std::abs(tstar - X) < 1e-9 * std::max(1.0, X)) break;
    s *= std::exp(kappa * (tstar - X));
    if (!(s > 0) || !std::isfinite(s))
      throw ShootingFailure("viscous profile: seed calibration diverged");
  }
  if (tstar < 0 || std::abs(tstar - X) > 1e-6 * std::max(1.0, X))
    throw ShootingFailure("viscous profile: crossing calibration failed");

  // Final sweep across the grid from the calibrated seed.
  GridFunction out = x_grid;
  out.values.resize(ced.r(), x_grid.size());
  Vector u = rh.u_minus + s * e;
  out.values.col(0) = u;
  for (int i = 0; i + 1 < x_grid.size(); ++i) {
    u = ode.integrate(x_grid.x(i), x_grid.x(i + 1), u);
    out.values.col(i + 1) = u;
  }
  return out;
}

namespace {

bool strictly_decreasing(const Vector& v) {
  for (int i = 0; i + 1 < v.size(); ++i)
    if (!(v[i + 1] < v[i])) return false;
  return true;
}

}  // namespace

ProfileComparison compute_profile_comparison(const CanonicalSystem& canon,
                                             const ChapmanEnskogData& ced,
                                             const CenterGraphTaylor& taylor,
                                             int p, double eps,
                                             const CompareParams& params) {
  const int jmax = std::max(0, taylor.order - 2);
  {
    ProfileComparison pc;
    pc.eps = eps;
    const auto nf = build_normal_form(canon, ced, eps, p, &taylor);
    auto sols = solve_rankine_hugoniot(ced, nf.q, p);
    if (sols.size() != 1 || sols[0].eps == 0.0)
      throw NoSolution("compare_profiles: expected a nontrivial RH pair");
    const RHSolution& rh = sols[0];
    pc.rh_residual = rh.residual;

    const double mu_full = std::abs(nf.Lambda) * eps / nf.delta;
    pc.mu_hat = 0.5 * mu_full;
    const double X = params.domain_rate_widths / mu_full;
    const double cx = params.profile.center_x;
    GridFunction grid = make_grid(cx - X, cx + X, params.nodes, 0);

    const auto relax =
        compute_relaxation_profile(canon, taylor, nf, grid, params.profile);
    pc.u_ce = compute_viscous_profile(ced, rh, grid, p, params.profile);
    pc.x_grid = grid;

    const int nn = grid.size();
    pc.u_rel = grid;
    pc.u_rel.values.resize(ced.r(), nn);
    pc.v_rel = grid;
    pc.v_rel.values.resize(ced.model.n - ced.r(), nn);
    for (int i = 0; i < nn; ++i) {
      pc.u_rel.values.col(i) = ced.model.macro_coords(relax.states.values.col(i));
      pc.v_rel.values.col(i) = ced.model.micro_coords(relax.states.values.col(i));
    }
    pc.v_star_ce = grid;
    pc.v_star_ce.values.resize(ced.model.n - ced.r(), nn);
    for (int i = 0; i < nn; ++i)
      pc.v_star_ce.values.col(i) =
          solve_equilibrium_graph(ced, pc.u_ce.values.col(i)).v;

    pc.eta_bar = exact_burgers(eps, nf.Lambda, nf.delta, grid);

    // Weighted sup norms of the differences and their derivatives.
    Matrix du = pc.u_rel.values - pc.u_ce.values;
    Matrix dv = pc.v_rel.values - pc.v_star_ce.values;
    for (int j = 0; j <= jmax && j <= 2; ++j) {
      const Matrix dju = derivative_high_order(du, grid.h, j);
      const Matrix djv = derivative_high_order(dv, grid.h, j);
      double su = 0, sv = 0;
      for (int i = 0; i < nn; ++i) {
        const double w = std::exp(pc.mu_hat * std::abs(grid.x(i) - cx));
        su = std::max(su, w * dju.col(i).norm());
        sv = std::max(sv, w * djv.col(i).norm());
      }
      pc.u_diff_weighted_sup.push_back(su);
      pc.v_diff_weighted_sup.push_back(sv);
    }

    // Endstate approach of the relaxation profile.
    double se = 0;
    for (int i = 0; i < nn; ++i) {
      const double x = grid.x(i);
      const Vector& target = (x >= cx) ? rh.u_plus : rh.u_minus;
      const double w = std::exp(pc.mu_hat * std::abs(x - cx));
      se = std::max(se, w * (pc.u_rel.values.col(i) - target).norm());
    }
    pc.endstate_weighted_sup = se;

    // Fiber endstates against the exact Burgers endstates -+eps.
    {
      const double eta_minus = relax.y_left;   // x -> -inf
      const double eta_plus = relax.y_right;   // x -> +inf
      const double bar_minus = eps;            // etabar(-inf) = +eps (Lambda>0)
      const double bar_plus = -eps;
      const double s1 = std::abs(std::abs(eta_minus) - std::abs(bar_minus));
      const double s2 = std::abs(std::abs(eta_plus) - std::abs(bar_plus));
      pc.eta_endstate_gap = std::max(s1, s2);
    }

    // Characteristic speed along both profiles (IFT Jacobian sampler).
    pc.lambda_rel.resize(nn);
    pc.lambda_ce.resize(nn);
    for (int i = 0; i < nn; ++i) {
      pc.lambda_rel[i] = characteristic_speeds(ced, pc.u_rel.values.col(i))[p];
      pc.lambda_ce[i] = characteristic_speeds(ced, pc.u_ce.values.col(i))[p];
    }
    pc.lambda_monotone_rel = strictly_decreasing(pc.lambda_rel);
    pc.lambda_monotone_ce = strictly_decreasing(pc.lambda_ce);

    // Exact Burgers ODE residual from the closed forms.
    double br = 0;
    for (int i = 0; i < nn; ++i) {
      const double x = grid.x(i);
      const double th = std::tanh(nf.Lambda * eps * x / (2 * nf.delta));
      const double eta = -eps * th;
      const double deta = -eps * (1 - th * th) * nf.Lambda * eps / (2 * nf.delta);
      br = std::max(std::abs(nf.delta * deta -
                             nf.Lambda * (eta * eta - eps * eps) / 2.0),
                    br);
    }
    pc.burgers_residual = br;

    pc.conservation = conservation_check(ced.model, relax.states, nf.q);
    return pc;
  }
}

ShockProfileReport assemble_profile_report(std::vector<ProfileComparison> sweep,
                                           const CompareParams& params) {
  ShockProfileReport rep;
  rep.normalization =
      "u1 midpoint crossing at x = " + format_g17(params.profile.center_x);
  rep.per_eps = std::move(sweep);
  if (rep.per_eps.empty()) throw SolverError("profile report: empty sweep");

  // Order fits across the sweep.
  std::vector<double> epses;
  for (const auto& pc : rep.per_eps) epses.push_back(pc.eps);
  const int jcount = static_cast<int>(rep.per_eps[0].u_diff_weighted_sup.size());
  for (int j = 0; j < jcount; ++j) {
    std::vector<double> yu, yv;
    for (const auto& pc : rep.per_eps) {
      yu.push_back(pc.u_diff_weighted_sup[j]);
      yv.push_back(pc.v_diff_weighted_sup[j]);
    }
    rep.order_u_diff.push_back(fit_loglog_slope(epses, yu));
    rep.order_v_diff.push_back(fit_loglog_slope(epses, yv));
  }
  {
    std::vector<double> ye, yg;
    for (const auto& pc : rep.per_eps) {
      ye.push_back(pc.endstate_weighted_sup);
      yg.push_back(std::max(pc.eta_endstate_gap, 1e-300));
    }
    rep.order_endstate = fit_loglog_slope(epses, ye);
    rep.order_eta_gap = fit_loglog_slope(epses, yg);
  }
  rep.orders_pass = true;
  const double tolr = params.order_tolerance;
  for (int j = 0; j < jcount; ++j) {
    if (rep.order_u_diff[j] < (j + 2) - tolr) rep.orders_pass = false;
    if (rep.order_v_diff[j] < (j + 2) - tolr) rep.orders_pass = false;
  }
  if (rep.order_endstate < 1.0 - tolr) rep.orders_pass = false;
  rep.monotone_pass = true;
  for (const auto& pc : rep.per_eps)
    if (!pc.lambda_monotone_rel || !pc.lambda_monotone_ce)
      rep.monotone_pass = false;
  return rep;
}

ShockProfileReport compare_profiles(const CanonicalSystem& canon,
                                    const ChapmanEnskogData& ced,
                                    const CenterGraphTaylor& taylor, int p,
                                    const CompareParams& params) {
  std::vector<ProfileComparison> sweep;
  for (double eps : params.eps_sweep)
    sweep.push_back(
        compute_profile_comparison(canon, ced, taylor, p, eps, params));
  return assemble_profile_report(std::move(sweep), params);
}

BlowupCheck blowup_rescale_check(const GridFunction& eta, double eps,
                                 double Lambda, double delta) {
  if (eps <= 0 || delta <= 0)
    throw SolverError("blowup_rescale_check: eps, delta must be positive");
  if (Lambda == 0.0)
    throw NotGenuinelyNonlinear("blowup rescale needs Lambda != 0");
  BlowupCheck out;
  const double stretch = Lambda * eps / delta;  // xt = stretch * x
  const int nn = eta.size();
  out.rescaled.h = std::abs(stretch) * eta.h;
  out.rescaled.x0 = (stretch > 0) ? stretch * eta.x0
                                  : stretch * eta.x_end();
  out.rescaled.values.resize(1, nn);
  for (int i = 0; i < nn; ++i) {
    const int src = (stretch > 0) ? i : (nn - 1 - i);
    out.rescaled.values(0, i) = eta.values(0, src) / eps;
  }
  const Matrix d = derivative_high_order(out.rescaled.values, out.rescaled.h, 1);
  double sup = 0;
  for (int i = 0; i < nn; ++i) {
    const double v = out.rescaled.values(0, i);
    sup = std::max(sup, std::abs(d(0, i) - 0.5 * (v * v - 1.0)));
  }
  out.forcing_sup = sup;
  return out;
}

}  // namespace kinshock
