#include <doctest.h>

#include <cmath>

#include "kinshock/manifolds.hpp"
#include "kinshock/ode.hpp"
#include "kinshock/presets.hpp"

using namespace kinshock;

namespace {

KineticModel flat_m0_model() {
  SyntheticSpec spec;
  spec.velocities = {0.9, -0.7, 0.5, -0.4, 0.3, -0.2};
  spec.target_m = 0;
  spec.seed = 3;
  spec.curvature_scale = 0.0;
  return build_synthetic_model(2, 6, spec);
}

}  // namespace

TEST_CASE("truncated nonlinearity") {
  const auto canon = reduce_to_canonical(make_preset("demo-m1"));
  const double eps = 0.05;
  const auto trunc = truncate(canon, eps);
  Rng rng(2);
  SUBCASE("agrees with Q~ inside the radius, vanishes beyond twice it") {
    for (int trial = 0; trial < 10; ++trial) {
      const Vector inside = 0.9 * eps * rng.unit_vector(canon.n);
      CHECK((trunc.apply(inside) - canon.apply_Q(inside)).norm() == 0.0);
      const Vector outside = 2.5 * eps * rng.unit_vector(canon.n);
      CHECK(trunc.apply(outside).norm() == 0.0);
    }
  }
  SUBCASE("scaled bound constants are uniform over the radius family") {
    std::vector<double> c0s;
    for (int j = 2; j <= 6; ++j)
      c0s.push_back(truncate(canon, std::pow(2.0, -j)).c0);
    const auto [lo, hi] = std::minmax_element(c0s.begin(), c0s.end());
    CHECK(*hi / *lo < 3.0);  // |N_eps| <= c eps^2 with a common c
    CHECK(*hi > 0.0);
  }
}

TEST_CASE("stable manifold solver") {
  const auto canon = reduce_to_canonical(make_preset("demo-m0"));
  const auto decomp = spectral_decompose(canon.Gamma0);
  Rng rng(1);
  Vector dir = stable_projection(decomp, rng.unit_vector(canon.dim_h));
  dir /= dir.norm();
  StableParams params;

  SUBCASE("v0 = 0 gives the zero trajectory") {
    const auto sol = solve_stable(canon, Vector::Zero(canon.dim_h), params);
    CHECK(sol.trajectory.values.norm() == 0.0);
  }
  SUBCASE("linear problem reduces to the stable semigroup") {
    auto linear = canon;
    for (auto& q : linear.Qtilde) q.setZero();
    const double radius = solve_stable(canon, 0.0 * dir, params).radius;
    const Vector v0 = 0.5 * radius * dir;
    const auto sol = solve_stable(linear, v0, params);
    double err = 0.0;
    for (int i = 0; i < sol.trajectory.size(); ++i) {
      const Vector expect = semigroup_apply(decomp, sol.trajectory.x(i), v0);
      err = std::max(err,
                     (sol.trajectory.values.col(i).tail(canon.dim_h) - expect)
                         .norm());
      err = std::max(
          err, sol.trajectory.values.col(i).head(canon.dim_c).norm());
    }
    CHECK(err < 1e-13);
    CHECK(sol.fitted_decay_rate >= decomp.nu() * (1.0 - 1e-6));
  }
  SUBCASE("generic small data: convergence, residual, decay") {
    const double radius = solve_stable(canon, 0.0 * dir, params).radius;
    const auto sol = solve_stable(canon, 0.9 * radius * dir, params);
    CHECK(sol.iterations <= 20);
    CHECK(sol.contraction_factor < 0.5);
    CHECK(sol.fitted_decay_rate >= sol.nu_tilde);
    // substitution into the steady equation
    const auto model = make_preset("demo-m0");
    Matrix states(canon.n, sol.trajectory.size());
    for (int i = 0; i < sol.trajectory.size(); ++i)
      states.col(i) = canon.from_canonical(sol.trajectory.values.col(i));
    const Matrix ds = derivative_fd4(states, sol.trajectory.h);
    double res = 0.0;
    for (int i = 3; i < sol.trajectory.size() - 3; ++i)
      res = std::max(res, (model.A * ds.col(i) -
                           model.evaluate_Q(states.col(i)))
                              .norm());
    CHECK(res < 1e-7);
  }
  SUBCASE("radius guard") {
    const double radius = solve_stable(canon, 0.0 * dir, params).radius;
    CHECK_THROWS_AS(solve_stable(canon, 3.0 * radius * dir, params),
                    RadiusExceeded);
  }
}

TEST_CASE("stable graph: quadratic tangency, Lipschitz, C1 differences") {
  const auto canon = reduce_to_canonical(make_preset("demo-m0"));
  const auto decomp = spectral_decompose(canon.Gamma0);
  Rng rng(3);
  Vector dir = stable_projection(decomp, rng.unit_vector(canon.dim_h));
  dir /= dir.norm();
  StableParams params;
  const double radius = solve_stable(canon, 0.0 * dir, params).radius;

  std::vector<double> ss, ds;
  for (int j = 0; j <= 4; ++j) {
    const double s = 0.9 * radius * std::pow(2.0, -j);
    const Vector z0 = stable_graph_eval(canon, s * dir, params);
    Vector off = z0;
    off.tail(canon.dim_h) =
        unstable_projection(decomp, Vector(z0.tail(canon.dim_h)));
    ss.push_back(s);
    ds.push_back(off.norm());
  }
  CHECK(fit_loglog_slope(ss, ds) >= 1.8);

  // Lipschitz continuity of the graph map
  const double s = 0.5 * radius;
  const Vector za = stable_graph_eval(canon, s * dir, params);
  Vector dir2 = stable_projection(decomp, rng.unit_vector(canon.dim_h));
  dir2 /= dir2.norm();
  const double ds2 = 1e-4 * radius;
  const Vector zb = stable_graph_eval(canon, s * dir + ds2 * dir2, params);
  CHECK((zb - za).norm() <= 2.0 * ds2);

  // C1: central-difference directional derivatives converge
  auto fd_dir = [&](double step) {
    const Vector zp = stable_graph_eval(canon, s * dir + step * dir2, params);
    const Vector zm = stable_graph_eval(canon, s * dir - step * dir2, params);
    return Vector((zp - zm) / (2.0 * step));
  };
  const Vector d1 = fd_dir(1e-3 * radius);
  const Vector d2 = fd_dir(5e-4 * radius);
  CHECK((d1 - d2).norm() < 1e-3 * std::max(1.0, d1.norm()));
}

TEST_CASE("center Taylor graph") {
  SUBCASE("flat m=0 model: the center manifold is the equilibrium manifold") {
    const auto canon = reduce_to_canonical(flat_m0_model());
    const auto taylor = center_taylor(canon, 4);
    for (int d = 2; d <= 4; ++d) CHECK(taylor.Xi.max_coeff_norm(d) < 1e-13);
  }
  SUBCASE("generic m=0: order-2 term is the pure-w_c block of Qh") {
    const auto canon = reduce_to_canonical(make_preset("demo-m0"));
    const auto taylor = center_taylor(canon, 3);
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
      const Vector wc = rng.unit_vector(canon.dim_c);
      Vector z = Vector::Zero(canon.n);
      z.head(canon.dim_c) = wc;
      const Vector expect = canon.Qh(z);
      const Vector got = taylor.Xi.eval_range(wc, 2, 2);
      CHECK((got - expect).norm() < 1e-13);
    }
  }
  SUBCASE("coefficient defects vanish and no linear part exists") {
    const auto canon = reduce_to_canonical(make_preset("demo-m1"));
    const auto taylor = center_taylor(canon, 4);
    for (double r : taylor.residual_by_order) CHECK(r < 1e-12);
    CHECK(taylor.Xi.max_coeff_norm(0) == 0.0);
    CHECK(taylor.Xi.max_coeff_norm(1) == 0.0);
  }
  SUBCASE("sampled matching defect decays at order k+1") {
    const auto canon = reduce_to_canonical(make_preset("demo-m1"));
    for (int k : {2, 3}) {
      const auto taylor = center_taylor(canon, k);
      Rng rng(7);
      std::vector<Vector> dirs;
      for (int d = 0; d < 8; ++d) dirs.push_back(rng.unit_vector(canon.dim_c));
      std::vector<double> ss, dd;
      for (int j = 0; j <= 5; ++j) {
        const double s = 0.02 * std::pow(2.0, -j);
        double worst = 0.0;
        for (const auto& d : dirs)
          worst = std::max(
              worst, center_matching_defect(canon, taylor, s * d).norm());
        ss.push_back(s);
        dd.push_back(worst);
      }
      CHECK(fit_loglog_slope(ss, dd) >= k + 1 - 0.3);
    }
  }
}

TEST_CASE("center fixed point") {
  const auto canon = reduce_to_canonical(make_preset("demo-m1"));
  const auto decomp = spectral_decompose(canon.Gamma0);
  const double nu = decomp.nu();
  const auto mixed = WeightedNorm::mixed(nu / 100, nu / 10, nu / 2);

  SUBCASE("zero data gives the zero solution") {
    const auto trunc = truncate(canon, 0.01);
    const auto fp = solve_center_fixed_point(canon, Vector::Zero(canon.dim_c),
                                             trunc, mixed);
    CHECK(fp.trajectory.values.norm() == 0.0);
    CHECK(fp.graph_value.norm() == 0.0);
  }
  SUBCASE("flat m=0 model: w_h stays zero and w_c stays constant") {
    const auto flat = reduce_to_canonical(flat_m0_model());
    const auto trunc = truncate(flat, 0.02);
    Rng rng(9);
    const Vector w0c = 0.01 * rng.unit_vector(flat.dim_c);
    const auto fp = solve_center_fixed_point(flat, w0c, trunc,
                                             WeightedNorm::mixed(
                                                 nu / 100, nu / 10, nu / 2));
    for (int i = 0; i < fp.trajectory.size(); ++i) {
      CHECK(fp.trajectory.values.col(i).tail(flat.dim_h).norm() < 1e-14);
      CHECK((fp.trajectory.values.col(i).head(flat.dim_c) - w0c).norm() <
            1e-14);
    }
  }
  SUBCASE("graph value agrees with the Taylor graph at order k+1") {
    const int k = 3;
    const auto taylor = center_taylor(canon, k);
    Rng rng(11);
    Vector dir = rng.unit_vector(canon.dim_c);
    dir[1] = 0.0;  // keep the conserved slot zero
    dir /= dir.norm();
    std::vector<double> ss, dd;
    for (int j = 0; j <= 3; ++j) {
      const double s = 0.02 * std::pow(2.0, -j);
      const auto trunc = truncate(canon, 2.0 * s);
      CenterFixedPointParams cp;
      cp.h = std::min(5e-3, s / 4);
      const auto fp = solve_center_fixed_point(canon, s * dir, trunc, mixed, cp);
      ss.push_back(s);
      dd.push_back((fp.graph_value - taylor.eval(s * dir)).norm());
    }
    CHECK(fit_loglog_slope(ss, dd) >= k + 1 - 0.3);
  }
  SUBCASE("mixed-norm contraction factor shrinks with the radius") {
    Rng rng(13);
    Vector dir = rng.unit_vector(canon.dim_c);
    dir[1] = 0.0;
    dir /= dir.norm();
    std::vector<double> ratios;
    for (double s : {0.04, 0.02, 0.01}) {
      const auto trunc = truncate(canon, 2.0 * s);
      const auto fp =
          solve_center_fixed_point(canon, s * dir, trunc, mixed);
      CHECK(fp.contraction_factor < 1.0);
      ratios.push_back(fp.contraction_factor);
    }
    CHECK(ratios[2] < ratios[0]);  // roughly proportional to eps
  }
  SUBCASE("radius precondition") {
    const auto trunc = truncate(canon, 0.01);
    Vector big = Vector::Zero(canon.dim_c);
    big[0] = 0.5;
    CHECK_THROWS_AS(solve_center_fixed_point(canon, big, trunc, mixed),
                    RadiusExceeded);
  }
}

TEST_CASE("local invariance of the Taylor graph under the canonical flow") {
  const auto canon = reduce_to_canonical(make_preset("demo-m1"));
  const int k = 3;
  const auto taylor = center_taylor(canon, k);
  const auto decomp = spectral_decompose(canon.Gamma0);
  const Eigen::LDLT<Matrix> gamma0_ldlt(canon.Gamma0);

  auto field = [&](const Vector& z) -> Vector {
    const Vector q = canon.apply_Q(z);
    Vector dz(canon.n);
    dz.head(canon.dim_c) =
        canon.J * z.head(canon.dim_c) + q.head(canon.dim_c);
    dz.tail(canon.dim_h) = gamma0_ldlt.solve(
        Vector(-z.tail(canon.dim_h) + q.tail(canon.dim_h)));
    return dz;
  };
  const double t_step = decomp.alpha_min_abs() / 10.0;
  Rng rng(15);
  const Vector dir = rng.unit_vector(canon.dim_c);
  std::vector<double> ss, drift;
  for (int j = 0; j <= 3; ++j) {
    const double s = 0.02 * std::pow(2.0, -j);
    Vector z(canon.n);
    z.head(canon.dim_c) = s * dir;
    z.tail(canon.dim_h) = taylor.eval(s * dir);
    for (int sub = 0; sub < 16; ++sub) z = rk4_step(field, z, t_step / 16.0);
    const double d =
        (z.tail(canon.dim_h) - taylor.eval(z.head(canon.dim_c))).norm();
    ss.push_back(s);
    drift.push_back(d);
  }
  CHECK(fit_loglog_slope(ss, drift) >= k + 1 - 0.3);
}

TEST_CASE("exponential approximation property") {
  const auto canon = reduce_to_canonical(make_preset("demo-m1"));
  const auto decomp = spectral_decompose(canon.Gamma0);
  const int k = 3;
  const auto taylor = center_taylor(canon, k);

  SUBCASE("stable trajectories approach the center manifold at rate nu") {
    Rng rng(17);
    Vector dir = stable_projection(decomp, rng.unit_vector(canon.dim_h));
    dir /= dir.norm();
    StableParams sp;
    const double radius = solve_stable(canon, 0.0 * dir, sp).radius;
    const auto sol = solve_stable(canon, 0.9 * radius * dir, sp);
    const auto ea = exp_approximation_check(canon, sol.trajectory, taylor,
                                            0.8 * decomp.nu());
    CHECK(ea.pass);
    CHECK(ea.rate_fit >= 0.8 * decomp.nu());
  }
  SUBCASE("on-manifold trajectories give a vacuous pass") {
    const int nn = 201;
    GridFunction traj = make_grid(0.0, 10.0, nn, canon.n);
    for (int i = 0; i < nn; ++i) {
      Vector wc = Vector::Zero(canon.dim_c);
      traj.values.col(i).head(canon.dim_c) = wc;
      traj.values.col(i).tail(canon.dim_h) = taylor.eval(wc);
    }
    const auto ea = exp_approximation_check(canon, traj, taylor, 1.0);
    CHECK(ea.pass);
  }
  SUBCASE("leaving the truncation radius is flagged") {
    const int nn = 101;
    GridFunction traj = make_grid(0.0, 5.0, nn, canon.n);
    traj.values.setConstant(1.0);
    CHECK_THROWS_AS(
        exp_approximation_check(canon, traj, taylor, 1.0, -1.0, 0.01),
        RadiusExceeded);
  }
}
