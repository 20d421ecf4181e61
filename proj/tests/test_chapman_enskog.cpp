#include <doctest.h>

#include <cmath>

#include "kinshock/canonical.hpp"
#include "kinshock/chapman_enskog.hpp"
#include "kinshock/presets.hpp"

using namespace kinshock;

namespace {

KineticModel flat_model() {  // zero curvature: equilibrium manifold is Vperp
  SyntheticSpec spec;
  spec.velocities = {0.9, -0.7, 0.5, -0.4, 0.3, -0.2};
  spec.target_m = 0;
  spec.seed = 3;
  spec.curvature_scale = 0.0;
  return build_synthetic_model(2, 6, spec);
}

}  // namespace

TEST_CASE("equilibrium graph fixed point at u_bar") {
  const auto ced = make_chapman_enskog(make_preset("demo-m0"));
  const auto g = solve_equilibrium_graph(ced, ced.u_bar_macro);
  CHECK(g.v.norm() < 1e-13);  // P_V u_bar = 0
}

TEST_CASE("flat model has an identically flat equilibrium graph") {
  const auto ced = make_chapman_enskog(flat_model());
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Vector u =
        ced.u_bar_macro + 0.4 * ced.basin_radius * rng.unit_vector(2);
    CHECK(solve_equilibrium_graph(ced, u).v.norm() < 1e-12);
  }
}

TEST_CASE("curved model: Newton residual < 1e-12 within 8 steps") {
  const auto ced = make_chapman_enskog(make_preset("demo-m1"));
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const Vector u =
        ced.u_bar_macro + 0.4 * ced.basin_radius * rng.unit_vector(2);
    const auto g = solve_equilibrium_graph(ced, u);
    CHECK(g.residual < 1e-12);
    CHECK(g.iterations <= 8);
  }
}

TEST_CASE("flux derivative at u_bar equals A11") {
  const auto ced = make_chapman_enskog(make_preset("demo-m1"));
  const Matrix jac = flux_jacobian(ced, ced.u_bar_macro);
  CHECK((jac - ced.A11).norm() < 1e-9 * std::max(1.0, ced.A11.norm()));
  // and is symmetric there
  CHECK((jac - jac.transpose()).norm() < 1e-8);
}

TEST_CASE("flat model flux is exactly linear") {
  const auto ced = make_chapman_enskog(flat_model());
  Rng rng(8);
  const Vector d = rng.unit_vector(2);
  const double h = 0.05;
  const Vector second = compute_flux(ced, ced.u_bar_macro + h * d) -
                        2.0 * compute_flux(ced, ced.u_bar_macro) +
                        compute_flux(ced, ced.u_bar_macro - h * d);
  CHECK(second.norm() < 1e-12);
}

TEST_CASE("h* evaluations") {
  const auto flat = make_chapman_enskog(flat_model());
  Rng rng(9);
  const Matrix identity = Matrix::Identity(6, 6);
  const Vector u = flat.u_bar_macro + 0.2 * flat.basin_radius * rng.unit_vector(2);
  // flat manifold, A0 = I: h*(u) = u in macro coordinates
  CHECK((compute_hstar(flat, u, identity) - u).norm() < 1e-12);

  const auto ced = make_chapman_enskog(make_preset("demo-m1"));
  Matrix a0 = random_spd(10, 0.5, 2.0, rng);
  const Vector u2 =
      ced.u_bar_macro + 0.3 * ced.basin_radius * rng.unit_vector(2);
  const auto graph = solve_equilibrium_graph(ced, u2);
  const Vector direct = ced.model.vperp_basis.transpose() *
                        (a0 * ced.model.lift(u2, graph.v));
  CHECK((compute_hstar(ced, u2, a0) - direct).norm() < 1e-13);
  // at u_bar: h* = P_perp A0 u_bar
  const Vector at_bar = ced.model.vperp_basis.transpose() * (a0 * ced.model.u_bar);
  CHECK((compute_hstar(ced, ced.u_bar_macro, a0) - at_bar).norm() < 1e-12);
  CHECK_THROWS_AS(compute_hstar(ced, u2, -a0), SolverError);
}

TEST_CASE("diffusion matrix: normalization, symmetry, positivity") {
  // micro_identity model: E = -I so D* = A12 A12^T exactly
  SyntheticSpec spec;
  spec.velocities = {0.9, -0.7, 0.5, -0.4, 0.3, -0.2};
  spec.target_m = 0;
  spec.seed = 3;
  spec.micro_identity = true;
  const auto ced = make_chapman_enskog(build_synthetic_model(2, 6, spec));
  CHECK((compute_diffusion(ced) - ced.A12 * ced.A12.transpose()).norm() <
        1e-13);

  const auto m1 = make_chapman_enskog(make_preset("demo-m1"));
  const Matrix dstar = compute_diffusion(m1);
  CHECK((dstar - dstar.transpose()).norm() < 1e-13 * dstar.norm());
  Eigen::SelfAdjointEigenSolver<Matrix> es(dstar);
  CHECK(es.eigenvalues().minCoeff() > -1e-13);
  const auto cd = compute_characteristics(m1, m1.u_bar_macro, 1);
  CHECK(cd.delta > 0.0);  // r.D* r = delta > 0
}

TEST_CASE("characteristics on the zero characteristic of demo-m1") {
  const auto ced = make_chapman_enskog(make_preset("demo-m1"));
  const auto cd = compute_characteristics(ced, ced.u_bar_macro, 1);
  CHECK(std::abs(cd.lambdas[1]) < 1e-8);  // ker A11 eigenvalue
  CHECK(cd.lambdas[0] < cd.lambdas[1]);   // ascending
  CHECK(std::abs(cd.r_bar.norm() - 1.0) < 1e-13);
  // sign convention: first nonzero component positive
  for (int i = 0; i < cd.r_bar.size(); ++i) {
    if (std::abs(cd.r_bar[i]) > 1e-12) {
      CHECK(cd.r_bar[i] > 0.0);
      break;
    }
  }
  CHECK(std::abs(cd.Lambda) > 0.05);  // genuinely nonlinear preset
}

TEST_CASE("flat model is linearly degenerate: Lambda = 0") {
  const auto ced = make_chapman_enskog(flat_model());
  const auto cd = compute_characteristics(ced, ced.u_bar_macro, 0);
  CHECK(std::abs(cd.Lambda) < 1e-9);
}

TEST_CASE("delta via r.D*r agrees with T12 T12* to 1e-10") {
  const auto model = make_preset("demo-m1");
  const auto ced = make_chapman_enskog(model);
  const auto canon = reduce_to_canonical(model);
  const auto cd = compute_characteristics(ced, ced.u_bar_macro, 1);
  const double delta_t12 = (canon.That * canon.That.transpose())(0, 0);
  CHECK(std::abs(cd.delta - delta_t12) <= 1e-10);
}

TEST_CASE("multiple eigenvalue triggers NonSimpleEigenvalue") {
  // equal velocities on the macro subspace make A11 proportional to I
  SyntheticSpec spec;
  spec.velocities = {0.5, 0.5, -0.4, -0.3, 0.25, -0.2};
  spec.target_m = 0;
  spec.seed = 2;
  Matrix vp = Matrix::Zero(6, 2);
  vp(0, 0) = 1.0;
  vp(1, 1) = 1.0;
  spec.vperp = vp;
  const auto ced = make_chapman_enskog(build_synthetic_model(2, 6, spec));
  CHECK_THROWS_AS(compute_characteristics(ced, ced.u_bar_macro, 0),
                  NonSimpleEigenvalue);
}

TEST_CASE("equilibrium manifold is tangent to Vperp at u_bar") {
  for (const char* name : {"demo-m0", "demo-m1"}) {
    const auto ced = make_chapman_enskog(make_preset(name));
    CHECK(vstar_jacobian(ced, ced.u_bar_macro).norm() < 1e-6);
  }
}

TEST_CASE("IFT flux Jacobian agrees with the FD route") {
  const auto ced = make_chapman_enskog(make_preset("demo-m1"));
  Rng rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    const Vector u =
        ced.u_bar_macro + 0.3 * ced.basin_radius * rng.unit_vector(2);
    const Matrix fd = flux_jacobian(ced, u);
    const Matrix ift = flux_jacobian_ift(ced, u);
    CHECK((fd - ift).norm() < 1e-9 * std::max(1.0, ift.norm()));
  }
}

TEST_CASE("hard-sphere Navier-Stokes reference coefficients") {
  SUBCASE("T = pi gives rational viscosity values") {
    const auto ns = ns_reference(M_PI, 1.0, 1.0, 0.0);
    CHECK(ns.mu == doctest::Approx(0.3125).epsilon(1e-15));
    CHECK(ns.kappa == doctest::Approx(4.6875).epsilon(1e-15));
  }
  SUBCASE("kappa/mu = 15 for all T") {
    for (double T : {0.1, 1.0, 7.3}) {
      const auto ns = ns_reference(T, 1.0, 1.0, 0.0);
      CHECK(ns.kappa / ns.mu == doctest::Approx(15.0).epsilon(1e-14));
    }
  }
  SUBCASE("acoustic characteristics at e = 0.9") {
    const auto ns = ns_reference(1.0, 1.0, 0.9, 0.0);
    CHECK(ns.c == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(ns.lambdas[0] == doctest::Approx(-1.0));
    CHECK(ns.lambdas[1] == 0.0);
    CHECK(ns.lambdas[2] == 0.0);
    CHECK(ns.lambdas[3] == 0.0);
    CHECK(ns.lambdas[4] == doctest::Approx(1.0));
    CHECK(ns.Gamma == doctest::Approx(2.0 / 3.0));
    CHECK(ns.c_v == doctest::Approx(0.75));
  }
  SUBCASE("nonpositive inputs are rejected") {
    CHECK_THROWS_AS(ns_reference(-1.0, 1.0, 1.0, 0.0), SolverError);
    CHECK_THROWS_AS(ns_reference(1.0, 0.0, 1.0, 0.0), SolverError);
  }
}

TEST_CASE("characteristic sweep CSV has the documented columns") {
  const auto ced = make_chapman_enskog(make_preset("demo-m1"));
  const auto csv = characteristic_sweep_csv(ced, {-0.01, 0.0, 0.01}, 1);
  CHECK(csv.rfind("u1,lambda_1,lambda_2,Lambda,delta\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}
