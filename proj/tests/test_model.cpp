#include <doctest.h>

#include <cmath>

#include "kinshock/model.hpp"
#include "kinshock/presets.hpp"

using namespace kinshock;

namespace {

SyntheticSpec basic_spec(std::vector<double> velocities, int m,
                         std::uint64_t seed = 1) {
  SyntheticSpec s;
  s.velocities = std::move(velocities);
  s.target_m = m;
  s.seed = seed;
  return s;
}

}  // namespace

TEST_CASE("r=1 n=3 model with velocities (-1, 1/2, 1)") {
  auto model = build_synthetic_model(1, 3, basic_spec({-1.0, 0.5, 1.0}, 0));
  CHECK(model.v_basis.cols() == 2);  // dim V = 2
  Eigen::SelfAdjointEigenSolver<Matrix> es(model.A);
  CHECK(es.eigenvalues()[0] == doctest::Approx(-1.0));
  CHECK(es.eigenvalues()[1] == doctest::Approx(0.5));
  CHECK(es.eigenvalues()[2] == doctest::Approx(1.0));
  CHECK(check_hypotheses(model).all_passed());
}

TEST_CASE("m=1 construction yields a one-dimensional kernel of A11") {
  auto model = build_synthetic_model(
      2, 6, basic_spec({0.8, -0.8, 0.5, -0.5, 0.3, -0.3}, 1));
  const Matrix a11 =
      model.vperp_basis.transpose() * model.A * model.vperp_basis;
  Eigen::JacobiSVD<Matrix> svd(a11);
  int rank = 0;
  for (int i = 0; i < 2; ++i)
    if (svd.singularValues()[i] > 1e-10 * svd.singularValues()[0]) ++rank;
  CHECK(rank == 1);  // dim ker A11 = 1
  CHECK(check_hypotheses(model).all_passed());
}

TEST_CASE("zero velocity is rejected") {
  CHECK_THROWS_WITH_AS(
      build_synthetic_model(1, 3, basic_spec({-1.0, 0.0, 1.0}, 0)),
      doctest::Contains("one-to-one"), InvalidModel);
}

TEST_CASE("m=1 without a sign change is rejected") {
  CHECK_THROWS_AS(
      build_synthetic_model(1, 4, basic_spec({0.2, 0.4, 0.6, 0.8}, 1)),
      InvalidModel);
}

TEST_CASE("hypothesis checks flag corrupted models") {
  auto model = build_synthetic_model(
      2, 6, basic_spec({0.9, -0.7, 0.5, -0.4, 0.3, -0.2}, 0, 3));
  REQUIRE(check_hypotheses(model).all_passed());

  SUBCASE("A with a zeroed diagonal entry is not one-to-one") {
    // rank-deficient A: zero out one eigen-direction
    auto bad = model;
    bad.A(2, 2) = 0.0;
    const auto rep = check_hypotheses(bad);
    CHECK_FALSE(rep.find("A one-to-one").pass);
  }
  SUBCASE("asymmetrized B is caught") {
    auto bad = model;
    bad.B.slices[1](0, 2) += 1e-3;
    const auto rep = check_hypotheses(bad);
    CHECK_FALSE(rep.find("B symmetric").pass);
    CHECK(rep.find("B symmetric").residual > 1e-10);
  }
  SUBCASE("B leaking out of V is caught") {
    auto bad = model;
    bad.B.slices[0] += 1e-4 * bad.vperp_basis.col(0) *
                       bad.vperp_basis.col(0).transpose();
    // leak into the Vperp output direction
    for (int k = 0; k < bad.n; ++k)
      bad.B.slices[k] += 1e-4 * bad.vperp_basis(k, 0) * Matrix::Identity(6, 6);
    CHECK_FALSE(check_hypotheses(bad).find("range of B in V").pass);
  }
}

TEST_CASE("Q evaluation at and around the equilibrium") {
  auto model = build_synthetic_model(
      2, 6, basic_spec({0.9, -0.7, 0.5, -0.4, 0.3, -0.2}, 0, 3));
  CHECK(model.evaluate_Q(model.u_bar).norm() < 1e-14);
  CHECK(model.evaluate_Q(2.0 * model.u_bar).norm() < 1e-13);  // bilinearity

  // Q(u_bar + h d) = Q'(u_bar) h d + O(h^2)
  Rng rng(7);
  const Vector d = rng.unit_vector(6);
  const Matrix qp = model.linearize_Q(model.u_bar);
  for (double h : {1e-3, 5e-4}) {
    const Vector q = model.evaluate_Q(model.u_bar + h * d);
    const double err = (q - h * qp * d).norm();
    CHECK(err < 2.0 * model.B.scale() * h * h);
  }
}

TEST_CASE("linearize_Q matches central differences of evaluate_Q") {
  auto model = build_synthetic_model(
      2, 7, basic_spec({0.9, -0.7, 0.5, -0.4, 0.3, -0.25, 0.6}, 0, 5));
  Rng rng(11);
  const Vector u = model.u_bar + 0.3 * rng.unit_vector(7);
  const Matrix qp = model.linearize_Q(u);
  const double step = 1e-5;
  for (int trial = 0; trial < 5; ++trial) {
    const Vector d = rng.unit_vector(7);
    const Vector fd = (model.evaluate_Q(u + step * d) -
                       model.evaluate_Q(u - step * d)) /
                      (2.0 * step);
    CHECK((fd - qp * d).norm() / fd.norm() < 1e-6);
  }
  CHECK(model.linearize_Q(Vector::Zero(7)).norm() == 0.0);
}

TEST_CASE("linearization at u_bar has kernel Vperp") {
  auto model = make_preset("demo-m0");
  const Matrix qp = model.linearize_Q(model.u_bar);
  Eigen::JacobiSVD<Matrix> svd(qp, Eigen::ComputeFullV);
  const Matrix kernel = svd.matrixV().rightCols(model.r);
  CHECK(max_principal_angle(kernel, model.vperp_basis) < 1e-10);
}

TEST_CASE("bilinear map symmetry and range properties on random inputs") {
  auto model = make_preset("demo-m1");
  Rng rng(13);
  const double scale = model.B.scale();
  for (int trial = 0; trial < 25; ++trial) {
    const Vector x = rng.gaussian_vector(model.n);
    const Vector y = rng.gaussian_vector(model.n);
    CHECK((model.B.apply(x, y) - model.B.apply(y, x)).norm() <=
          1e-14 * x.norm() * y.norm() * scale);
    const double leak =
        (model.vperp_basis.transpose() * model.B.apply(x, y)).norm();
    CHECK(leak <= 1e-12 * x.norm() * y.norm() * scale);
  }
}

TEST_CASE("sing-k family: hypotheses hold while min |eig A| -> 0") {
  for (int k = 1; k <= 12; ++k) {
    const auto model = make_preset("sing-" + std::to_string(k));
    const auto rep = check_hypotheses(model);
    CHECK(rep.all_passed());
    CHECK(rep.min_abs_eig_A == std::ldexp(1.0, -k));  // exact dyadic
  }
}

TEST_CASE("model serialization round-trips bit-exactly") {
  auto model = make_preset("demo-m1");
  const std::string text = serialize_model(model);
  const auto back = parse_model(text);
  CHECK(serialize_model(back) == text);
  CHECK(back.A == model.A);
  CHECK(back.u_bar == model.u_bar);
  CHECK(back.vperp_basis == model.vperp_basis);
  for (int k = 0; k < model.n; ++k)
    CHECK(back.B.slices[k] == model.B.slices[k]);
  CHECK(check_hypotheses(back).all_passed());
}
