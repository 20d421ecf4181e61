#include "kinshock/chapman_enskog.hpp"

#include <cmath>
#include <sstream>

namespace kinshock {

ChapmanEnskogData make_chapman_enskog(const KineticModel& model) {
  ChapmanEnskogData ced;
  ced.model = model;
  const Matrix qp = model.linearize_Q(model.u_bar);
  ced.E = model.v_basis.transpose() * qp * model.v_basis;
  ced.E = 0.5 * (ced.E + ced.E.transpose());
  ced.A11 = model.vperp_basis.transpose() * model.A * model.vperp_basis;
  ced.A12 = model.vperp_basis.transpose() * model.A * model.v_basis;
  Eigen::SelfAdjointEigenSolver<Matrix> es(ced.E);
  if (es.eigenvalues().maxCoeff() >= 0.0)
    throw InvalidModel("E = Q'(u_bar)|_V is not negative definite");
  const double delta = -es.eigenvalues().maxCoeff();
  ced.D_star = ced.A12 * (-ced.E).ldlt().solve(ced.A12.transpose());
  ced.D_star = 0.5 * (ced.D_star + ced.D_star.transpose());
  ced.u_bar_macro = model.vperp_basis.transpose() * model.u_bar;
  ced.basin_radius = 0.5 * delta / std::max(model.B.scale(), 1e-300);
  return ced;
}

GraphSolve solve_equilibrium_graph(const ChapmanEnskogData& ced,
                                   const Vector& u) {
  const KineticModel& m = ced.model;
  if ((u - ced.u_bar_macro).norm() > ced.basin_radius)
    throw SolverError("equilibrium graph: u outside configured Newton basin");
  Vector v = Vector::Zero(m.n - m.r);
  double res = 0.0;
  for (int it = 0; it < ced.newton_max_iter; ++it) {
    const Vector state = m.lift(u, v);
    const Vector fv = m.v_basis.transpose() * m.evaluate_Q(state);
    res = fv.norm();
    if (res <= ced.newton_tol) return {v, it, res};
    const Matrix jac =
        m.v_basis.transpose() * m.linearize_Q(state) * m.v_basis;
    v -= jac.ldlt().solve(fv);
  }
  // final residual check after the last update
  const Vector fv = m.v_basis.transpose() * m.evaluate_Q(m.lift(u, v));
  if (fv.norm() <= ced.newton_tol)
    return {v, ced.newton_max_iter, fv.norm()};
  throw NonConvergence("equilibrium graph", ced.newton_max_iter, fv.norm());
}

Vector compute_flux(const ChapmanEnskogData& ced, const Vector& u) {
  const auto graph = solve_equilibrium_graph(ced, u);
  return ced.model.vperp_basis.transpose() *
         (ced.model.A * ced.model.lift(u, graph.v));
}

Vector compute_hstar(const ChapmanEnskogData& ced, const Vector& u,
                     const Matrix& A0) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (A0 + A0.transpose()));
  if ((A0 - A0.transpose()).norm() > 1e-12 * A0.norm() ||
      es.eigenvalues().minCoeff() <= 0.0)
    throw SolverError("h*: A0 must be symmetric positive definite");
  const auto graph = solve_equilibrium_graph(ced, u);
  return ced.model.vperp_basis.transpose() * (A0 * ced.model.lift(u, graph.v));
}

Matrix compute_diffusion(const ChapmanEnskogData& ced) { return ced.D_star; }

namespace {

// Central differences with one Richardson level. The plain eps^(1/3) step is
// not accurate enough for the 1e-10 delta cross-check against T12 T12*, so
// the base step is eps^(1/5) and the h/2 refinement cancels the h^2 term.
Matrix fd_jacobian(const std::function<Vector(const Vector&)>& f,
                   const Vector& u, int out_dim) {
  const int n = static_cast<int>(u.size());
  const double scale = std::max(1.0, u.norm());
  const double h = std::pow(2.220446049250313e-16, 0.2) * scale;
  Matrix jh(out_dim, n), jh2(out_dim, n);
  for (int i = 0; i < n; ++i) {
    Vector e = Vector::Zero(n);
    e[i] = 1.0;
    jh.col(i) = (f(u + h * e) - f(u - h * e)) / (2.0 * h);
    jh2.col(i) = (f(u + 0.5 * h * e) - f(u - 0.5 * h * e)) / h;
  }
  return (4.0 * jh2 - jh) / 3.0;
}

}  // namespace

Matrix flux_jacobian(const ChapmanEnskogData& ced, const Vector& u) {
  return fd_jacobian([&](const Vector& x) { return compute_flux(ced, x); }, u,
                     ced.r());
}

Matrix vstar_jacobian(const ChapmanEnskogData& ced, const Vector& u) {
  return fd_jacobian(
      [&](const Vector& x) { return solve_equilibrium_graph(ced, x).v; }, u,
      ced.model.n - ced.model.r);
}

Matrix flux_jacobian_ift(const ChapmanEnskogData& ced, const Vector& u) {
  const auto graph = solve_equilibrium_graph(ced, u);
  const Matrix qp =
      ced.model.linearize_Q(ced.model.lift(u, graph.v));
  const Matrix evv =
      ced.model.v_basis.transpose() * qp * ced.model.v_basis;
  const Matrix evu =
      ced.model.v_basis.transpose() * qp * ced.model.vperp_basis;
  const Matrix vprime = -evv.partialPivLu().solve(evu);
  return ced.A11 + ced.A12 * vprime;
}

Vector characteristic_speeds(const ChapmanEnskogData& ced, const Vector& u) {
  Eigen::EigenSolver<Matrix> es(flux_jacobian_ift(ced, u));
  const double radius =
      std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
  if (es.eigenvalues().imag().cwiseAbs().maxCoeff() > 1e-8 * radius)
    throw NonSimpleEigenvalue("f*'(u) has a complex characteristic pair");
  Vector out = es.eigenvalues().real();
  std::sort(out.data(), out.data() + out.size());
  return out;
}

CharacteristicData compute_characteristics(const ChapmanEnskogData& ced,
                                           const Vector& u, int p) {
  const int r = ced.r();
  if (p < 0 || p >= r) throw SolverError("characteristic index out of range");
  CharacteristicData out;
  out.u = u;
  out.p = p;

  const Matrix jac = flux_jacobian(ced, u);
  Eigen::EigenSolver<Matrix> es(jac);
  const double radius = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
  if (es.eigenvalues().imag().cwiseAbs().maxCoeff() > 1e-8 * radius)
    throw NonSimpleEigenvalue("f*'(u) has a complex characteristic pair");

  std::vector<int> order(r);
  for (int i = 0; i < r; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return es.eigenvalues()[a].real() < es.eigenvalues()[b].real();
  });
  out.lambdas.resize(r);
  for (int i = 0; i < r; ++i) out.lambdas[i] = es.eigenvalues()[order[i]].real();

  double gap = radius;
  if (p > 0) gap = std::min(gap, out.lambdas[p] - out.lambdas[p - 1]);
  if (p < r - 1) gap = std::min(gap, out.lambdas[p + 1] - out.lambdas[p]);
  if (gap <= 1e-6 * radius)
    throw NonSimpleEigenvalue("selected characteristic is not simple");

  Vector rb = es.eigenvectors().col(order[p]).real();
  rb /= rb.norm();
  for (int i = 0; i < r; ++i) {
    if (std::abs(rb[i]) > 1e-12) {
      if (rb[i] < 0) rb = -rb;
      break;
    }
  }
  out.r_bar = rb;

  // Lambda = r.f*''(u)(r,r) by second-order central differences of the
  // scalar cut s -> r.f*(u + s r), one Richardson level.
  auto g = [&](double s) {
    return rb.dot(compute_flux(ced, u + s * rb));
  };
  const double hh = std::pow(2.220446049250313e-16, 1.0 / 6.0);
  auto second_diff = [&](double step) {
    return (g(step) - 2.0 * g(0.0) + g(-step)) / (step * step);
  };
  const double dh = second_diff(hh);
  const double dh2 = second_diff(0.5 * hh);
  out.Lambda = (4.0 * dh2 - dh) / 3.0;

  out.delta = rb.dot(ced.D_star * rb);
  return out;
}

NsReference ns_reference(double T, double rho, double e, double v1) {
  if (T <= 0 || rho <= 0 || e <= 0)
    throw SolverError("ns_reference: T, rho, e must be positive");
  NsReference out;
  out.Gamma = 2.0 / 3.0;
  out.c_v = 3.0 / 4.0;
  out.mu = (5.0 / 16.0) * std::sqrt(T / M_PI);
  out.kappa = (75.0 / 16.0) * std::sqrt(T / M_PI);
  out.c = std::sqrt(out.Gamma * (1.0 + out.Gamma) * e);
  out.lambdas[0] = v1 - out.c;
  out.lambdas[1] = v1;
  out.lambdas[2] = v1;
  out.lambdas[3] = v1;
  out.lambdas[4] = v1 + out.c;
  return out;
}

std::string characteristic_sweep_csv(const ChapmanEnskogData& ced,
                                     const std::vector<double>& u1_values,
                                     int p) {
  const auto base = compute_characteristics(ced, ced.u_bar_macro, p);
  std::ostringstream os;
  os << "u1";
  for (int i = 0; i < ced.r(); ++i) os << ",lambda_" << (i + 1);
  os << ",Lambda,delta\n";
  for (double u1 : u1_values) {
    const Vector u = ced.u_bar_macro + u1 * base.r_bar;
    const auto cd = compute_characteristics(ced, u, p);
    os << format_g17(u1);
    for (int i = 0; i < ced.r(); ++i) os << "," << format_g17(cd.lambdas[i]);
    os << "," << format_g17(cd.Lambda) << "," << format_g17(cd.delta) << "\n";
  }
  return os.str();
}

}  // namespace kinshock
