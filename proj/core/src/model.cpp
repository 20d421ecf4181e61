#include "kinshock/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace kinshock {

Vector BilinearMap::apply(const Vector& x, const Vector& y) const {
  Vector out(dim());
  for (int k = 0; k < dim(); ++k) out[k] = x.dot(slices[k] * y);
  return out;
}

Matrix BilinearMap::linearization(const Vector& u) const {
  Matrix out(dim(), dim());
  for (int k = 0; k < dim(); ++k)
    out.row(k) = 2.0 * (u.transpose() * slices[k]);
  return out;
}

double BilinearMap::scale() const {
  double s = 0.0;
  for (const auto& m : slices) s = std::max(s, m.norm());
  return s;
}

bool HypothesisReport::all_passed() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

const HypothesisCheck& HypothesisReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw SolverError("no hypothesis check named " + name);
}

namespace {

// Macro basis draw for m = 0: generic r-frame with A11 comfortably invertible.
Matrix draw_vperp_m0(const Matrix& A, int r, double vel_max, Rng& rng) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    Matrix cand = orthonormalize(rng.gaussian_matrix(A.rows(), r));
    Matrix a11 = cand.transpose() * A * cand;
    Eigen::JacobiSVD<Matrix> svd(a11);
    if (svd.singularValues().minCoeff() > 0.05 * vel_max) return cand;
  }
  throw InvalidModel("could not draw a noncharacteristic macro basis");
}

// Macro basis for m = 1: first column e has e^T A e = 0, the rest are
// orthogonal to both e and A e, so the kernel of A11 is span{e}.
Matrix draw_vperp_m1(const Matrix& A, const std::vector<double>& vel, int r,
                     double vel_max, bool negative_complement, Rng& rng) {
  const int n = static_cast<int>(vel.size());
  int ip = -1, im = -1;
  for (int i = 0; i < n; ++i) {
    if (vel[i] > 0 && (ip < 0 || vel[i] > vel[ip])) ip = i;
    if (vel[i] < 0 && (im < 0 || vel[i] < vel[im])) im = i;
  }
  if (ip < 0 || im < 0)
    throw InvalidModel(
        "m=1 construction infeasible: velocity list has no sign change");
  Vector e = Vector::Zero(n);
  e[ip] = std::sqrt(-vel[im]);
  e[im] = std::sqrt(vel[ip]);
  e /= e.norm();
  Vector ae = A * e;
  Matrix excl(n, 2);
  excl.col(0) = e;
  excl.col(1) = ae / ae.norm();
  if (r == 1) {
    Matrix cand(n, 1);
    cand.col(0) = e;
    return cand;
  }
  for (int attempt = 0; attempt < 256; ++attempt) {
    Matrix cand(n, r);
    cand.col(0) = e;
    Matrix cols(n, r - 1);
    for (int j = 0; j < r - 1; ++j) {
      Vector w = rng.gaussian_vector(n);
      w -= excl * (excl.transpose() * w);
      cols.col(j) = w;
    }
    Matrix rest;
    try {
      rest = orthonormalize(cols);
    } catch (const SolverError&) {
      continue;
    }
    cand.rightCols(r - 1) = rest;
    Matrix block = rest.transpose() * A * rest;  // A11 minus its kernel row/col
    Eigen::SelfAdjointEigenSolver<Matrix> es(block);
    const Vector eigs = es.eigenvalues();
    if (eigs.cwiseAbs().minCoeff() < 0.05 * vel_max) continue;
    if (negative_complement && eigs.maxCoeff() >= -0.05 * vel_max) continue;
    return cand;
  }
  throw InvalidModel("m=1 construction: no admissible complement basis found");
}

}  // namespace

KineticModel build_synthetic_model(int r, int n, const SyntheticSpec& spec) {
  if (r < 1 || r >= n) throw InvalidModel("need 1 <= r < n");
  if (static_cast<int>(spec.velocities.size()) != n)
    throw InvalidModel("velocity list must have length n");
  for (double v : spec.velocities)
    if (v == 0.0) throw InvalidModel("A must be one-to-one: zero velocity");
  if (spec.target_m == 1 && n < r + 2)
    throw InvalidModel("m=1 needs n >= r+2");
  if (spec.target_m != 0 && spec.target_m != 1)
    throw InvalidModel("target m must be 0 or 1");

  Rng rng(spec.seed);
  KineticModel model;
  model.n = n;
  model.r = r;
  model.A = Matrix::Zero(n, n);
  double vel_max = 0.0;
  for (int i = 0; i < n; ++i) {
    model.A(i, i) = spec.velocities[i];
    vel_max = std::max(vel_max, std::abs(spec.velocities[i]));
  }

  if (spec.vperp) {
    model.vperp_basis = orthonormalize(*spec.vperp);
  } else if (spec.target_m == 0) {
    model.vperp_basis = draw_vperp_m0(model.A, r, vel_max, rng);
  } else {
    model.vperp_basis = draw_vperp_m1(model.A, spec.velocities, r, vel_max,
                                      spec.negative_complement, rng);
  }
  model.v_basis = orthonormal_complement(model.vperp_basis);

  model.u_bar = spec.u_scale * (model.vperp_basis * rng.unit_vector(r));
  const Vector a = model.u_bar;
  const double au = a.dot(model.u_bar);

  // L = Q'(u_bar): symmetric, kernel exactly Vperp, <= -delta on V.
  const int nv = n - r;
  Matrix M = spec.micro_identity
                 ? Matrix::Identity(nv, nv)
                 : random_spd(nv, spec.micro_eig_lo, spec.micro_eig_hi, rng);
  Matrix L = -model.v_basis * M * model.v_basis.transpose();

  // Hat projector removes the u_bar component in the a-pairing.
  Matrix hat = Matrix::Identity(n, n) - model.u_bar * a.transpose() / au;

  model.B.slices.resize(n);
  std::vector<Matrix> curv(nv);
  for (int j = 0; j < nv; ++j) {
    Matrix c = rng.gaussian_matrix(n, n);
    curv[j] = spec.curvature_scale / n * (c + c.transpose());
  }
  for (int k = 0; k < n; ++k) {
    const Vector lk = L.col(k);
    Matrix t = (a * lk.transpose() + lk * a.transpose()) / (2.0 * au);
    for (int j = 0; j < nv; ++j)
      t += model.v_basis(k, j) * (hat.transpose() * curv[j] * hat);
    model.B.slices[k] = 0.5 * (t + t.transpose());
  }
  return model;
}

HypothesisReport check_hypotheses(const KineticModel& model, double tol) {
  HypothesisReport rep;
  const int n = model.n;
  const int r = model.r;
  auto add = [&rep](const std::string& name, bool pass, double residual) {
    rep.checks.push_back({name, pass, residual});
  };

  const double a_scale = std::max(model.A.norm(), 1e-300);
  const double asym = (model.A - model.A.transpose()).norm() / a_scale;
  add("A symmetric", asym <= tol, asym);

  Eigen::SelfAdjointEigenSolver<Matrix> ea(0.5 * (model.A + model.A.transpose()));
  const Vector aeig = ea.eigenvalues();
  rep.min_abs_eig_A = aeig.cwiseAbs().minCoeff();
  const double amax = aeig.cwiseAbs().maxCoeff();
  add("A one-to-one", rep.min_abs_eig_A > tol * amax, rep.min_abs_eig_A);

  Matrix full(n, n);
  full.leftCols(r) = model.vperp_basis;
  full.rightCols(n - r) = model.v_basis;
  const double ortho = (full.transpose() * full - Matrix::Identity(n, n)).norm();
  add("basis orthonormal", ortho <= tol * n, ortho);

  const double b_scale = std::max(model.B.scale(), 1e-300);
  double bsym = 0.0;
  for (const auto& s : model.B.slices)
    bsym = std::max(bsym, (s - s.transpose()).norm());
  bsym /= b_scale;
  add("B symmetric", bsym <= tol, bsym);

  // P_{Vperp} B == 0, checked exactly on the coefficient tensor.
  double range_res = 0.0;
  for (int c = 0; c < r; ++c) {
    Matrix acc = Matrix::Zero(n, n);
    for (int k = 0; k < n; ++k) acc += model.vperp_basis(k, c) * model.B.slices[k];
    range_res = std::max(range_res, acc.norm());
  }
  range_res /= b_scale;
  add("range of B in V", range_res <= tol, range_res);

  const double ubar_scale = std::max(model.u_bar.squaredNorm(), 1e-300);
  const double qbar = model.evaluate_Q(model.u_bar).norm() / (b_scale * ubar_scale);
  add("Q(u_bar) = 0", qbar <= tol, qbar);

  Matrix qp = model.linearize_Q(model.u_bar);
  const double qp_scale = std::max(qp.norm(), 1e-300);
  const double qpsym = (qp - qp.transpose()).norm() / qp_scale;
  add("Q'(u_bar) self-adjoint", qpsym <= tol, qpsym);

  // Kernel of Q'(u_bar) vs Vperp by principal angles of the SVD null space.
  Eigen::JacobiSVD<Matrix> svd(0.5 * (qp + qp.transpose()),
                               Eigen::ComputeFullV);
  const Vector sv = svd.singularValues();
  int kdim = 0;
  for (int i = 0; i < n; ++i)
    if (sv[i] <= 1e-8 * sv[0]) ++kdim;
  double angle = M_PI / 2;
  if (kdim == r)
    angle = max_principal_angle(svd.matrixV().rightCols(kdim), model.vperp_basis);
  add("ker Q'(u_bar) = Vperp", kdim == r && angle <= 1e-7, angle);

  Eigen::SelfAdjointEigenSolver<Matrix> ee(
      model.v_basis.transpose() * qp * model.v_basis);
  rep.spectral_gap_delta = -ee.eigenvalues().maxCoeff();
  add("Q'(u_bar)|_V <= -delta", rep.spectral_gap_delta > 0.0,
      rep.spectral_gap_delta);
  return rep;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

void write_doubles(std::ostream& os, const char* key, const double* p,
                   long count) {
  os << key << ":";
  for (long i = 0; i < count; ++i) os << " " << format_g17(p[i]);
  os << "\n";
}

std::vector<double> parse_doubles(const std::string& line) {
  std::istringstream iss(line);
  std::vector<double> out;
  double v;
  while (iss >> v) out.push_back(v);
  return out;
}

}  // namespace

std::string serialize_model(const KineticModel& model) {
  std::ostringstream os;
  os << "kinshock-model v1\n";
  os << "label: " << model.label << "\n";
  os << "n: " << model.n << "\n";
  os << "r: " << model.r << "\n";
  Matrix at = model.A.transpose();  // row-major order
  write_doubles(os, "A", at.data(), at.size());
  Matrix vt = model.vperp_basis.transpose();
  write_doubles(os, "vperp_basis", vt.data(), vt.size());
  write_doubles(os, "u_bar", model.u_bar.data(), model.u_bar.size());
  for (int k = 0; k < model.n; ++k) {
    Matrix st = model.B.slices[k].transpose();
    write_doubles(os, ("B" + std::to_string(k)).c_str(), st.data(), st.size());
  }
  return os.str();
}

KineticModel parse_model(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != "kinshock-model v1")
    throw SolverError("model parse: bad header");
  KineticModel m;
  auto expect_key = [&](const std::string& key) -> std::string {
    if (!std::getline(is, line))
      throw SolverError("model parse: missing key " + key);
    const std::string prefix = key + ":";
    if (line.rfind(prefix, 0) != 0)
      throw SolverError("model parse: expected key " + key + ", got: " + line);
    std::string rest = line.substr(prefix.size());
    if (!rest.empty() && rest[0] == ' ') rest.erase(0, 1);
    return rest;
  };
  m.label = expect_key("label");
  m.n = std::stoi(expect_key("n"));
  m.r = std::stoi(expect_key("r"));
  if (m.n < 2 || m.r < 1 || m.r >= m.n)
    throw SolverError("model parse: bad dimensions");
  auto read_matrix = [&](const std::string& key, int rows, int cols) {
    auto vals = parse_doubles(expect_key(key));
    if (static_cast<int>(vals.size()) != rows * cols)
      throw SolverError("model parse: wrong count for " + key);
    Matrix out(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) out(i, j) = vals[i * cols + j];
    return out;
  };
  m.A = read_matrix("A", m.n, m.n);
  m.vperp_basis = read_matrix("vperp_basis", m.n, m.r);
  auto ub = parse_doubles(expect_key("u_bar"));
  if (static_cast<int>(ub.size()) != m.n)
    throw SolverError("model parse: wrong count for u_bar");
  m.u_bar = Eigen::Map<Vector>(ub.data(), m.n);
  m.B.slices.resize(m.n);
  for (int k = 0; k < m.n; ++k)
    m.B.slices[k] = read_matrix("B" + std::to_string(k), m.n, m.n);
  m.v_basis = orthonormal_complement(m.vperp_basis);
  return m;
}

void save_model(const KineticModel& model, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw SolverError("cannot open " + path + " for writing");
  f << serialize_model(model);
}

KineticModel load_model(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw SolverError("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_model(ss.str());
}

}  // namespace kinshock
