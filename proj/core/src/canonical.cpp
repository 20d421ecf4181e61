#include "kinshock/canonical.hpp"

#include <cmath>
#include <sstream>

namespace kinshock {

MacroMicroSplit macro_micro_split(const KineticModel& model) {
  MacroMicroSplit s;
  const Matrix& vp = model.vperp_basis;
  const Matrix& vb = model.v_basis;
  s.A11 = vp.transpose() * model.A * vp;
  s.A12 = vp.transpose() * model.A * vb;
  s.A21 = vb.transpose() * model.A * vp;
  s.A22 = vb.transpose() * model.A * vb;
  Matrix e = vb.transpose() * model.linearize_Q(model.u_bar) * vb;
  s.E = 0.5 * (e + e.transpose());
  const int nv = model.n - model.r;
  s.S = Matrix::Identity(nv, nv);
  s.S_inv = s.S;
  s.normalized = false;
  return s;
}

MacroMicroSplit normalize_E(const MacroMicroSplit& split) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(-split.E);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw InvalidModel("normalize_E: E is not negative definite");
  const Matrix s = es.operatorSqrt();
  const Matrix si = es.operatorInverseSqrt();
  MacroMicroSplit out;
  out.A11 = split.A11;
  out.A12 = split.A12 * si;
  out.A21 = si * split.A21;
  out.A22 = si * split.A22 * si;
  out.A22 = 0.5 * (out.A22 + out.A22.transpose());
  out.E = -Matrix::Identity(split.E.rows(), split.E.cols());
  out.S = s * split.S;
  out.S_inv = split.S_inv * si;
  out.normalized = true;
  return out;
}

A11Decomposition decompose_A11(const MacroMicroSplit& split) {
  const int r = static_cast<int>(split.A11.rows());
  Eigen::SelfAdjointEigenSolver<Matrix> es(split.A11);
  const Vector eig = es.eigenvalues();
  const double amax = std::max(eig.cwiseAbs().maxCoeff(), 1e-300);

  A11Decomposition dec;
  std::vector<int> ker, im;
  for (int i = 0; i < r; ++i)
    (std::abs(eig[i]) <= 1e-10 * amax ? ker : im).push_back(i);
  dec.m = static_cast<int>(ker.size());
  dec.ker_basis.resize(r, dec.m);
  dec.im_basis.resize(r, r - dec.m);
  for (size_t i = 0; i < ker.size(); ++i)
    dec.ker_basis.col(i) = es.eigenvectors().col(ker[i]);
  for (size_t i = 0; i < im.size(); ++i)
    dec.im_basis.col(i) = es.eigenvectors().col(im[i]);

  dec.T12 = dec.ker_basis.transpose() * split.A12;
  dec.Atilde12 = dec.im_basis.transpose() * split.A12;
  dec.Atilde11 = dec.im_basis.transpose() * split.A11 * dec.im_basis;

  // Lemma 2.2 verification.
  if (dec.m > 0) {
    Eigen::JacobiSVD<Matrix> svd(dec.T12, Eigen::ComputeFullV);
    dec.t12_min_sv = svd.singularValues().minCoeff();
    if (dec.t12_min_sv <= 1e-10 * amax)
      throw InvalidModel("Lemma 2.2 failure: T12* has nontrivial kernel "
                         "(model violates A one-to-one), min sv " +
                         std::to_string(dec.t12_min_sv));
    // im T12 = ker A11: compare the span of K T12 with span K.
    Matrix kt = orthonormalize(dec.ker_basis * dec.T12 *
                               svd.matrixV().leftCols(dec.m));
    dec.ker_angle = max_principal_angle(kt, dec.ker_basis);
  }
  if (r - dec.m > 0) {
    Eigen::SelfAdjointEigenSolver<Matrix> ea(dec.Atilde11);
    dec.atilde11_min_abs = ea.eigenvalues().cwiseAbs().minCoeff();
    if (dec.atilde11_min_abs <= 1e-10 * amax)
      throw InvalidModel("Lemma 2.2 failure: Atilde11 not invertible");
  }
  return dec;
}

Vector CanonicalSystem::apply_Q(const Vector& z) const { return apply_Q(z, z); }

Vector CanonicalSystem::apply_Q(const Vector& z1, const Vector& z2) const {
  Vector out(n);
  for (int k = 0; k < n; ++k) out[k] = z1.dot(Qtilde[k] * z2);
  return out;
}

CanonicalSystem build_canonical(const MacroMicroSplit& split,
                                const A11Decomposition& dec,
                                const KineticModel& model) {
  if (!split.normalized)
    throw SolverError("build_canonical requires an E-normalized split");
  CanonicalSystem cs;
  cs.n = model.n;
  cs.r = model.r;
  cs.m = dec.m;
  cs.dim_c = dec.m + model.r;
  cs.dim_h = model.n - model.r - dec.m;
  cs.u_bar = model.u_bar;

  const int nv = model.n - model.r;
  const int m = dec.m;
  const int r = model.r;

  // Split V into V1 = im T12* and Vt = ker T12 via the SVD of T12.
  Matrix V1(nv, m), Vt(nv, nv - m);
  if (m > 0) {
    Eigen::JacobiSVD<Matrix> svd(dec.T12, Eigen::ComputeFullV);
    V1 = svd.matrixV().leftCols(m);
    Vt = svd.matrixV().rightCols(nv - m);
  } else {
    Vt = Matrix::Identity(nv, nv);
  }

  cs.T12 = dec.T12;
  cs.ker_basis = dec.ker_basis;
  cs.im_basis = dec.im_basis;
  cs.V1 = V1;
  cs.Vt = Vt;
  cs.S = split.S;
  cs.S_inv = split.S_inv;
  cs.That = dec.T12 * V1;  // m x m, invertible by Lemma 2.2
  Matrix that_inv(m, m), that_t_inv(m, m);
  if (m > 0) {
    that_inv = cs.That.partialPivLu().inverse();
    that_t_inv = cs.That.transpose().partialPivLu().inverse();
  }

  cs.Atilde12 = dec.Atilde12;
  cs.Atilde11_inv = (r - m > 0)
                        ? Matrix(dec.Atilde11.partialPivLu().inverse())
                        : Matrix(0, 0);

  // Theta = A22 - Atilde12^T Atilde11^{-1} Atilde12 (normalized blocks).
  Matrix theta = split.A22;
  if (r - m > 0)
    theta -= dec.Atilde12.transpose() * cs.Atilde11_inv * dec.Atilde12;
  theta = 0.5 * (theta + theta.transpose());

  cs.Gamma0 = Vt.transpose() * theta * Vt;
  cs.Gamma0 = 0.5 * (cs.Gamma0 + cs.Gamma0.transpose());
  cs.Gamma1 = (m > 0) ? Matrix(-that_t_inv * V1.transpose() * theta * Vt)
                      : Matrix(0, cs.dim_h);

  Eigen::SelfAdjointEigenSolver<Matrix> eg(cs.Gamma0);
  cs.gamma0_min_abs_eig = eg.eigenvalues().cwiseAbs().minCoeff();
  if (cs.gamma0_min_abs_eig <= 1e-12 * std::max(cs.Gamma0.norm(), 1e-300))
    throw InvalidModel("Gamma0 is singular to working precision");

  cs.J = Matrix::Zero(cs.dim_c, cs.dim_c);
  if (m > 0) cs.J.block(0, m, m, m) = Matrix::Identity(m, m);

  // Coordinate maps. Mac/MicN give (macro, normalized micro) coordinates of
  // an ambient offset; MicR is the normalized left-multiplier for residuals.
  const Matrix Mac = model.vperp_basis.transpose();
  const Matrix MicN = split.S * model.v_basis.transpose();
  const Matrix MicR = split.S_inv * model.v_basis.transpose();

  Matrix aiat(r - m, cs.dim_h);
  if (r - m > 0) aiat = cs.Atilde11_inv * dec.Atilde12 * Vt;

  cs.C = Matrix::Zero(cs.n, cs.n);
  if (m > 0) {
    cs.C.middleRows(0, m) =
        dec.ker_basis.transpose() * Mac - cs.Gamma1 * (Vt.transpose() * MicN);
    cs.C.middleRows(m, m) = -that_t_inv * (V1.transpose() * MicN);
  }
  cs.C.middleRows(2 * m, r - m) =
      dec.im_basis.transpose() * Mac + aiat * (Vt.transpose() * MicN);
  cs.C.middleRows(cs.dim_c, cs.dim_h) = Vt.transpose() * MicN;

  cs.P = Matrix::Zero(cs.n, cs.n);
  {
    // u1 = z_c1 + Gamma1 z_h; v1 = -That^T z_c2; ut = z_c3 - aiat z_h; vt = z_h
    Matrix vp_k = model.vperp_basis * dec.ker_basis;
    Matrix vp_i = model.vperp_basis * dec.im_basis;
    Matrix vb_v1 = model.v_basis * (split.S_inv * V1);
    Matrix vb_vt = model.v_basis * (split.S_inv * Vt);
    if (m > 0) {
      cs.P.middleCols(0, m) = vp_k;
      cs.P.middleCols(m, m) = -vb_v1 * cs.That.transpose();
    }
    cs.P.middleCols(2 * m, r - m) = vp_i;
    cs.P.middleCols(cs.dim_c, cs.dim_h) = vb_vt;
    if (m > 0) cs.P.middleCols(cs.dim_c, cs.dim_h) += vp_k * cs.Gamma1;
    if (r - m > 0) cs.P.middleCols(cs.dim_c, cs.dim_h) -= vp_i * aiat;
  }

  // Residual transform W: canonical residual = W * (A w' - Q'(u_bar) w - f).
  cs.W = Matrix::Zero(cs.n, cs.n);
  if (m > 0) {
    Matrix coupling = V1.transpose() * dec.Atilde12.transpose() *
                          cs.Atilde11_inv * dec.im_basis.transpose() +
                      V1.transpose() * theta * V1 * that_inv *
                          dec.ker_basis.transpose();
    cs.W.middleRows(0, m) =
        that_t_inv * (V1.transpose() * MicR - coupling * Mac);
    cs.W.middleRows(m, m) =
        -that_t_inv * that_inv * dec.ker_basis.transpose() * Mac;
  }
  if (r - m > 0) {
    Matrix row = dec.im_basis.transpose();
    if (m > 0) row -= dec.Atilde12 * V1 * that_inv * dec.ker_basis.transpose();
    cs.W.middleRows(2 * m, r - m) = cs.Atilde11_inv * row * Mac;
  }
  {
    Matrix hrow = Vt.transpose() * MicR;
    if (r - m > 0)
      hrow -= Vt.transpose() * dec.Atilde12.transpose() * cs.Atilde11_inv *
              dec.im_basis.transpose() * Mac;
    if (m > 0)
      hrow -= Vt.transpose() * theta * V1 * that_inv *
              dec.ker_basis.transpose() * Mac;
    cs.W.middleRows(cs.dim_c, cs.dim_h) = hrow;
  }

  // Canonical quadratic tensor: Q~(z) = W B(Pz, Pz).
  cs.Qtilde.resize(cs.n);
  for (int k = 0; k < cs.n; ++k) {
    Matrix acc = Matrix::Zero(cs.n, cs.n);
    for (int j = 0; j < cs.n; ++j) {
      if (cs.W(k, j) != 0.0) acc += cs.W(k, j) * model.B.slices[j];
    }
    Matrix t = cs.P.transpose() * acc * cs.P;
    cs.Qtilde[k] = 0.5 * (t + t.transpose());
  }

  // Verify the reduction identities; they certify Lemma 1.1 numerically.
  const double scale = std::max({model.A.norm(), cs.Gamma0.norm(), 1.0});
  double res = (cs.C * cs.P - Matrix::Identity(cs.n, cs.n)).norm();
  Matrix wap = cs.W * model.A * cs.P;
  Matrix expected = Matrix::Zero(cs.n, cs.n);
  expected.topLeftCorner(cs.dim_c, cs.dim_c) =
      Matrix::Identity(cs.dim_c, cs.dim_c);
  expected.bottomRightCorner(cs.dim_h, cs.dim_h) = cs.Gamma0;
  res = std::max(res, (wap - expected).norm() / scale);
  Matrix wlp = cs.W * model.linearize_Q(model.u_bar) * cs.P;
  Matrix expected_l = Matrix::Zero(cs.n, cs.n);
  expected_l.topLeftCorner(cs.dim_c, cs.dim_c) = cs.J;
  expected_l.bottomRightCorner(cs.dim_h, cs.dim_h) =
      -Matrix::Identity(cs.dim_h, cs.dim_h);
  res = std::max(res, (wlp - expected_l).norm() / scale);
  cs.reduction_residual = res;
  if (res > 1e-8)
    throw SolverError("canonical reduction identities failed, residual " +
                      std::to_string(res));
  return cs;
}

CanonicalSystem reduce_to_canonical(const KineticModel& model) {
  const auto split = normalize_E(macro_micro_split(model));
  const auto dec = decompose_A11(split);
  return build_canonical(split, dec, model);
}

double residual_canonical(const CanonicalSystem& canon,
                          const GridFunction& trajectory) {
  const int nn = trajectory.size();
  Matrix z(canon.n, nn);
  for (int i = 0; i < nn; ++i)
    z.col(i) = canon.to_canonical(trajectory.values.col(i));
  Matrix dz = derivative_fd2(z, trajectory.h);
  double worst = 0.0;
  for (int i = 0; i < nn; ++i) {
    const Vector q = canon.apply_Q(z.col(i));
    const Vector rc = dz.col(i).head(canon.dim_c) -
                      canon.J * z.col(i).head(canon.dim_c) - q.head(canon.dim_c);
    const Vector rh = canon.Gamma0 * dz.col(i).tail(canon.dim_h) +
                      z.col(i).tail(canon.dim_h) - q.tail(canon.dim_h);
    worst = std::max(worst, rc.norm() + rh.norm());
  }
  return worst;
}

double conservation_check(const KineticModel& model,
                          const GridFunction& trajectory, const Vector& q) {
  double worst = 0.0;
  for (int i = 0; i < trajectory.size(); ++i) {
    const Vector flux =
        model.vperp_basis.transpose() * (model.A * trajectory.values.col(i));
    worst = std::max(worst, (flux - q).norm());
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

void put_matrix(std::ostream& os, const std::string& key, const Matrix& m) {
  os << key << ": " << m.rows() << " " << m.cols();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) os << " " << format_g17(m(i, j));
  os << "\n";
}

Matrix get_matrix(std::istream& is, const std::string& key) {
  std::string line;
  if (!std::getline(is, line))
    throw SolverError("canonical parse: missing " + key);
  std::istringstream ls(line);
  std::string k;
  ls >> k;
  if (k != key + ":")
    throw SolverError("canonical parse: expected " + key + ", got " + k);
  int rows, cols;
  ls >> rows >> cols;
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (!(ls >> m(i, j)))
        throw SolverError("canonical parse: short row for " + key);
  return m;
}

}  // namespace

std::string serialize_canonical(const CanonicalSystem& cs) {
  std::ostringstream os;
  os << "kinshock-canonical v1\n";
  os << "dims: " << cs.n << " " << cs.r << " " << cs.m << "\n";
  put_matrix(os, "Gamma0", cs.Gamma0);
  put_matrix(os, "Gamma1", cs.Gamma1);
  put_matrix(os, "J", cs.J);
  put_matrix(os, "That", cs.That);
  put_matrix(os, "T12", cs.T12);
  put_matrix(os, "Atilde11_inv", cs.Atilde11_inv);
  put_matrix(os, "Atilde12", cs.Atilde12);
  put_matrix(os, "ker_basis", cs.ker_basis);
  put_matrix(os, "im_basis", cs.im_basis);
  put_matrix(os, "V1", cs.V1);
  put_matrix(os, "Vt", cs.Vt);
  put_matrix(os, "S", cs.S);
  put_matrix(os, "S_inv", cs.S_inv);
  put_matrix(os, "P", cs.P);
  put_matrix(os, "C", cs.C);
  put_matrix(os, "W", cs.W);
  put_matrix(os, "u_bar", cs.u_bar);
  for (int k = 0; k < cs.n; ++k)
    put_matrix(os, "Q" + std::to_string(k), cs.Qtilde[k]);
  return os.str();
}

CanonicalSystem parse_canonical(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != "kinshock-canonical v1")
    throw SolverError("canonical parse: bad header");
  CanonicalSystem cs;
  if (!std::getline(is, line)) throw SolverError("canonical parse: no dims");
  {
    std::istringstream ls(line);
    std::string k;
    ls >> k >> cs.n >> cs.r >> cs.m;
    if (k != "dims:") throw SolverError("canonical parse: expected dims");
  }
  cs.dim_c = cs.m + cs.r;
  cs.dim_h = cs.n - cs.r - cs.m;
  cs.Gamma0 = get_matrix(is, "Gamma0");
  cs.Gamma1 = get_matrix(is, "Gamma1");
  cs.J = get_matrix(is, "J");
  cs.That = get_matrix(is, "That");
  cs.T12 = get_matrix(is, "T12");
  cs.Atilde11_inv = get_matrix(is, "Atilde11_inv");
  cs.Atilde12 = get_matrix(is, "Atilde12");
  cs.ker_basis = get_matrix(is, "ker_basis");
  cs.im_basis = get_matrix(is, "im_basis");
  cs.V1 = get_matrix(is, "V1");
  cs.Vt = get_matrix(is, "Vt");
  cs.S = get_matrix(is, "S");
  cs.S_inv = get_matrix(is, "S_inv");
  cs.P = get_matrix(is, "P");
  cs.C = get_matrix(is, "C");
  cs.W = get_matrix(is, "W");
  cs.u_bar = get_matrix(is, "u_bar");
  cs.Qtilde.resize(cs.n);
  for (int k = 0; k < cs.n; ++k)
    cs.Qtilde[k] = get_matrix(is, "Q" + std::to_string(k));
  Eigen::SelfAdjointEigenSolver<Matrix> eg(cs.Gamma0);
  cs.gamma0_min_abs_eig = eg.eigenvalues().cwiseAbs().minCoeff();
  return cs;
}

}  // namespace kinshock
