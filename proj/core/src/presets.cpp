#include "kinshock/presets.hpp"

#include <cmath>

#include "kinshock/canonical.hpp"

namespace kinshock {

namespace {

// Gamma0 is linear in A, so one rescale of the velocity spectrum pins its
// norm below the symbol-bound threshold 3/4 (see resolvent symbol_bounds).
KineticModel build_capped(int r, int n, SyntheticSpec spec, double cap = 0.70) {
  KineticModel model = build_synthetic_model(r, n, spec);
  const auto canon = reduce_to_canonical(model);
  Eigen::SelfAdjointEigenSolver<Matrix> es(canon.Gamma0);
  const double norm = es.eigenvalues().cwiseAbs().maxCoeff();
  if (norm > cap) {
    const double scale = cap / norm;
    for (auto& v : spec.velocities) v *= scale;
    model = build_synthetic_model(r, n, spec);
  }
  return model;
}

KineticModel make_demo_m0() {
  SyntheticSpec spec;
  spec.target_m = 0;
  spec.velocities = {0.9, -0.85, 0.6, -0.55, 0.4, -0.35, 0.25, -0.2};
  spec.seed = 3;
  spec.curvature_scale = 0.25;
  spec.micro_eig_lo = 0.8;
  spec.micro_eig_hi = 1.6;
  KineticModel m = build_capped(2, 8, spec);
  m.label = "demo-m0";
  return m;
}

KineticModel make_demo_m1() {
  SyntheticSpec spec;
  spec.target_m = 1;
  spec.velocities = {0.9, -0.9, 0.7, -0.7, 0.55, -0.55, 0.4, -0.4, 0.3, -0.3};
  spec.seed = 4;
  spec.curvature_scale = 0.7;
  spec.micro_eig_lo = 0.8;
  spec.micro_eig_hi = 1.5;
  spec.negative_complement = true;
  KineticModel m = build_capped(2, 10, spec);
  m.label = "demo-m1";
  return m;
}

KineticModel make_boltz_like() {
  // Velocities xi/<xi> of a symmetric xi grid, the hard-sphere transport
  // spectrum shape, scaled into the admissible range.
  std::vector<double> xis = {0.1, 0.35, 0.65, 1.0, 1.45, 2.0,
                             2.7,  3.5, 4.4, 5.4, 6.5, 7.7};
  SyntheticSpec spec;
  for (double xi : xis) {
    const double v = xi / std::sqrt(1.0 + xi * xi);
    spec.velocities.push_back(v);
    spec.velocities.push_back(-v);
  }
  spec.target_m = 0;
  spec.seed = 26;
  spec.curvature_scale = 0.2;
  spec.micro_eig_lo = 0.9;
  spec.micro_eig_hi = 1.4;
  KineticModel m = build_capped(5, 24, spec);
  m.label = "boltz-like";
  return m;
}

KineticModel make_sing(int k) {
  // Structured macro basis: coordinate planes (e1,e3) and (e2,e4) rotated by
  // phi, leaving the +-2^-k directions entirely in V, so Gamma0 carries the
  // small eigenvalues exactly and min |eig A| = 2^-k exactly.
  const double tiny = std::ldexp(1.0, -k);
  const double a = 0.9, b = 0.6, phi = 0.15;
  SyntheticSpec spec;
  spec.velocities = {a, -a, b, -b, tiny, -tiny};
  spec.target_m = 0;
  spec.seed = 100 + k;
  spec.curvature_scale = 0.15;
  spec.micro_identity = true;
  Matrix vp = Matrix::Zero(6, 2);
  vp(0, 0) = std::cos(phi);
  vp(2, 0) = std::sin(phi);
  vp(1, 1) = std::cos(phi);
  vp(3, 1) = std::sin(phi);
  spec.vperp = vp;
  KineticModel m = build_synthetic_model(2, 6, spec);
  m.label = "sing-" + std::to_string(k);
  return m;
}

}  // namespace

KineticModel make_preset(const std::string& name) {
  if (name == "demo-m0") return make_demo_m0();
  if (name == "demo-m1") return make_demo_m1();
  if (name == "boltz-like") return make_boltz_like();
  if (name.rfind("sing-", 0) == 0) {
    const int k = std::stoi(name.substr(5));
    if (k < 1 || k > 16) throw SolverError("sing-k supports k in 1..16");
    return make_sing(k);
  }
  throw SolverError("unknown preset: " + name);
}

std::vector<PresetInfo> preset_models() {
  std::vector<PresetInfo> out;
  out.push_back({"demo-m0", 0});
  out.push_back({"demo-m1", 1});
  out.push_back({"boltz-like", 0});
  for (int k = 1; k <= 12; ++k)
    out.push_back({"sing-" + std::to_string(k), 0});
  return out;
}

int preset_default_p(const std::string& name) {
  for (const auto& info : preset_models())
    if (info.name == name) return info.default_p;
  return 0;
}

}  // namespace kinshock
