#include "kinshock/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "kinshock/canonical.hpp"
#include "kinshock/chapman_enskog.hpp"
#include "kinshock/manifolds.hpp"
#include "kinshock/presets.hpp"
#include "kinshock/profiles.hpp"
#include "kinshock/resolvent.hpp"

namespace kinshock {

using nlohmann::json;

namespace {

const char* kVersion = "kinshock 0.1.0";

const std::vector<std::string> kScenarios = {
    "check-hypotheses", "chapman-enskog",  "reduce",       "resolvent-probe",
    "stable-manifold",  "center-taylor",   "profile",      "sweep"};

void reject_unknown(const json& obj, const std::vector<std::string>& allowed,
                    const std::string& where, std::vector<std::string>& errs) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const auto& k : allowed)
      if (it.key() == k) known = true;
    if (!known) errs.push_back("unknown key '" + it.key() + "' in " + where);
  }
}

}  // namespace

RunConfig parse_config(const std::string& document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  std::vector<std::string> errs;
  RunConfig cfg;
  reject_unknown(doc, {"model", "scenario", "out", "seed", "workers", "p",
                       "params"},
                 "top level", errs);

  if (!doc.contains("model") || !doc["model"].is_object()) {
    errs.push_back("missing or invalid 'model' object");
  } else {
    const json& m = doc["model"];
    reject_unknown(m, {"preset", "file", "inline"}, "model", errs);
    int sources = 0;
    if (m.contains("preset")) {
      cfg.model.preset = m["preset"].get<std::string>();
      ++sources;
    }
    if (m.contains("file")) {
      cfg.model.file = m["file"].get<std::string>();
      ++sources;
    }
    if (m.contains("inline")) {
      ++sources;
      const json& io = m["inline"];
      reject_unknown(io,
                     {"r", "n", "m", "velocities", "seed", "curvature_scale",
                      "micro_identity", "micro_eig_lo", "micro_eig_hi",
                      "u_scale", "negative_complement"},
                     "model.inline", errs);
      cfg.model.has_inline = true;
      try {
        cfg.model.inline_r = io.at("r").get<int>();
        cfg.model.inline_n = io.at("n").get<int>();
        cfg.model.inline_spec.target_m = io.value("m", 0);
        cfg.model.inline_spec.velocities =
            io.at("velocities").get<std::vector<double>>();
        cfg.model.inline_spec.seed = io.value("seed", 1);
        cfg.model.inline_spec.curvature_scale = io.value("curvature_scale", 0.3);
        cfg.model.inline_spec.micro_identity = io.value("micro_identity", false);
        cfg.model.inline_spec.micro_eig_lo = io.value("micro_eig_lo", 0.7);
        cfg.model.inline_spec.micro_eig_hi = io.value("micro_eig_hi", 1.5);
        cfg.model.inline_spec.u_scale = io.value("u_scale", 1.0);
        cfg.model.inline_spec.negative_complement =
            io.value("negative_complement", false);
      } catch (const std::exception& e) {
        errs.push_back(std::string("model.inline: ") + e.what());
      }
    }
    if (sources != 1)
      errs.push_back("model must specify exactly one of preset/file/inline");
  }

  if (!doc.contains("scenario")) {
    errs.push_back("missing 'scenario'");
  } else {
    cfg.scenario = doc["scenario"].get<std::string>();
    bool ok = false;
    for (const auto& s : kScenarios)
      if (s == cfg.scenario) ok = true;
    if (!ok) errs.push_back("unknown scenario '" + cfg.scenario + "'");
  }
  if (doc.contains("out")) cfg.out_dir = doc["out"].get<std::string>();
  if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
  if (doc.contains("workers")) cfg.workers = doc["workers"].get<int>();
  if (doc.contains("p")) cfg.p = doc["p"].get<int>();
  if (cfg.workers < 1) errs.push_back("workers must be >= 1");

  if (doc.contains("params")) {
    const json& p = doc["params"];
    reject_unknown(p,
                   {"hypothesis_tol", "taylor_order", "eps_list", "grid_nodes",
                    "domain_widths", "stable_h", "stable_X", "nu_tilde_factor",
                    "center_h", "center_X", "theta_count", "omega_max",
                    "omega_count", "random_g_count"},
                   "params", errs);
    cfg.hypothesis_tol = p.value("hypothesis_tol", cfg.hypothesis_tol);
    cfg.taylor_order = p.value("taylor_order", cfg.taylor_order);
    if (p.contains("eps_list"))
      cfg.eps_list = p["eps_list"].get<std::vector<double>>();
    cfg.grid_nodes = p.value("grid_nodes", cfg.grid_nodes);
    cfg.domain_widths = p.value("domain_widths", cfg.domain_widths);
    cfg.stable_h = p.value("stable_h", cfg.stable_h);
    cfg.stable_X = p.value("stable_X", cfg.stable_X);
    cfg.nu_tilde_factor = p.value("nu_tilde_factor", cfg.nu_tilde_factor);
    cfg.center_h = p.value("center_h", cfg.center_h);
    cfg.center_X = p.value("center_X", cfg.center_X);
    cfg.theta_count = p.value("theta_count", cfg.theta_count);
    cfg.omega_max = p.value("omega_max", cfg.omega_max);
    cfg.omega_count = p.value("omega_count", cfg.omega_count);
    cfg.random_g_count = p.value("random_g_count", cfg.random_g_count);
  }

  auto positive = [&errs](double v, const char* name) {
    if (!(v > 0)) errs.push_back(std::string(name) + " must be positive");
  };
  positive(cfg.hypothesis_tol, "params.hypothesis_tol");
  positive(cfg.stable_h, "params.stable_h");
  positive(cfg.center_h, "params.center_h");
  positive(cfg.domain_widths, "params.domain_widths");
  positive(cfg.nu_tilde_factor, "params.nu_tilde_factor");
  if (cfg.taylor_order < 2) errs.push_back("params.taylor_order must be >= 2");
  if (cfg.grid_nodes < 16) errs.push_back("params.grid_nodes must be >= 16");
  for (double e : cfg.eps_list) positive(e, "params.eps_list entry");

  if (!errs.empty()) {
    std::string msg = "config validation failed:";
    for (const auto& e : errs) msg += "\n  - " + e;
    throw ConfigError(msg);
  }
  return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
  json doc;
  if (!cfg.model.preset.empty()) doc["model"]["preset"] = cfg.model.preset;
  if (!cfg.model.file.empty()) doc["model"]["file"] = cfg.model.file;
  if (cfg.model.has_inline) {
    json io;
    io["r"] = cfg.model.inline_r;
    io["n"] = cfg.model.inline_n;
    io["m"] = cfg.model.inline_spec.target_m;
    io["velocities"] = cfg.model.inline_spec.velocities;
    io["seed"] = cfg.model.inline_spec.seed;
    io["curvature_scale"] = cfg.model.inline_spec.curvature_scale;
    io["micro_identity"] = cfg.model.inline_spec.micro_identity;
    io["micro_eig_lo"] = cfg.model.inline_spec.micro_eig_lo;
    io["micro_eig_hi"] = cfg.model.inline_spec.micro_eig_hi;
    io["u_scale"] = cfg.model.inline_spec.u_scale;
    io["negative_complement"] = cfg.model.inline_spec.negative_complement;
    doc["model"]["inline"] = io;
  }
  doc["scenario"] = cfg.scenario;
  doc["out"] = cfg.out_dir;
  doc["seed"] = cfg.seed;
  doc["workers"] = cfg.workers;
  doc["p"] = cfg.p;
  json p;
  p["hypothesis_tol"] = cfg.hypothesis_tol;
  p["taylor_order"] = cfg.taylor_order;
  p["eps_list"] = cfg.eps_list;
  p["grid_nodes"] = cfg.grid_nodes;
  p["domain_widths"] = cfg.domain_widths;
  p["stable_h"] = cfg.stable_h;
  p["stable_X"] = cfg.stable_X;
  p["nu_tilde_factor"] = cfg.nu_tilde_factor;
  p["center_h"] = cfg.center_h;
  p["center_X"] = cfg.center_X;
  p["theta_count"] = cfg.theta_count;
  p["omega_max"] = cfg.omega_max;
  p["omega_count"] = cfg.omega_count;
  p["random_g_count"] = cfg.random_g_count;
  doc["params"] = p;
  return doc.dump(2) + "\n";
}

KineticModel resolve_model(const ModelSource& source) {
  if (!source.preset.empty()) return make_preset(source.preset);
  if (!source.file.empty()) return load_model(source.file);
  if (source.has_inline)
    return build_synthetic_model(source.inline_r, source.inline_n,
                                 source.inline_spec);
  throw ConfigError("empty model source");
}

void parallel_for(int jobs, int workers, const std::function<void(int)>& fn) {
  if (const char* env = std::getenv("KINSHOCK_WORKERS")) {
    const int w = std::atoi(env);
    if (w >= 1) workers = w;
  }
  workers = std::min(workers, jobs);
  if (workers <= 1) {
    for (int i = 0; i < jobs; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      try {
        for (int i = w; i < jobs; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

bool RunManifest::all_passed() const {
  for (const auto& v : verdicts)
    if (v.status == Verdict::Status::Fail) return false;
  return true;
}

std::string RunManifest::to_json() const {
  json doc;
  doc["version"] = version;
  doc["wall_clock_seconds"] = wall_clock_seconds;
  doc["config"] = json::parse(config_echo);
  json vs = json::array();
  for (const auto& v : verdicts) {
    json jv;
    jv["name"] = v.name;
    jv["status"] = v.status == Verdict::Status::Pass   ? "pass"
                   : v.status == Verdict::Status::Fail ? "fail"
                                                       : "skip";
    jv["value"] = v.value;
    jv["detail"] = v.detail;
    vs.push_back(jv);
  }
  doc["verdicts"] = vs;
  json fs = json::array();
  for (const auto& f : files) {
    json jf;
    jf["path"] = f.first;
    jf["digest"] = f.second;
    fs.push_back(jf);
  }
  doc["files"] = fs;
  return doc.dump(2) + "\n";
}

namespace {

class Outputs {
 public:
  explicit Outputs(std::string dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
  }
  void write(const std::string& name, const std::string& content) {
    const std::string path = dir_ + "/" + name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw SolverError("cannot write " + path);
    f << content;
    entries_.emplace_back(name, fnv1a_digest(content));
  }
  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }
  const std::string& dir() const { return dir_; }

 private:
  std::string dir_;
  std::vector<std::pair<std::string, std::string>> entries_;
};

Verdict make_verdict(const std::string& name, bool pass, double value,
                     const std::string& detail = "") {
  return {name, pass ? Verdict::Status::Pass : Verdict::Status::Fail, value,
          detail};
}

Verdict skip_verdict(const std::string& name, const std::string& why) {
  return {name, Verdict::Status::Skip, 0.0, why};
}

int auto_p(const ChapmanEnskogData& ced, int requested) {
  if (requested >= 0) return requested;
  const Matrix jac = flux_jacobian(ced, ced.u_bar_macro);
  Eigen::EigenSolver<Matrix> es(jac);
  Vector re = es.eigenvalues().real();
  std::vector<double> sorted(re.data(), re.data() + re.size());
  std::sort(sorted.begin(), sorted.end());
  int best = 0;
  for (size_t i = 1; i < sorted.size(); ++i)
    if (std::abs(sorted[i]) < std::abs(sorted[best])) best = static_cast<int>(i);
  return best;
}

// --- scenario bodies -------------------------------------------------------

void scen_check_hypotheses(const RunConfig& cfg, const KineticModel& model,
                           Outputs& out, std::vector<Verdict>& verdicts) {
  const auto rep = check_hypotheses(model, cfg.hypothesis_tol);
  std::ostringstream csv;
  csv << "check,pass,residual\n";
  for (const auto& c : rep.checks) {
    csv << c.name << "," << (c.pass ? 1 : 0) << "," << format_g17(c.residual)
        << "\n";
    verdicts.push_back(make_verdict("hypothesis: " + c.name, c.pass,
                                    c.residual));
  }
  csv << "spectral_gap_delta,," << format_g17(rep.spectral_gap_delta) << "\n";
  csv << "min_abs_eig_A,," << format_g17(rep.min_abs_eig_A) << "\n";
  out.write("hypotheses.csv", csv.str());
}

void scen_chapman_enskog(const RunConfig& cfg, const KineticModel& model,
                         Outputs& out, std::vector<Verdict>& verdicts) {
  const auto ced = make_chapman_enskog(model);
  const int p = auto_p(ced, cfg.p);

  std::vector<double> u1s;
  const double span = 0.4 * ced.basin_radius;
  for (int i = 0; i < 21; ++i) u1s.push_back(-span + 2 * span * i / 20.0);
  out.write("characteristics.csv", characteristic_sweep_csv(ced, u1s, p));

  Eigen::SelfAdjointEigenSolver<Matrix> ed(ced.D_star);
  verdicts.push_back(make_verdict("D* positive semidefinite",
                                  ed.eigenvalues().minCoeff() >
                                      -1e-12 * std::max(1.0, ced.D_star.norm()),
                                  ed.eigenvalues().minCoeff()));
  const double tangency = vstar_jacobian(ced, ced.u_bar_macro).norm();
  verdicts.push_back(
      make_verdict("v* tangent to Vperp at u_bar", tangency < 1e-6, tangency));

  const auto canon = reduce_to_canonical(model);
  if (canon.m == 1) {
    const auto cd = compute_characteristics(ced, ced.u_bar_macro, p);
    const double delta_t12 = (canon.That * canon.That.transpose())(0, 0);
    const double diff = std::abs(cd.delta - delta_t12);
    verdicts.push_back(make_verdict("delta agreement r.D*r vs T12 T12*",
                                    diff <= 1e-10, diff));
  }
}

void scen_reduce(const RunConfig& cfg, const KineticModel& model, Outputs& out,
                 std::vector<Verdict>& verdicts) {
  (void)cfg;
  const auto split_raw = macro_micro_split(model);
  const auto split = normalize_E(split_raw);
  const auto dec = decompose_A11(split);
  const auto canon = build_canonical(split, dec, model);

  Eigen::SelfAdjointEigenSolver<Matrix> eg(canon.Gamma0);
  std::ostringstream rep;
  rep << "canonical reduction report\n";
  rep << "m: " << canon.m << "\n";
  rep << "r: " << canon.r << "\n";
  rep << "dim_c: " << canon.dim_c << "  dim_h: " << canon.dim_h << "\n";
  rep << "|Gamma0|: " << format_g17(eg.eigenvalues().cwiseAbs().maxCoeff())
      << "\n";
  rep << "min |eig Gamma0|: " << format_g17(canon.gamma0_min_abs_eig) << "\n";
  rep << "Gamma0 spectrum:";
  for (int i = 0; i < eg.eigenvalues().size(); ++i)
    rep << " " << format_g17(eg.eigenvalues()[i]);
  rep << "\n";
  if (canon.m == 1)
    rep << "delta = T12 T12*: "
        << format_g17((canon.That * canon.That.transpose())(0, 0)) << "\n";
  rep << "Lemma 2.2 residuals: min sv T12 = " << format_g17(dec.t12_min_sv)
      << ", ker angle = " << format_g17(dec.ker_angle)
      << ", min |eig Atilde11| = " << format_g17(dec.atilde11_min_abs) << "\n";
  rep << "reduction identity residual: "
      << format_g17(canon.reduction_residual) << "\n";
  rep << "sign conventions: E normalized to -I; hyperbolic equation "
         "Gamma0 w_h' = -w_h + Qh; center equation w_c1' = w_c2 + Qc1 "
         "(the v1 term enters with coefficient -(That^T)^{-1})\n";
  out.write("reduction_report.txt", rep.str());
  out.write("canonical.txt", serialize_canonical(canon));

  verdicts.push_back(make_verdict("reduction identities",
                                  canon.reduction_residual <= 1e-8,
                                  canon.reduction_residual));
  const double gsym =
      (canon.Gamma0 - canon.Gamma0.transpose()).norm() /
      std::max(canon.Gamma0.norm(), 1e-300);
  verdicts.push_back(make_verdict("Gamma0 symmetric", gsym <= 1e-12, gsym));
  verdicts.push_back(make_verdict("Gamma0 one-to-one",
                                  canon.gamma0_min_abs_eig > 0,
                                  canon.gamma0_min_abs_eig));
  // round-trip serialization
  const auto reparsed = parse_canonical(serialize_canonical(canon));
  const double rt = (reparsed.P - canon.P).norm() + (reparsed.C - canon.C).norm();
  verdicts.push_back(make_verdict("canonical serialization round-trip",
                                  rt == 0.0, rt));
}

void scen_resolvent_probe(const RunConfig& cfg, const KineticModel& model,
                          Outputs& out, std::vector<Verdict>& verdicts) {
  const auto canon = reduce_to_canonical(model);
  const auto decomp = spectral_decompose(canon.Gamma0);

  std::vector<double> thetas;
  const double t_lo = 0.25 * decomp.alpha_min_abs();
  const double t_hi = 4.0 * decomp.alpha_max_abs();
  for (int i = 0; i < cfg.theta_count; ++i)
    thetas.push_back(t_lo * std::pow(t_hi / t_lo,
                                     i / double(cfg.theta_count - 1)));
  std::ostringstream kcsv;
  kcsv << "theta,kernel_norm\n";
  for (const auto& [theta, nrm] : kernel_norm_probe(decomp, thetas))
    kcsv << format_g17(theta) << "," << format_g17(nrm) << "\n";
  out.write("kernel_norm.csv", kcsv.str());

  std::vector<double> omegas{0.0};
  for (int i = 0; i < cfg.omega_count; ++i)
    omegas.push_back(1e-3 * std::pow(cfg.omega_max / 1e-3,
                                     i / double(cfg.omega_count - 1)));
  std::ostringstream scsv;
  scsv << "omega,symbol,symbol_derivative_scaled\n";
  double smax = 0, dmax = 0;
  for (const auto& b : symbol_bounds(decomp, omegas)) {
    scsv << format_g17(b.omega) << "," << format_g17(b.symbol) << ","
         << format_g17(b.symbol_derivative) << "\n";
    smax = std::max(smax, b.symbol);
    dmax = std::max(dmax, b.symbol_derivative);
  }
  out.write("symbol_bounds.csv", scsv.str());
  verdicts.push_back(make_verdict("symbol bound |S| <= 1", smax <= 1 + 1e-12,
                                  smax));
  verdicts.push_back(make_verdict("symbol derivative bound <= 1",
                                  dmax <= 1 + 1e-6, dmax));

  // L2 bound over random band-limited forcings.
  Rng rng(cfg.seed);
  const double L = 10.0;
  const int nn = 2001;
  double worst = 0.0;
  for (int trial = 0; trial < cfg.random_g_count; ++trial) {
    GridFunction g = make_grid(-L, L, nn, decomp.dim());
    for (int d = 0; d < decomp.dim(); ++d) {
      for (int k = 1; k <= 16; ++k) {
        const double a = rng.gaussian(), b = rng.gaussian();
        const double w = k * M_PI / L * 0.5;
        for (int i = 0; i < nn; ++i)
          g.values(d, i) += a * std::cos(w * g.x(i)) + b * std::sin(w * g.x(i));
      }
    }
    const GridFunction u = apply_resolvent(decomp, g);
    worst = std::max(worst, l2_norm(u) / l2_norm(g));
  }
  verdicts.push_back(
      make_verdict("L2 resolvent bound <= 1.01", worst <= 1.01, worst));
}

void scen_stable_manifold(const RunConfig& cfg, const KineticModel& model,
                          Outputs& out, std::vector<Verdict>& verdicts) {
  const auto canon = reduce_to_canonical(model);
  const auto decomp = spectral_decompose(canon.Gamma0);
  StableParams sp;
  sp.h = cfg.stable_h;
  sp.X = cfg.stable_X;
  sp.nu_tilde = cfg.nu_tilde_factor * decomp.nu();

  Rng rng(cfg.seed);
  Vector dir = stable_projection(decomp, rng.unit_vector(canon.dim_h));
  if (dir.norm() < 1e-12) throw SolverError("no stable direction available");
  dir /= dir.norm();

  StableParams probe = sp;
  const double radius = solve_stable(canon, 0.0 * dir, probe).radius;
  const Vector v0 = 0.9 * radius * dir;
  const auto sol = solve_stable(canon, v0, sp);

  std::ostringstream tcsv;
  tcsv << "x,norm";
  for (int c = 0; c < canon.n; ++c) tcsv << ",z" << c;
  tcsv << "\n";
  for (int i = 0; i < sol.trajectory.size(); ++i) {
    tcsv << format_g17(sol.trajectory.x(i)) << ","
         << format_g17(sol.trajectory.values.col(i).norm());
    for (int c = 0; c < canon.n; ++c)
      tcsv << "," << format_g17(sol.trajectory.values(c, i));
    tcsv << "\n";
  }
  out.write("stable_trajectory.csv", tcsv.str());

  verdicts.push_back(make_verdict("stable solve contraction < 0.5",
                                  sol.contraction_factor < 0.5,
                                  sol.contraction_factor));
  verdicts.push_back(make_verdict("stable decay rate >= nu_tilde",
                                  sol.fitted_decay_rate >= sol.nu_tilde,
                                  sol.fitted_decay_rate));

  // steady-equation residual along the reconstructed trajectory
  {
    const auto& traj = sol.trajectory;
    Matrix states(canon.n, traj.size());
    for (int i = 0; i < traj.size(); ++i)
      states.col(i) = canon.from_canonical(traj.values.col(i));
    Matrix ds = derivative_fd4(states, traj.h);
    double res = 0;
    for (int i = 3; i < traj.size() - 3; ++i)
      res = std::max(res, (model.A * ds.col(i) -
                           model.evaluate_Q(states.col(i))).norm());
    verdicts.push_back(
        make_verdict("steady residual < 1e-6", res < 1e-6, res));
  }

  // tangency sweep of the graph
  std::ostringstream gcsv;
  gcsv << "s,graph_distance\n";
  std::vector<double> ss, ds;
  for (int j = 0; j <= 4; ++j) {
    const double s = 0.9 * radius * std::pow(2.0, -j);
    const Vector z0 = stable_graph_eval(canon, s * dir, sp);
    Vector zh = z0.tail(canon.dim_h);
    Vector nonstable = z0;
    nonstable.tail(canon.dim_h) = unstable_projection(decomp, zh);
    const double dist = nonstable.norm();
    gcsv << format_g17(s) << "," << format_g17(dist) << "\n";
    ss.push_back(s);
    ds.push_back(dist);
  }
  out.write("tangency_sweep.csv", gcsv.str());
  const double slope = fit_loglog_slope(ss, ds);
  verdicts.push_back(
      make_verdict("stable graph tangency slope >= 1.8", slope >= 1.8, slope));
}

void scen_center_taylor(const RunConfig& cfg, const KineticModel& model,
                        Outputs& out, std::vector<Verdict>& verdicts) {
  const auto canon = reduce_to_canonical(model);
  const auto decomp = spectral_decompose(canon.Gamma0);
  const int k = cfg.taylor_order;
  const auto taylor = center_taylor(canon, k);

  std::ostringstream ocsv;
  ocsv << "order,coefficient_defect\n";
  for (size_t i = 0; i < taylor.residual_by_order.size(); ++i)
    ocsv << (i + 2) << "," << format_g17(taylor.residual_by_order[i]) << "\n";
  out.write("taylor_orders.csv", ocsv.str());

  double qscale = 0;
  for (const auto& q : canon.Qtilde) qscale = std::max(qscale, q.norm());
  const double s0 = 0.05 / (1.0 + qscale);

  Rng rng(cfg.seed);
  std::vector<Vector> dirs;
  for (int d = 0; d < 10; ++d) dirs.push_back(rng.unit_vector(canon.dim_c));

  std::ostringstream dcsv;
  dcsv << "s,defect\n";
  std::vector<double> ss, dd;
  for (int j = 0; j <= 5; ++j) {
    const double s = s0 * std::pow(2.0, -j);
    double worst = 0;
    for (const auto& d : dirs)
      worst = std::max(worst,
                       center_matching_defect(canon, taylor, s * d).norm());
    dcsv << format_g17(s) << "," << format_g17(worst) << "\n";
    ss.push_back(s);
    dd.push_back(worst);
  }
  out.write("matching_defect.csv", dcsv.str());
  const double slope = fit_loglog_slope(ss, dd);
  verdicts.push_back(make_verdict("matching defect slope >= k+0.7",
                                  slope >= k + 0.7, slope));

  // fixed point vs Taylor graph
  const double nu = decomp.nu();
  Vector dir = rng.unit_vector(canon.dim_c);
  if (canon.m == 1) dir[1] = 0.0;  // keep the conserved slot at zero
  dir /= dir.norm();
  std::ostringstream fcsv;
  fcsv << "s,graph_distance\n";
  std::vector<double> fs, fd;
  for (int j = 0; j <= 3; ++j) {
    const double s = s0 * std::pow(2.0, -j);
    const Vector w0c = s * dir;
    const auto trunc = truncate(canon, 2.0 * s);
    const auto mixed = WeightedNorm::mixed(nu / 100, nu / 10, nu / 2);
    CenterFixedPointParams cp;
    cp.h = std::min(cfg.center_h, s / 4);
    cp.X = cfg.center_X;
    const auto fp = solve_center_fixed_point(canon, w0c, trunc, mixed, cp);
    const double dist = (fp.graph_value - taylor.eval(w0c)).norm();
    fcsv << format_g17(s) << "," << format_g17(dist) << "\n";
    fs.push_back(s);
    fd.push_back(dist);
  }
  out.write("fixed_point_agreement.csv", fcsv.str());
  const double fslope = fit_loglog_slope(fs, fd);
  verdicts.push_back(make_verdict("fixed-point agreement slope >= k+0.7",
                                  fslope >= k + 0.7, fslope));

  // exponential approximation along a stable trajectory
  StableParams sp;
  sp.h = cfg.stable_h;
  sp.nu_tilde = cfg.nu_tilde_factor * nu;
  Vector sdir = stable_projection(decomp, rng.unit_vector(canon.dim_h));
  sdir /= sdir.norm();
  const double radius = solve_stable(canon, 0.0 * sdir, sp).radius;
  const auto sol = solve_stable(canon, 0.9 * radius * sdir, sp);
  const auto ea =
      exp_approximation_check(canon, sol.trajectory, taylor, sp.nu_tilde);
  verdicts.push_back(make_verdict("exp approximation rate >= nu_tilde",
                                  ea.pass, ea.rate_fit));
}

void scen_profile(const RunConfig& cfg, const KineticModel& model,
                  Outputs& out, std::vector<Verdict>& verdicts) {
  const auto canon = reduce_to_canonical(model);
  if (canon.m != 1) {
    verdicts.push_back(skip_verdict(
        "profile", "requires a simple zero characteristic (m = 1), model has "
                   "m = " + std::to_string(canon.m)));
    return;
  }
  const auto ced = make_chapman_enskog(model);
  const int p = auto_p(ced, cfg.p);
  const auto taylor = center_taylor(canon, cfg.taylor_order);
  const double eps = cfg.eps_list.front();

  CompareParams params;
  params.eps_sweep = {eps};
  params.nodes = cfg.grid_nodes;
  params.domain_rate_widths = cfg.domain_widths;
  auto pc = compute_profile_comparison(canon, ced, taylor, p, eps, params);

  std::ostringstream csv;
  csv << "x";
  for (int i = 0; i < ced.r(); ++i) csv << ",u_rel_" << i;
  for (int i = 0; i < ced.r(); ++i) csv << ",u_ce_" << i;
  csv << ",v_diff_norm,lambda_p_rel,lambda_p_ce,eta_bar\n";
  for (int i = 0; i < pc.x_grid.size(); ++i) {
    csv << format_g17(pc.x_grid.x(i));
    for (int c = 0; c < ced.r(); ++c)
      csv << "," << format_g17(pc.u_rel.values(c, i));
    for (int c = 0; c < ced.r(); ++c)
      csv << "," << format_g17(pc.u_ce.values(c, i));
    csv << ","
        << format_g17(
               (pc.v_rel.values.col(i) - pc.v_star_ce.values.col(i)).norm())
        << "," << format_g17(pc.lambda_rel[i]) << ","
        << format_g17(pc.lambda_ce[i]) << ","
        << format_g17(pc.eta_bar.values(0, i)) << "\n";
  }
  out.write("profile.csv", csv.str());

  verdicts.push_back(make_verdict("lambda_p monotone (relaxation)",
                                  pc.lambda_monotone_rel, 0.0));
  verdicts.push_back(
      make_verdict("lambda_p monotone (viscous)", pc.lambda_monotone_ce, 0.0));
  const auto nf = build_normal_form(canon, ced, eps, p, &taylor);
  verdicts.push_back(make_verdict("conservation along profile",
                                  pc.conservation <= 1e-7 * nf.q.norm(),
                                  pc.conservation));
  verdicts.push_back(make_verdict("RH endstate residual < 1e-11",
                                  pc.rh_residual < 1e-11, pc.rh_residual));
  verdicts.push_back(make_verdict("exact Burgers residual <= 1e-12",
                                  pc.burgers_residual <= 1e-12,
                                  pc.burgers_residual));
}

void scen_sweep(const RunConfig& cfg, const KineticModel& model, Outputs& out,
                std::vector<Verdict>& verdicts) {
  const auto canon = reduce_to_canonical(model);
  if (canon.m != 1) {
    verdicts.push_back(skip_verdict(
        "sweep", "requires a simple zero characteristic (m = 1)"));
    return;
  }
  const auto ced = make_chapman_enskog(model);
  const int p = auto_p(ced, cfg.p);
  const auto taylor = center_taylor(canon, cfg.taylor_order);

  CompareParams params;
  params.eps_sweep = cfg.eps_list;
  params.nodes = cfg.grid_nodes;
  params.domain_rate_widths = cfg.domain_widths;

  std::vector<ProfileComparison> sweep(cfg.eps_list.size());
  parallel_for(static_cast<int>(cfg.eps_list.size()), cfg.workers, [&](int i) {
    sweep[i] = compute_profile_comparison(canon, ced, taylor, p,
                                          cfg.eps_list[i], params);
  });
  const auto rep = assemble_profile_report(std::move(sweep), params);

  std::ostringstream csv;
  csv << "eps,j,u_diff_sup,v_diff_sup,endstate_sup,eta_gap,conservation\n";
  for (const auto& pc : rep.per_eps) {
    for (size_t j = 0; j < pc.u_diff_weighted_sup.size(); ++j)
      csv << format_g17(pc.eps) << "," << j << ","
          << format_g17(pc.u_diff_weighted_sup[j]) << ","
          << format_g17(pc.v_diff_weighted_sup[j]) << ","
          << format_g17(pc.endstate_weighted_sup) << ","
          << format_g17(pc.eta_endstate_gap) << ","
          << format_g17(pc.conservation) << "\n";
  }
  out.write("sweep.csv", csv.str());

  std::ostringstream scsv;
  scsv << "quantity,j,fitted_order,pass\n";
  for (size_t j = 0; j < rep.order_u_diff.size(); ++j) {
    const bool pu = rep.order_u_diff[j] >= (double(j) + 2) - 0.3;
    const bool pv = rep.order_v_diff[j] >= (double(j) + 2) - 0.3;
    scsv << "u_diff," << j << "," << format_g17(rep.order_u_diff[j]) << ","
         << (pu ? 1 : 0) << "\n";
    scsv << "v_diff," << j << "," << format_g17(rep.order_v_diff[j]) << ","
         << (pv ? 1 : 0) << "\n";
  }
  scsv << "endstate,0," << format_g17(rep.order_endstate) << ","
       << (rep.order_endstate >= 0.7 ? 1 : 0) << "\n";
  scsv << "eta_gap,0," << format_g17(rep.order_eta_gap) << ","
       << (rep.order_eta_gap >= 1.7 ? 1 : 0) << "\n";
  out.write("sweep_orders.csv", scsv.str());

  verdicts.push_back(make_verdict("profile comparison orders",
                                  rep.orders_pass, rep.order_u_diff[0]));
  verdicts.push_back(
      make_verdict("lambda_p monotone at all eps", rep.monotone_pass, 0.0));
  double cworst = 0;
  for (const auto& pc : rep.per_eps) cworst = std::max(cworst, pc.conservation);
  verdicts.push_back(make_verdict("conservation along profiles",
                                  cworst <= 1e-7, cworst));
}

}  // namespace

RunManifest run(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  RunManifest manifest;
  manifest.version = kVersion;
  manifest.config_echo = serialize_config(cfg);

  Outputs out(cfg.out_dir);
  try {
    const KineticModel model = resolve_model(cfg.model);
    if (cfg.scenario == "check-hypotheses")
      scen_check_hypotheses(cfg, model, out, manifest.verdicts);
    else if (cfg.scenario == "chapman-enskog")
      scen_chapman_enskog(cfg, model, out, manifest.verdicts);
    else if (cfg.scenario == "reduce")
      scen_reduce(cfg, model, out, manifest.verdicts);
    else if (cfg.scenario == "resolvent-probe")
      scen_resolvent_probe(cfg, model, out, manifest.verdicts);
    else if (cfg.scenario == "stable-manifold")
      scen_stable_manifold(cfg, model, out, manifest.verdicts);
    else if (cfg.scenario == "center-taylor")
      scen_center_taylor(cfg, model, out, manifest.verdicts);
    else if (cfg.scenario == "profile")
      scen_profile(cfg, model, out, manifest.verdicts);
    else if (cfg.scenario == "sweep")
      scen_sweep(cfg, model, out, manifest.verdicts);
    else
      throw ConfigError("unhandled scenario " + cfg.scenario);
  } catch (const SolverError& e) {
    manifest.verdicts.push_back(
        make_verdict("scenario completed", false, 0.0, e.what()));
  }

  manifest.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  manifest.files = out.entries();
  std::ofstream mf(cfg.out_dir + "/manifest.json", std::ios::binary);
  mf << manifest.to_json();
  return manifest;
}

}  // namespace kinshock
