// Acceptance suite: one binary, one pass/fail line per criterion, exit code
// equals the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "kinshock/harness.hpp"
#include "kinshock/manifolds.hpp"
#include "kinshock/presets.hpp"
#include "kinshock/profiles.hpp"
#include "kinshock/resolvent.hpp"

using namespace kinshock;

namespace {

struct Criterion {
  int id;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

std::vector<std::string> all_preset_names() {
  std::vector<std::string> names;
  for (const auto& info : preset_models()) names.push_back(info.name);
  return names;
}

GridFunction smooth_random(double L, int nodes, int dim, Rng& rng,
                           int modes = 12) {
  GridFunction g = make_grid(-L, L, nodes, dim);
  for (int d = 0; d < dim; ++d) {
    for (int k = 1; k <= modes; ++k) {
      const double a = rng.gaussian(), b = rng.gaussian();
      const double w = 0.5 * k * M_PI / L;
      for (int i = 0; i < nodes; ++i)
        g.values(d, i) += a * std::cos(w * g.x(i)) + b * std::sin(w * g.x(i));
    }
  }
  return g;
}

// 1. Hypothesis suite over every preset; dyadic singular family exact.
Criterion criterion_hypotheses() {
  Criterion c{1, "hypothesis suite on all presets"};
  c.pass = true;
  double worst = 0.0;
  for (const auto& name : all_preset_names()) {
    const auto model = make_preset(name);
    const auto rep = check_hypotheses(model, 1e-10);
    if (!rep.all_passed()) {
      c.pass = false;
      c.detail = name + " failed a hypothesis check";
      return c;
    }
    for (const auto& chk : rep.checks) {
      // residual-style checks must sit below 1e-10 (spectral quantities
      // like delta and min|eig A| are magnitudes, not residuals)
      if (chk.name == "A one-to-one" || chk.name == "Q'(u_bar)|_V <= -delta" ||
          chk.name == "ker Q'(u_bar) = Vperp")
        continue;
      worst = std::max(worst, chk.residual);
    }
    if (name.rfind("sing-", 0) == 0) {
      const int k = std::stoi(name.substr(5));
      if (rep.min_abs_eig_A != std::ldexp(1.0, -k)) {
        c.pass = false;
        c.detail = name + " min |eig A| is not exactly 2^-k";
        return c;
      }
    }
  }
  c.pass = worst < 1e-10;
  c.detail = "max residual " + format_g17(worst);
  return c;
}

// 2. Canonical-form oracle on manufactured solutions + exact round trip.
Criterion criterion_canonical_oracle() {
  Criterion c{2, "canonical-form oracle (Lemma 1.1)"};
  const auto model = make_preset("demo-m1");
  const auto canon = reduce_to_canonical(model);

  // round-trip coordinate maps
  Rng rng(21);
  double rt = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Vector state = canon.u_bar + rng.gaussian_vector(canon.n);
    rt = std::max(rt, (canon.from_canonical(canon.to_canonical(state)) - state)
                              .norm() /
                          state.norm());
  }
  if (rt > 1e-12) {
    c.detail = "round trip residual " + format_g17(rt);
    return c;
  }

  // manufactured Gaussian trajectory with analytic derivatives
  const Vector d1 = rng.unit_vector(canon.n), d2 = rng.unit_vector(canon.n);
  auto bump = [](double x, double ctr, double wid) {
    const double t = (x - ctr) / wid;
    return std::exp(-t * t);
  };
  auto bump1 = [&](double x, double ctr, double wid) {
    const double t = (x - ctr) / wid;
    return -2.0 * t / wid * bump(x, ctr, wid);
  };
  auto bump3 = [&](double x, double ctr, double wid) {
    const double t = (x - ctr) / wid;
    return (12.0 * t - 8.0 * t * t * t) / (wid * wid * wid) *
           bump(x, ctr, wid);
  };
  const Matrix qp = model.linearize_Q(model.u_bar);
  Eigen::SelfAdjointEigenSolver<Matrix> eg(canon.Gamma0);
  const double gnorm = eg.eigenvalues().cwiseAbs().maxCoeff();

  double prev = -1.0;
  bool ok = true;
  std::string detail;
  for (double h : {1e-2, 5e-3}) {
    const int nn = static_cast<int>(std::lround(6.0 / h)) + 1;
    GridFunction traj = make_grid(-3.0, 3.0, nn, model.n);
    double z3max = 0.0;
    Matrix z(canon.n, nn);
    for (int i = 0; i < nn; ++i) {
      const double x = traj.x(i);
      const Vector w =
          0.01 * (bump(x, -0.4, 0.8) * d1 + bump(x, 0.3, 0.6) * d2);
      traj.values.col(i) = model.u_bar + w;
      z.col(i) = canon.to_canonical(traj.values.col(i));
      const Vector w3 =
          0.01 * (bump3(x, -0.4, 0.8) * d1 + bump3(x, 0.3, 0.6) * d2);
      z3max = std::max(z3max, (canon.C * w3).norm());
    }
    const Matrix dz = derivative_fd2(z, h);
    double diff = 0.0;
    for (int i = 0; i < nn; ++i) {
      const double x = traj.x(i);
      const Vector w = traj.values.col(i) - model.u_bar;
      const Vector dw =
          0.01 * (bump1(x, -0.4, 0.8) * d1 + bump1(x, 0.3, 0.6) * d2);
      const Vector r_orig = model.A * dw - qp * w - model.B.apply(w, w);
      const Vector q = canon.apply_Q(z.col(i));
      Vector rho(canon.n);
      rho.head(canon.dim_c) = dz.col(i).head(canon.dim_c) -
                              canon.J * z.col(i).head(canon.dim_c) -
                              q.head(canon.dim_c);
      rho.tail(canon.dim_h) = canon.Gamma0 * dz.col(i).tail(canon.dim_h) +
                              z.col(i).tail(canon.dim_h) - q.tail(canon.dim_h);
      diff = std::max(diff, (rho - canon.W * r_orig).norm());
    }
    const double grid_err = h * h / 3.0 * z3max * std::max(1.0, gnorm);
    if (diff > 10.0 * grid_err) ok = false;
    if (prev > 0 && diff > 0.35 * prev) ok = false;  // second-order decrease
    detail += "h=" + format_g17(h) + " defect=" + format_g17(diff) + " ";
    prev = diff;
  }
  c.pass = ok;
  c.detail = detail + "roundtrip=" + format_g17(rt);
  return c;
}

// 3. L2 resolvent bound uniform over sing-k while the kernel norm blows up.
Criterion criterion_resolvent_contrast() {
  Criterion c{3, "resolvent contrast over the singular family"};
  double worst_ratio = 0.0;
  std::vector<double> thetas, kernels;
  for (int k = 1; k <= 12; ++k) {
    const auto canon =
        reduce_to_canonical(make_preset("sing-" + std::to_string(k)));
    const auto d = spectral_decompose(canon.Gamma0);
    Rng rng(1000 + k);
    for (int trial = 0; trial < 50; ++trial) {
      GridFunction g = smooth_random(10.0, 2001, d.dim(), rng);
      worst_ratio =
          std::max(worst_ratio, l2_norm(apply_resolvent(d, g)) / l2_norm(g));
    }
    if (k >= 3) {  // below the plateau of the O(1) modes
      const double theta = std::ldexp(1.0, -k);
      thetas.push_back(theta);
      kernels.push_back(kernel_norm_probe(d, {theta})[0].second);
    }
  }
  const double slope = fit_loglog_slope(thetas, kernels);
  c.pass = worst_ratio <= 1.01 && slope >= -1.1 && slope <= -0.9;
  c.detail = "max |Rg|/|g| = " + format_g17(worst_ratio) +
             ", kernel slope = " + format_g17(slope);
  return c;
}

// 4. Fourier symbol bounds on every preset.
Criterion criterion_symbol_bounds() {
  Criterion c{4, "symbol bounds on all presets"};
  double smax = 0.0, dmax = 0.0;
  std::vector<double> omegas{0.0};
  for (int i = 0; i < 512; ++i)
    omegas.push_back(1e-3 * std::pow(1e5, i / 511.0));
  for (const auto& name : all_preset_names()) {
    const auto canon = reduce_to_canonical(make_preset(name));
    const auto d = spectral_decompose(canon.Gamma0);
    for (const auto& b : symbol_bounds(d, omegas)) {
      smax = std::max(smax, b.symbol);
      dmax = std::max(dmax, b.symbol_derivative);
    }
  }
  c.pass = smax <= 1.0 + 1e-12 && dmax <= 1.0 + 1e-6;
  c.detail = "max |S| = " + format_g17(smax) +
             ", max (1+|w|)|S'| = " + format_g17(dmax);
  return c;
}

// 5. Stable manifold on demo-m0.
Criterion criterion_stable_manifold() {
  Criterion c{5, "stable manifold on demo-m0 (Theorem 1.5)"};
  const auto model = make_preset("demo-m0");
  const auto canon = reduce_to_canonical(model);
  const auto decomp = spectral_decompose(canon.Gamma0);
  Rng rng(31);
  Vector dir = stable_projection(decomp, rng.unit_vector(canon.dim_h));
  dir /= dir.norm();
  StableParams params;
  const double radius = solve_stable(canon, 0.0 * dir, params).radius;

  bool ok = true;
  double worst_contraction = 0.0, worst_decay = 1e300, residual = 0.0;
  for (double frac : {1.0, 0.5}) {
    const auto sol = solve_stable(canon, frac * radius * dir, params);
    worst_contraction = std::max(worst_contraction, sol.contraction_factor);
    worst_decay = std::min(worst_decay, sol.fitted_decay_rate);
    if (sol.contraction_factor >= 0.5) ok = false;
    if (sol.fitted_decay_rate < 0.8 * decomp.nu()) ok = false;
    Matrix states(canon.n, sol.trajectory.size());
    for (int i = 0; i < sol.trajectory.size(); ++i)
      states.col(i) = canon.from_canonical(sol.trajectory.values.col(i));
    const Matrix ds = derivative_fd4(states, sol.trajectory.h);
    for (int i = 3; i < sol.trajectory.size() - 3; ++i)
      residual = std::max(residual, (model.A * ds.col(i) -
                                     model.evaluate_Q(states.col(i)))
                                        .norm());
  }
  if (residual >= 1e-6) ok = false;

  std::vector<double> ss, dd;
  for (int j = 0; j <= 4; ++j) {
    const double s = radius * std::pow(2.0, -j);
    const Vector z0 = stable_graph_eval(canon, s * dir, params);
    Vector off = z0;
    off.tail(canon.dim_h) =
        unstable_projection(decomp, Vector(z0.tail(canon.dim_h)));
    ss.push_back(s);
    dd.push_back(off.norm());
  }
  const double slope = fit_loglog_slope(ss, dd);
  if (slope < 1.8) ok = false;

  c.pass = ok;
  c.detail = "contraction " + format_g17(worst_contraction) + ", decay " +
             format_g17(worst_decay) + " (nu " + format_g17(decomp.nu()) +
             "), residual " + format_g17(residual) + ", tangency slope " +
             format_g17(slope);
  return c;
}

// 6. Center manifold on demo-m1 at k = 3.
Criterion criterion_center_manifold() {
  Criterion c{6, "center manifold on demo-m1 (Theorem 1.7)"};
  const int k = 3;
  const auto model = make_preset("demo-m1");
  const auto canon = reduce_to_canonical(model);
  const auto decomp = spectral_decompose(canon.Gamma0);
  const auto taylor = center_taylor(canon, k);
  const double nu = decomp.nu();

  Rng rng(41);
  std::vector<Vector> dirs;
  for (int d = 0; d < 10; ++d) dirs.push_back(rng.unit_vector(canon.dim_c));
  std::vector<double> ss, dd;
  for (int j = 0; j <= 5; ++j) {
    const double s = 0.02 * std::pow(2.0, -j);
    double worst = 0.0;
    for (const auto& d : dirs)
      worst =
          std::max(worst, center_matching_defect(canon, taylor, s * d).norm());
    ss.push_back(s);
    dd.push_back(worst);
  }
  const double defect_slope = fit_loglog_slope(ss, dd);

  Vector dir = rng.unit_vector(canon.dim_c);
  dir[1] = 0.0;
  dir /= dir.norm();
  const auto mixed = WeightedNorm::mixed(nu / 100, nu / 10, nu / 2);
  std::vector<double> fs, fd;
  for (int j = 0; j <= 3; ++j) {
    const double s = 0.02 * std::pow(2.0, -j);
    const auto trunc = truncate(canon, 2.0 * s);
    CenterFixedPointParams cp;
    cp.h = std::min(5e-3, s / 4);
    const auto fp = solve_center_fixed_point(canon, s * dir, trunc, mixed, cp);
    fs.push_back(s);
    fd.push_back((fp.graph_value - taylor.eval(s * dir)).norm());
  }
  const double agree_slope = fit_loglog_slope(fs, fd);

  Vector sdir = stable_projection(decomp, rng.unit_vector(canon.dim_h));
  sdir /= sdir.norm();
  StableParams sp;
  const double radius = solve_stable(canon, 0.0 * sdir, sp).radius;
  const auto sol = solve_stable(canon, 0.9 * radius * sdir, sp);
  const auto ea =
      exp_approximation_check(canon, sol.trajectory, taylor, 0.8 * nu);

  c.pass = defect_slope >= k + 0.7 && agree_slope >= k + 0.7 && ea.pass;
  c.detail = "defect slope " + format_g17(defect_slope) + ", agreement slope " +
             format_g17(agree_slope) + ", exp-approx rate " +
             format_g17(ea.rate_fit);
  return c;
}

// 7. Burgers normal form: delta cross-check and RH endstate gap.
Criterion criterion_normal_form() {
  Criterion c{7, "Burgers normal form (Lemma 6.1)"};
  const auto model = make_preset("demo-m1");
  const auto canon = reduce_to_canonical(model);
  const auto ced = make_chapman_enskog(model);
  const auto taylor = center_taylor(canon, 3);
  const int p = 1;

  const auto cd = compute_characteristics(ced, ced.u_bar_macro, p);
  const double delta_t12 = (canon.That * canon.That.transpose())(0, 0);
  const double delta_diff = std::abs(cd.delta - delta_t12);
  bool ok = delta_diff <= 1e-10;

  double worst_gap = 0.0;
  for (double eps : {0.02, 0.04, 0.08}) {
    const auto nf = build_normal_form(canon, ced, eps, p, &taylor);
    const auto rh = solve_rankine_hugoniot(ced, nf.q, p)[0];
    const double target = 2.0 * std::sqrt(2.0 * nf.q1 / nf.Lambda);
    const double gap = std::abs(cd.r_bar.dot(rh.u_plus - rh.u_minus));
    worst_gap = std::max(worst_gap, std::abs(gap - target) / target);
  }
  if (worst_gap > 0.10) ok = false;

  c.pass = ok;
  c.detail = "delta diff " + format_g17(delta_diff) + ", max gap error " +
             format_g17(worst_gap);
  return c;
}

// 8 + 9. Profile comparison sweep and conservation along the profiles.
std::pair<Criterion, Criterion> criterion_profiles() {
  Criterion c8{8, "profile comparison sweep (Corollary 1.8)"};
  Criterion c9{9, "conservation along computed profiles"};
  const auto model = make_preset("demo-m1");
  const auto canon = reduce_to_canonical(model);
  const auto ced = make_chapman_enskog(model);
  const auto taylor = center_taylor(canon, 3);
  const int p = 1;

  CompareParams params;
  params.eps_sweep = {0.02, 0.04, 0.08, 0.16};
  const auto rep = compare_profiles(canon, ced, taylor, p, params);

  double burgers = 0.0, conservation = 0.0;
  bool monotone = rep.monotone_pass;
  for (const auto& pc : rep.per_eps) {
    burgers = std::max(burgers, pc.burgers_residual);
    conservation = std::max(conservation, pc.conservation);
  }
  c8.pass = rep.order_u_diff[0] >= 1.7 && rep.order_v_diff[0] >= 1.7 &&
            rep.order_endstate >= 0.7 && monotone && burgers <= 1e-12;
  c8.detail = "orders: u " + format_g17(rep.order_u_diff[0]) + ", v " +
              format_g17(rep.order_v_diff[0]) + ", endstate " +
              format_g17(rep.order_endstate) + ", eta gap " +
              format_g17(rep.order_eta_gap) + ", burgers " +
              format_g17(burgers) + (monotone ? "" : ", NOT monotone");

  // conservation relative to |q| per eps
  double rel = 0.0;
  for (const auto& pc : rep.per_eps) rel = std::max(rel, pc.conservation);
  const auto nf = build_normal_form(canon, ced, 0.02, p, &taylor);
  c9.pass = rel < 1e-7 * nf.q.norm();
  c9.detail = "max deviation " + format_g17(conservation) + " vs |q| " +
              format_g17(nf.q.norm());
  return {c8, c9};
}

// 10. Determinism of the harness.
Criterion criterion_determinism() {
  Criterion c{10, "determinism of configured runs"};
  auto cfg = parse_config(
      R"({"model": {"preset": "demo-m1"}, "scenario": "profile",
          "seed": 9, "params": {"eps_list": [0.08], "grid_nodes": 801}})");
  const auto base =
      std::filesystem::temp_directory_path() / "kinshock_acceptance";
  std::filesystem::remove_all(base);
  cfg.out_dir = (base / "a").string();
  const auto a = run(cfg);
  cfg.out_dir = (base / "b").string();
  const auto b = run(cfg);
  bool ok = a.all_passed() && b.all_passed() && a.files.size() == b.files.size();
  for (size_t i = 0; ok && i < a.files.size(); ++i)
    ok = a.files[i] == b.files[i];
  c.pass = ok;
  c.detail = std::to_string(a.files.size()) + " artifacts compared";
  return c;
}

}  // namespace

int main() {
  std::vector<std::pair<std::function<std::vector<Criterion>()>, double>> work;
  auto single = [](std::function<Criterion()> fn) {
    return [fn]() { return std::vector<Criterion>{fn()}; };
  };
  work.push_back({single(criterion_hypotheses), 5.0});
  work.push_back({single(criterion_canonical_oracle), 60.0});
  work.push_back({single(criterion_resolvent_contrast), 30.0});
  work.push_back({single(criterion_symbol_bounds), 60.0});
  work.push_back({single(criterion_stable_manifold), 60.0});
  work.push_back({single(criterion_center_manifold), 120.0});
  work.push_back({single(criterion_normal_form), 60.0});
  work.push_back({[]() {
                    auto [c8, c9] = criterion_profiles();
                    return std::vector<Criterion>{c8, c9};
                  },
                  120.0});
  work.push_back({single(criterion_determinism), 60.0});

  int failures = 0;
  for (auto& [fn, budget] : work) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<Criterion> results;
    try {
      results = fn();
    } catch (const std::exception& e) {
      Criterion err{0, "criterion crashed", false, e.what(), 0.0};
      results = {err};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    for (auto& r : results) {
      r.seconds = secs / results.size();
      bool pass = r.pass && secs <= budget;
      std::printf("[%s] criterion %d: %s (%s) [%.2f s, budget %.0f s]\n",
                  pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                  r.detail.c_str(), secs, budget);
      if (!pass) ++failures;
    }
  }
  return failures;
}
