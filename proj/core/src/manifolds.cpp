#include "kinshock/manifolds.hpp"

#include <cmath>
#include <memory>

namespace kinshock {

double TruncatedNonlinearity::cutoff(double t) {
  if (t <= 1.0) return 1.0;
  if (t >= 2.0) return 0.0;
  const double s = t - 1.0;
  return 1.0 - (s * s * s * (10.0 + s * (-15.0 + 6.0 * s)));
}

Vector TruncatedNonlinearity::apply(const Vector& z) const {
  const double rho = cutoff(z.norm() / epsilon);
  if (rho == 0.0) return Vector::Zero(canon->n);
  return rho * canon->apply_Q(z);
}

TruncatedNonlinearity truncate(const CanonicalSystem& canon, double epsilon,
                               std::uint64_t sample_seed) {
  if (epsilon <= 0) throw SolverError("truncate: epsilon must be positive");
  TruncatedNonlinearity t;
  t.canon = &canon;
  t.epsilon = epsilon;
  Rng rng(sample_seed);
  const double fd = 1e-5 * epsilon;
  for (int i = 0; i < 200; ++i) {
    const Vector dir = rng.unit_vector(canon.n);
    const double rad = rng.uniform(0.0, 3.0 * epsilon);
    const Vector z = rad * dir;
    t.c0 = std::max(t.c0, t.apply(z).norm() / (epsilon * epsilon));
    const Vector d = rng.unit_vector(canon.n);
    const Vector fplus = t.apply(z + fd * d);
    const Vector fminus = t.apply(z - fd * d);
    t.c1 = std::max(t.c1, (fplus - fminus).norm() / (2.0 * fd) / epsilon);
    t.c2 = std::max(
        t.c2, (fplus - 2.0 * t.apply(z) + fminus).norm() / (fd * fd));
  }
  return t;
}

namespace {

// Quadratic scale of the canonical nonlinearity (operator-norm upper bound).
double quadratic_scale(const CanonicalSystem& canon) {
  double s = 0.0;
  for (const auto& q : canon.Qtilde) s = std::max(s, q.norm());
  return std::max(s, 1e-300);
}

}  // namespace

StableSolveResult solve_stable(const CanonicalSystem& canon, const Vector& v0_in,
                               const StableParams& params) {
  const auto decomp = spectral_decompose(canon.Gamma0);
  const double nu = decomp.nu();
  StableParams p = params;
  if (p.nu_tilde <= 0) p.nu_tilde = 0.8 * nu;
  if (p.X <= 0) p.X = 20.0 / p.nu_tilde;
  if (p.h <= 0) p.h = std::min(5e-3, decomp.alpha_min_abs() / 20.0);
  if (p.radius <= 0) p.radius = 0.02 * p.nu_tilde / quadratic_scale(canon);

  if (static_cast<int>(v0_in.size()) != canon.dim_h)
    throw SolverError("solve_stable: v0 must have the hyperbolic dimension");
  const Vector v0 = stable_projection(decomp, v0_in);
  if (v0.norm() > p.radius * (1.0 + 1e-9))
    throw RadiusExceeded("solve_stable: |v0| exceeds the admissible radius " +
                         std::to_string(p.radius));

  const int nn = static_cast<int>(std::lround(p.X / p.h)) + 1;
  const int dc = canon.dim_c, dh = canon.dim_h;
  GridFunction z = make_grid(0.0, p.h * (nn - 1), nn, canon.n);

  // initial iterate: homogeneous stable flow
  Matrix sem0(dh, nn);
  {
    Matrix coords = decomp.eigenvectors.transpose() * v0;
    for (int i = 0; i < nn; ++i) {
      Vector acc = Vector::Zero(dh);
      for (int s : decomp.stable_indices)
        acc += std::exp(-z.x(i) / decomp.alphas[s]) * coords(s, 0) *
               decomp.eigenvectors.col(s);
      sem0.col(i) = acc;
    }
  }
  z.values.bottomRows(dh) = sem0;

  double prev_inc = -1.0;
  double factor = 0.0;
  int iters = 0;
  for (int it = 1; it <= p.max_iter; ++it) {
    iters = it;
    // quadratic forcing along the current iterate
    Matrix qc(dc, nn);
    GridFunction gh = z;
    gh.values.resize(dh, nn);
    for (int i = 0; i < nn; ++i) {
      const Vector q = canon.apply_Q(z.values.col(i));
      qc.col(i) = q.head(dc);
      gh.values.col(i) = q.tail(dh);
    }

    Matrix znew(canon.n, nn);
    // center part: z_c(t) = -int_t^X Qc ds (J Qc = 0 identically)
    for (int c = 0; c < dc; ++c) {
      const Vector icum = cumulative_integral(qc.row(c).transpose(), p.h);
      for (int i = 0; i < nn; ++i) znew(c, i) = icum[i] - icum[nn - 1];
    }
    // hyperbolic part: modified semigroup data + resolvent
    const Vector corr =
        stable_projection(decomp, v0 - gh.values.col(0));
    GridFunction rq = apply_resolvent(decomp, gh);
    Matrix coords = decomp.eigenvectors.transpose() * corr;
    for (int i = 0; i < nn; ++i) {
      Vector acc = Vector::Zero(dh);
      for (int s : decomp.stable_indices)
        acc += std::exp(-z.x(i) / decomp.alphas[s]) * coords(s, 0) *
               decomp.eigenvectors.col(s);
      znew.bottomRows(dh).col(i) = acc + rq.values.col(i);
    }

    GridFunction diff = z;
    diff.values = znew - z.values;
    const double inc = h1_norm(diff);
    z.values = znew;
    if (prev_inc > 0.0 && inc > 1e-15) {
      factor = std::max(factor, inc / prev_inc);
      if (inc / prev_inc >= 1.0 && it > 3)
        throw ContractionFailure(inc / prev_inc);
    }
    prev_inc = inc;
    if (inc < p.tol * std::max(1.0, z.values.norm())) break;
    if (it == p.max_iter)
      throw NonConvergence("solve_stable", it, inc);
  }

  StableSolveResult out;
  out.trajectory = z;
  out.v0 = v0;
  out.iterations = iters;
  out.contraction_factor = factor;
  out.nu_tilde = p.nu_tilde;
  out.radius = p.radius;
  // fitted decay of |z(x)| over the mid-window
  {
    std::vector<double> xs, ys;
    const double floor = 1e-14 * std::max(1.0, z.values.norm());
    for (int i = 0; i < nn; ++i) {
      const double x = z.x(i);
      if (x < 0.5 * p.X || x > 0.9 * p.X) continue;
      const double nrm = z.values.col(i).norm();
      if (nrm > floor) {
        xs.push_back(x);
        ys.push_back(nrm);
      }
    }
    out.fitted_decay_rate = (xs.size() >= 2) ? fit_decay_rate(xs, ys) : 0.0;
  }
  return out;
}

Vector stable_graph_eval(const CanonicalSystem& canon, const Vector& v0,
                         const StableParams& params) {
  return solve_stable(canon, v0, params).trajectory.values.col(0);
}

CenterGraphTaylor center_taylor(const CanonicalSystem& canon, int k) {
  if (k < 2) throw SolverError("center_taylor: order must be >= 2");
  const int dc = canon.dim_c, dh = canon.dim_h;
  auto basis = std::make_shared<MonomialBasis>(dc, k);

  CenterGraphTaylor out;
  out.order = k;
  out.Xi = VectorPoly(basis, dh);

  // z(w_c) = (w_c, Xi(w_c)) as polynomials; rebuilt as orders fill in.
  auto compose_Q = [&](const VectorPoly& xi) {
    VectorPoly zc(basis, canon.n);
    for (int v = 0; v < dc; ++v) {
      std::vector<int> e(dc, 0);
      e[v] = 1;
      zc.coef[1](v, basis->index_of(e)) = 1.0;
    }
    for (int d = 2; d <= k; ++d) zc.coef[d].bottomRows(dh) = xi.coef[d];
    // Q~(z(w_c)) componentwise via scalar products of z-rows
    VectorPoly q(basis, canon.n);
    for (int kk = 0; kk < canon.n; ++kk) {
      for (int a = 0; a < canon.n; ++a) {
        // row polynomial (Q~_k z)_a = sum_b Q_{ab} z_b as scalar poly
        VectorPoly rowpoly(basis, 1);
        bool nonzero = false;
        for (int b = 0; b < canon.n; ++b) {
          const double w = canon.Qtilde[kk](a, b);
          if (w == 0.0) continue;
          nonzero = true;
          for (int d = 0; d <= k; ++d)
            if (b < dc) {
              if (d == 1) rowpoly.coef[1] += w * zc.coef[1].row(b);
            } else {
              rowpoly.coef[d] += w * zc.coef[d].row(b);
            }
        }
        if (!nonzero) continue;
        VectorPoly za(basis, 1);
        for (int d = 0; d <= k; ++d) za.coef[d] = zc.coef[d].row(a);
        VectorPoly prod = scalar_product(za, 0, rowpoly, 0);
        for (int d = 0; d <= k; ++d) q.coef[d].row(kk) += prod.coef[d].row(0);
      }
    }
    return q;
  };

  for (int j = 2; j <= k; ++j) {
    VectorPoly q = compose_Q(out.Xi);
    // field = J w_c + Qc
    VectorPoly field(basis, dc);
    for (int v = 0; v < dc; ++v) {
      std::vector<int> e(dc, 0);
      e[v] = 1;
      const int idx = basis->index_of(e);
      for (int u = 0; u < dc; ++u) field.coef[1](u, idx) = canon.J(u, v);
    }
    for (int d = 0; d <= k; ++d) field.coef[d] += q.coef[d].topRows(dc);

    VectorPoly dd = directional_derivative(out.Xi, field);
    // defect D = Xi + Gamma0 dd - Qh; at degree j the unknown block is zero
    Matrix kj = q.coef[j].bottomRows(dh) - canon.Gamma0 * dd.coef[j];
    // includes Xi_j = 0, so K_j = [Qh - Gamma0 dd]_j

    // Neumann inversion of (I + Gamma0 L_J)
    Matrix x = kj;
    Matrix term = kj;
    for (int pw = 1; pw <= j + 1; ++pw) {
      term = -canon.Gamma0 *
             linear_directional_derivative(*basis, j, term, canon.J);
      if (term.cwiseAbs().maxCoeff() == 0.0) break;
      x += term;
    }
    out.Xi.coef[j] = x;
  }

  // coefficient defect per order (certifies the order-by-order solve)
  {
    VectorPoly q = compose_Q(out.Xi);
    VectorPoly field(basis, dc);
    for (int v = 0; v < dc; ++v) {
      std::vector<int> e(dc, 0);
      e[v] = 1;
      const int idx = basis->index_of(e);
      for (int u = 0; u < dc; ++u) field.coef[1](u, idx) = canon.J(u, v);
    }
    for (int d = 0; d <= k; ++d) field.coef[d] += q.coef[d].topRows(dc);
    VectorPoly dd = directional_derivative(out.Xi, field);
    for (int j = 2; j <= k; ++j) {
      Matrix defect = out.Xi.coef[j] + canon.Gamma0 * dd.coef[j] -
                      q.coef[j].bottomRows(dh);
      out.residual_by_order.push_back(defect.cwiseAbs().maxCoeff());
    }
  }
  return out;
}

Vector center_matching_defect(const CanonicalSystem& canon,
                              const CenterGraphTaylor& taylor,
                              const Vector& wc) {
  Vector z(canon.n);
  z.head(canon.dim_c) = wc;
  z.tail(canon.dim_h) = taylor.eval(wc);
  const Vector q = canon.apply_Q(z);
  const Vector flow = canon.J * wc + q.head(canon.dim_c);
  const Matrix xi_prime = taylor.jacobian(wc);
  return taylor.eval(wc) + canon.Gamma0 * (xi_prime * flow) -
         q.tail(canon.dim_h);
}

CenterFixedPointResult solve_center_fixed_point(
    const CanonicalSystem& canon, const Vector& w0c,
    const TruncatedNonlinearity& trunc, const WeightedNorm& mixed,
    const CenterFixedPointParams& params) {
  if (static_cast<int>(w0c.size()) != canon.dim_c)
    throw SolverError("solve_center_fixed_point: w0c has wrong dimension");
  if (w0c.norm() > trunc.epsilon)
    throw RadiusExceeded("w0c outside the truncation radius");
  const auto decomp = spectral_decompose(canon.Gamma0);
  CenterFixedPointParams p = params;
  if (p.X <= 0) p.X = 30.0 * decomp.alpha_max_abs();
  if (p.h <= 0) p.h = std::min(5e-3, decomp.alpha_min_abs() / 20.0);

  int half = static_cast<int>(std::lround(p.X / p.h));
  const int nn = 2 * half + 1;
  const int dc = canon.dim_c, dh = canon.dim_h;
  GridFunction z = make_grid(-half * p.h, half * p.h, nn, canon.n);
  const int mid = half;

  const Vector jw0 = canon.J * w0c;
  for (int i = 0; i < nn; ++i)
    z.values.col(i).head(dc) = w0c + z.x(i) * jw0;

  double prev_inc = -1.0;
  double factor = 0.0;
  int iters = 0;
  for (int it = 1; it <= p.max_iter; ++it) {
    iters = it;
    Matrix nc(dc, nn);
    GridFunction nh = z;
    nh.values.resize(dh, nn);
    for (int i = 0; i < nn; ++i) {
      const Vector q = trunc.apply(z.values.col(i));
      nc.col(i) = q.head(dc);
      nh.values.col(i) = q.tail(dh);
    }
    Matrix znew(canon.n, nn);
    for (int c = 0; c < dc; ++c) {
      const Vector icum = cumulative_integral(nc.row(c).transpose(), p.h);
      for (int i = 0; i < nn; ++i)
        znew(c, i) = w0c[c] + z.x(i) * jw0[c] + icum[i] - icum[mid];
    }
    GridFunction rq = apply_resolvent(decomp, nh);
    znew.bottomRows(dh) = rq.values;

    GridFunction diff = z;
    diff.values = znew - z.values;
    const double inc = weighted_norm(diff, mixed);
    z.values = znew;
    if (prev_inc > 0.0 && inc > 1e-16) {
      const double ratio = inc / prev_inc;
      factor = std::max(factor, ratio);
      if (ratio >= 1.0 && it > 4) throw ContractionFailure(ratio);
    }
    prev_inc = inc;
    if (inc < p.tol * std::max(1.0, weighted_norm(z, mixed))) break;
    if (it == p.max_iter) throw NonConvergence("solve_center_fixed_point", it, inc);
  }

  CenterFixedPointResult out;
  out.trajectory = z;
  out.iterations = iters;
  out.contraction_factor = factor;
  out.graph_value = z.values.col(mid).tail(dh);
  return out;
}

ExpApproximationResult exp_approximation_check(const CanonicalSystem& canon,
                                               const GridFunction& trajectory,
                                               const CenterGraphTaylor& taylor,
                                               double nu_tilde, double M,
                                               double radius) {
  const double x_end = trajectory.x_end();
  if (M < 0) M = trajectory.x0 + 0.25 * (x_end - trajectory.x0);
  const double x_hi = trajectory.x0 + 0.75 * (x_end - trajectory.x0);
  std::vector<double> xs, ys;
  double floor = 0.0;
  for (int i = 0; i < trajectory.size(); ++i)
    floor = std::max(floor, trajectory.values.col(i).norm());
  floor *= 1e-13;
  for (int i = 0; i < trajectory.size(); ++i) {
    const double x = trajectory.x(i);
    if (x < M || x > x_hi) continue;
    const Vector zc = trajectory.values.col(i).head(canon.dim_c);
    const Vector zh = trajectory.values.col(i).tail(canon.dim_h);
    if (radius > 0 && trajectory.values.col(i).norm() > radius)
      throw RadiusExceeded("exp_approximation_check: trajectory leaves radius");
    const double d = (zh - taylor.eval(zc)).norm();
    if (d > floor) {
      xs.push_back(x);
      ys.push_back(d);
    }
  }
  ExpApproximationResult out;
  if (xs.size() < 2) {
    // distance already at round-off: vacuous pass
    out.rate_fit = std::numeric_limits<double>::infinity();
    out.pass = true;
    return out;
  }
  out.rate_fit = fit_decay_rate(xs, ys);
  out.pass = out.rate_fit >= nu_tilde;
  return out;
}

}  // namespace kinshock
