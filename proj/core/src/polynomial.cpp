#include "kinshock/polynomial.hpp"

#include <cmath>

namespace kinshock {

namespace {

void enumerate(int nvars, int deg, int var, std::vector<int>& current,
               std::vector<std::vector<int>>& out) {
  if (var == nvars - 1) {
    current[var] = deg;
    out.push_back(current);
    return;
  }
  for (int e = deg; e >= 0; --e) {
    current[var] = e;
    enumerate(nvars, deg - e, var + 1, current, out);
  }
}

}  // namespace

MonomialBasis::MonomialBasis(int nvars, int maxdeg)
    : nvars_(nvars), maxdeg_(maxdeg), exps_(maxdeg + 1) {
  if (nvars < 1) throw SolverError("MonomialBasis: need at least one variable");
  for (int deg = 0; deg <= maxdeg; ++deg) {
    std::vector<int> current(nvars, 0);
    enumerate(nvars, deg, 0, current, exps_[deg]);
    for (int i = 0; i < count(deg); ++i) index_[exps_[deg][i]] = i;
  }
}

int MonomialBasis::index_of(const std::vector<int>& e) const {
  auto it = index_.find(e);
  if (it == index_.end()) throw SolverError("monomial not in basis");
  return it->second;
}

Vector MonomialBasis::eval_monomials(int deg, const Vector& w) const {
  Vector out(count(deg));
  for (int i = 0; i < count(deg); ++i) {
    double prod = 1.0;
    const auto& e = exps_[deg][i];
    for (int v = 0; v < nvars_; ++v)
      for (int p = 0; p < e[v]; ++p) prod *= w[v];
    out[i] = prod;
  }
  return out;
}

VectorPoly::VectorPoly(std::shared_ptr<const MonomialBasis> b, int nout)
    : basis(std::move(b)) {
  coef.resize(basis->maxdeg() + 1);
  for (int d = 0; d <= basis->maxdeg(); ++d)
    coef[d] = Matrix::Zero(nout, basis->count(d));
}

Vector VectorPoly::eval(const Vector& w) const {
  return eval_range(w, 0, maxdeg());
}

Vector VectorPoly::eval_range(const Vector& w, int lo, int hi) const {
  Vector out = Vector::Zero(nout());
  for (int d = std::max(lo, 0); d <= std::min(hi, maxdeg()); ++d) {
    if (coef[d].size() == 0 || coef[d].isZero(0.0)) continue;
    out += coef[d] * basis->eval_monomials(d, w);
  }
  return out;
}

VectorPoly& VectorPoly::operator+=(const VectorPoly& other) {
  for (int d = 0; d <= maxdeg(); ++d) coef[d] += other.coef[d];
  return *this;
}

VectorPoly& VectorPoly::operator-=(const VectorPoly& other) {
  for (int d = 0; d <= maxdeg(); ++d) coef[d] -= other.coef[d];
  return *this;
}

void VectorPoly::scale(double s) {
  for (auto& c : coef) c *= s;
}

double VectorPoly::max_coeff_norm(int deg) const {
  if (deg < 0 || deg > maxdeg() || coef[deg].size() == 0) return 0.0;
  return coef[deg].cwiseAbs().maxCoeff();
}

VectorPoly scalar_product(const VectorPoly& a, int row_a, const VectorPoly& b,
                          int row_b) {
  VectorPoly out(a.basis, 1);
  const int maxdeg = a.basis->maxdeg();
  for (int da = 0; da <= maxdeg; ++da) {
    if (a.coef[da].size() == 0) continue;
    for (int db = 0; da + db <= maxdeg; ++db) {
      if (b.coef[db].size() == 0) continue;
      for (int ia = 0; ia < a.basis->count(da); ++ia) {
        const double ca = a.coef[da](row_a, ia);
        if (ca == 0.0) continue;
        for (int ib = 0; ib < b.basis->count(db); ++ib) {
          const double cb = b.coef[db](row_b, ib);
          if (cb == 0.0) continue;
          std::vector<int> e = a.basis->exponents(da)[ia];
          const auto& eb = b.basis->exponents(db)[ib];
          for (int v = 0; v < a.basis->nvars(); ++v) e[v] += eb[v];
          out.coef[da + db](0, a.basis->index_of(e)) += ca * cb;
        }
      }
    }
  }
  return out;
}

VectorPoly directional_derivative(const VectorPoly& p,
                                  const VectorPoly& field) {
  const auto& basis = *p.basis;
  VectorPoly out(p.basis, p.nout());
  const int maxdeg = basis.maxdeg();
  for (int dp = 1; dp <= maxdeg; ++dp) {
    if (p.coef[dp].size() == 0 || p.coef[dp].isZero(0.0)) continue;
    for (int i = 0; i < basis.count(dp); ++i) {
      const auto& e = basis.exponents(dp)[i];
      for (int v = 0; v < basis.nvars(); ++v) {
        if (e[v] == 0) continue;
        std::vector<int> de = e;
        de[v] -= 1;  // d/dw_v of the monomial, factor e[v]
        for (int df = 0; dp - 1 + df <= maxdeg; ++df) {
          if (field.coef[df].size() == 0) continue;
          for (int j = 0; j < basis.count(df); ++j) {
            const double fv = field.coef[df](v, j);
            if (fv == 0.0) continue;
            std::vector<int> sum = de;
            const auto& ef = basis.exponents(df)[j];
            for (int w = 0; w < basis.nvars(); ++w) sum[w] += ef[w];
            out.coef[dp - 1 + df].col(basis.index_of(sum)) +=
                e[v] * fv * p.coef[dp].col(i);
          }
        }
      }
    }
  }
  return out;
}

Matrix poly_jacobian(const VectorPoly& p, const Vector& w) {
  const auto& basis = *p.basis;
  Matrix jac = Matrix::Zero(p.nout(), basis.nvars());
  for (int d = 1; d <= p.maxdeg(); ++d) {
    if (p.coef[d].size() == 0 || p.coef[d].isZero(0.0)) continue;
    for (int i = 0; i < basis.count(d); ++i) {
      const auto& e = basis.exponents(d)[i];
      for (int v = 0; v < basis.nvars(); ++v) {
        if (e[v] == 0) continue;
        double prod = e[v];
        for (int u = 0; u < basis.nvars(); ++u) {
          const int pw = (u == v) ? e[u] - 1 : e[u];
          for (int q = 0; q < pw; ++q) prod *= w[u];
        }
        jac.col(v) += prod * p.coef[d].col(i);
      }
    }
  }
  return jac;
}

Matrix linear_directional_derivative(const MonomialBasis& basis, int deg,
                                     const Matrix& coef, const Matrix& M) {
  Matrix out = Matrix::Zero(coef.rows(), basis.count(deg));
  for (int i = 0; i < basis.count(deg); ++i) {
    const auto& e = basis.exponents(deg)[i];
    for (int v = 0; v < basis.nvars(); ++v) {
      if (e[v] == 0) continue;
      for (int u = 0; u < basis.nvars(); ++u) {
        const double mvu = M(v, u);
        if (mvu == 0.0) continue;
        std::vector<int> ne = e;
        ne[v] -= 1;
        ne[u] += 1;
        out.col(basis.index_of(ne)) += e[v] * mvu * coef.col(i);
      }
    }
  }
  return out;
}

}  // namespace kinshock
