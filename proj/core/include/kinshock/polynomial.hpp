#ifndef KINSHOCK_POLYNOMIAL_HPP_
#define KINSHOCK_POLYNOMIAL_HPP_

#include <map>
#include <memory>
#include <vector>

#include "kinshock/numerics.hpp"

namespace kinshock {

/// Dense monomial index for polynomials in `nvars` variables up to degree
/// `maxdeg`. Exponent vectors are enumerated in lexicographic order per
/// degree; indices are stable and deterministic.
class MonomialBasis {
 public:
  MonomialBasis(int nvars, int maxdeg);

  int nvars() const { return nvars_; }
  int maxdeg() const { return maxdeg_; }
  int count(int deg) const { return static_cast<int>(exps_[deg].size()); }
  const std::vector<std::vector<int>>& exponents(int deg) const {
    return exps_[deg];
  }
  /// Index of an exponent vector within its degree block.
  int index_of(const std::vector<int>& e) const;
  /// Values of all degree-`deg` monomials at the point w.
  Vector eval_monomials(int deg, const Vector& w) const;

 private:
  int nvars_;
  int maxdeg_;
  std::vector<std::vector<std::vector<int>>> exps_;  // per degree
  std::map<std::vector<int>, int> index_;            // exponent -> index
};

/// Vector-valued polynomial with homogeneous blocks coef[deg] of shape
/// nout x basis.count(deg), sharing a MonomialBasis.
struct VectorPoly {
  std::shared_ptr<const MonomialBasis> basis;
  std::vector<Matrix> coef;  // index = degree, 0..maxdeg

  VectorPoly() = default;
  VectorPoly(std::shared_ptr<const MonomialBasis> b, int nout);

  int nout() const { return coef.empty() ? 0 : static_cast<int>(coef[0].rows()); }
  int maxdeg() const { return static_cast<int>(coef.size()) - 1; }
  Vector eval(const Vector& w) const;
  /// Evaluate only homogeneous degrees in [lo, hi].
  Vector eval_range(const Vector& w, int lo, int hi) const;
  VectorPoly& operator+=(const VectorPoly& other);
  VectorPoly& operator-=(const VectorPoly& other);
  void scale(double s);
  double max_coeff_norm(int deg) const;
};

/// Product of two scalar polynomials (rows picked from vector polys),
/// truncated at the basis max degree.
VectorPoly scalar_product(const VectorPoly& a, int row_a, const VectorPoly& b,
                          int row_b);

/// Directional derivative P'(w)[field(w)], truncated at the basis max degree.
/// `field` must have nout == nvars.
VectorPoly directional_derivative(const VectorPoly& p, const VectorPoly& field);

/// The linear-field special case field(w) = M w applied to one homogeneous
/// block: returns the same-shape coefficient block of (d/dw P)[M w].
Matrix linear_directional_derivative(const MonomialBasis& basis, int deg,
                                     const Matrix& coef, const Matrix& M);

/// Jacobian dP/dw evaluated at a point (nout x nvars).
Matrix poly_jacobian(const VectorPoly& p, const Vector& w);

}  // namespace kinshock

#endif  // KINSHOCK_POLYNOMIAL_HPP_
