#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace gpca {

/// p(x) = c^T nu_n(x), with c indexed in the canonical monomial order.
class HomogeneousPolynomial {
 public:
  HomogeneousPolynomial(unsigned degree, unsigned dim, Eigen::VectorXd coefficients);

  /// Builds a polynomial from (exponents, coefficient) terms.
  static HomogeneousPolynomial from_terms(
      unsigned degree, unsigned dim,
      const std::vector<std::pair<std::vector<unsigned>, double>>& terms);

  /// Product of linear forms (b_1^T x)(b_2^T x)...; degree = factors.size().
  static HomogeneousPolynomial product_of_linear_forms(const std::vector<Eigen::VectorXd>& factors);

  unsigned degree() const { return degree_; }
  unsigned dim() const { return dim_; }
  const Eigen::VectorXd& coefficients() const { return coefficients_; }

 private:
  unsigned degree_;
  unsigned dim_;
  Eigen::VectorXd coefficients_;
};

double evaluate(const HomogeneousPolynomial& p, const Eigen::Ref<const Eigen::VectorXd>& x);

/// Dp(x), computed from the constant derivative operators (no numerical differentiation).
Eigen::VectorXd gradient(const HomogeneousPolynomial& p, const Eigen::Ref<const Eigen::VectorXd>& x);

/// m polynomials of common degree and dimension, stored as the M x m
/// coefficient matrix. Construction rejects linearly dependent sets.
class PolynomialBasis {
 public:
  PolynomialBasis(unsigned degree, unsigned dim, Eigen::MatrixXd coefficients);
  explicit PolynomialBasis(const std::vector<HomogeneousPolynomial>& polys);

  unsigned degree() const { return degree_; }
  unsigned dim() const { return dim_; }
  std::size_t size() const { return static_cast<std::size_t>(coefficients_.cols()); }
  const Eigen::MatrixXd& coefficients() const { return coefficients_; }
  HomogeneousPolynomial polynomial(std::size_t index) const;

  /// P(x) as an m-vector.
  Eigen::VectorXd values(const Eigen::Ref<const Eigen::VectorXd>& x) const;

 private:
  unsigned degree_;
  unsigned dim_;
  Eigen::MatrixXd coefficients_;
};

/// Stacks equal-degree polynomials into a basis (same checks as the constructor).
PolynomialBasis stack_coefficients(const std::vector<HomogeneousPolynomial>& polys);

/// DP(x): D x m matrix whose column l is the gradient of polynomial l.
Eigen::MatrixXd basis_gradients(const PolynomialBasis& basis, const Eigen::Ref<const Eigen::VectorXd>& x);

/// R_n(b): M_{n-1}(D) x M_n(D) matrix with (c^T nu_{n-1}(x)) (b^T x) = (c^T R_n(b)) nu_n(x).
struct LiftMatrix {
  Eigen::VectorXd b;
  unsigned degree = 0;
  Eigen::MatrixXd matrix;
};

LiftMatrix lift_matrix(const Eigen::Ref<const Eigen::VectorXd>& b, unsigned degree);

struct DivisionResult {
  HomogeneousPolynomial quotient;
  double residual;  // ||c_{n-1}^T R_n(b) - c_n^T||

  /// Divisibility at tolerance rel_tol * ||c_n||.
  bool exact(const HomogeneousPolynomial& dividend, double rel_tol = 1e-8) const;
};

/// Least-squares division of p (degree >= 2) by the linear form b^T x.
DivisionResult divide_by_linear(const HomogeneousPolynomial& p, const Eigen::Ref<const Eigen::VectorXd>& b);

/// Text round-trip format: one block per polynomial,
///   poly <degree> <dim>
///   <c_0> <c_1> ... <c_{M-1}>
/// Coefficients are written in shortest round-trip decimal form.
void write_polynomials(std::ostream& out, const std::vector<HomogeneousPolynomial>& polys);
std::vector<HomogeneousPolynomial> read_polynomials(std::istream& in);

}  // namespace gpca
