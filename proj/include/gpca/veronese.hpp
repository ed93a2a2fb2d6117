#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace gpca {

/// Number of degree-`degree` monomials in `dim` variables: C(degree+dim-1, dim-1).
/// Throws std::overflow_error when the count does not fit in std::size_t.
/// Degree 0 is accepted (the single constant monomial).
std::size_t monomial_count(unsigned degree, unsigned dim);

/// One monomial x_1^{e_1} ... x_D^{e_D} and its offset in the canonical order.
struct MonomialIndex {
  std::vector<unsigned> exponents;
  std::size_t position = 0;
};

/// All monomials of a given degree, in degree-lexicographic order with x_1 most
/// significant: exponent tuples are compared lexicographically and listed in
/// descending order, e.g. x1^2, x1x2, x1x3, x2^2, x2x3, x3^2.
std::vector<MonomialIndex> monomial_basis(unsigned degree, unsigned dim);

/// d(nu_n(x))/dx_k = E_nk nu_{n-1}(x). Each row of E_nk has at most one
/// nonzero, so it is stored as (column, factor) per row; factor 0 marks an
/// empty row.
struct DerivativeOperator {
  unsigned variable = 0;  // zero-based k
  unsigned degree = 0;
  unsigned dim = 0;
  std::vector<std::size_t> column;
  std::vector<unsigned> factor;

  /// The constant M_n(D) x M_{n-1}(D) integer matrix.
  Eigen::MatrixXd matrix() const;
};

/// Monomial tables for one (degree, dim) pair. Instances are immutable and
/// shared through a process-wide cache; see MonomialTable::get.
class MonomialTable {
 public:
  static std::shared_ptr<const MonomialTable> get(unsigned degree, unsigned dim);

  unsigned degree() const { return degree_; }
  unsigned dim() const { return dim_; }
  std::size_t size() const { return monomials_.size(); }
  const std::vector<MonomialIndex>& monomials() const { return monomials_; }

  /// Offset of an exponent tuple; throws std::out_of_range if not a monomial of this degree.
  std::size_t position(const std::vector<unsigned>& exponents) const;

  /// nu_n(x).
  Eigen::VectorXd lift(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  /// E_nk for k = 0..D-1; empty for degree 0.
  const std::vector<DerivativeOperator>& derivatives() const { return derivatives_; }

  MonomialTable(unsigned degree, unsigned dim);

 private:
  unsigned degree_;
  unsigned dim_;
  std::vector<MonomialIndex> monomials_;
  std::map<std::vector<unsigned>, std::size_t> lookup_;
  std::vector<DerivativeOperator> derivatives_;
};

/// The Veronese map nu_n : R^D -> R^{M_n(D)}.
Eigen::VectorXd veronese_lift(const Eigen::Ref<const Eigen::VectorXd>& x, unsigned degree);

/// E_nk with zero-based variable index k.
DerivativeOperator derivative_operator(unsigned degree, unsigned variable, unsigned dim);

}  // namespace gpca
