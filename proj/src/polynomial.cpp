#include "gpca/polynomial.hpp"

#include <cassert>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "gpca/error.hpp"
#include "gpca/format.hpp"
#include "gpca/linalg.hpp"
#include "gpca/veronese.hpp"

namespace gpca {

namespace {

void check_dim(unsigned dim, Eigen::Index got, const char* what) {
  if (got != static_cast<Eigen::Index>(dim))
    throw InputError(std::string(what) + ": point has dimension " + std::to_string(got) +
                     ", expected " + std::to_string(dim));
}

}  // namespace

PolynomialBasis stack_coefficients(const std::vector<HomogeneousPolynomial>& polys) {
  if (polys.empty()) throw InputError("PolynomialBasis: empty basis");
  const auto& first = polys.front();
  Eigen::MatrixXd c(first.coefficients().size(), static_cast<Eigen::Index>(polys.size()));
  for (std::size_t i = 0; i < polys.size(); ++i) {
    if (polys[i].degree() != first.degree() || polys[i].dim() != first.dim())
      throw InputError("PolynomialBasis: polynomials differ in degree or dimension");
    c.col(static_cast<Eigen::Index>(i)) = polys[i].coefficients();
  }
  return {first.degree(), first.dim(), std::move(c)};
}

HomogeneousPolynomial::HomogeneousPolynomial(unsigned degree, unsigned dim, Eigen::VectorXd coefficients)
    : degree_(degree), dim_(dim), coefficients_(std::move(coefficients)) {
  const auto expected = static_cast<Eigen::Index>(monomial_count(degree, dim));
  if (coefficients_.size() != expected)
    throw InputError("HomogeneousPolynomial: expected " + std::to_string(expected) +
                     " coefficients, got " + std::to_string(coefficients_.size()));
}

HomogeneousPolynomial HomogeneousPolynomial::from_terms(
    unsigned degree, unsigned dim, const std::vector<std::pair<std::vector<unsigned>, double>>& terms) {
  const auto table = MonomialTable::get(degree, dim);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(table->size()));
  for (const auto& [exponents, value] : terms) {
    try {
      c(static_cast<Eigen::Index>(table->position(exponents))) += value;
    } catch (const std::out_of_range&) {
      throw InputError("HomogeneousPolynomial::from_terms: exponent tuple does not match degree/dim");
    }
  }
  return {degree, dim, std::move(c)};
}

HomogeneousPolynomial HomogeneousPolynomial::product_of_linear_forms(
    const std::vector<Eigen::VectorXd>& factors) {
  if (factors.empty()) throw InputError("product_of_linear_forms: need at least one factor");
  const auto dim = static_cast<unsigned>(factors.front().size());
  Eigen::VectorXd c = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) {
    check_dim(dim, factors[i].size(), "product_of_linear_forms");
    c = lift_matrix(factors[i], static_cast<unsigned>(i + 1)).matrix.transpose() * c;
  }
  return {static_cast<unsigned>(factors.size()), dim, std::move(c)};
}

double evaluate(const HomogeneousPolynomial& p, const Eigen::Ref<const Eigen::VectorXd>& x) {
  check_dim(p.dim(), x.size(), "evaluate");
  return p.coefficients().dot(veronese_lift(x, p.degree()));
}

Eigen::VectorXd gradient(const HomogeneousPolynomial& p, const Eigen::Ref<const Eigen::VectorXd>& x) {
  check_dim(p.dim(), x.size(), "gradient");
  const PolynomialBasis single(p.degree(), p.dim(), p.coefficients());
  return basis_gradients(single, x).col(0);
}

PolynomialBasis::PolynomialBasis(unsigned degree, unsigned dim, Eigen::MatrixXd coefficients)
    : degree_(degree), dim_(dim), coefficients_(std::move(coefficients)) {
  const auto expected = static_cast<Eigen::Index>(monomial_count(degree, dim));
  if (coefficients_.rows() != expected)
    throw InputError("PolynomialBasis: coefficient matrix must have " + std::to_string(expected) + " rows");
  if (coefficients_.cols() == 0) throw InputError("PolynomialBasis: empty basis");
  const Eigen::VectorXd s = linalg::singular_values(coefficients_);
  if (!(s(s.size() - 1) > 1e-10 * s(0)))
    throw InputError("PolynomialBasis: coefficient vectors are linearly dependent");
}

PolynomialBasis::PolynomialBasis(const std::vector<HomogeneousPolynomial>& polys)
    : PolynomialBasis(stack_coefficients(polys)) {}

HomogeneousPolynomial PolynomialBasis::polynomial(std::size_t index) const {
  return {degree_, dim_, coefficients_.col(static_cast<Eigen::Index>(index))};
}

Eigen::VectorXd PolynomialBasis::values(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  check_dim(dim_, x.size(), "PolynomialBasis::values");
  return coefficients_.transpose() * veronese_lift(x, degree_);
}

Eigen::MatrixXd basis_gradients(const PolynomialBasis& basis, const Eigen::Ref<const Eigen::VectorXd>& x) {
  check_dim(basis.dim(), x.size(), "basis_gradients");
  const unsigned n = basis.degree();
  const Eigen::Index m = basis.coefficients().cols();
  Eigen::MatrixXd dp = Eigen::MatrixXd::Zero(x.size(), m);
  if (n == 0) return dp;
  const auto table = MonomialTable::get(n, basis.dim());
  const Eigen::VectorXd lower = veronese_lift(x, n - 1);
  const Eigen::MatrixXd& c = basis.coefficients();
  for (const auto& op : table->derivatives()) {
    for (std::size_t row = 0; row < op.factor.size(); ++row) {
      if (op.factor[row] == 0) continue;
      const double w = op.factor[row] * lower(static_cast<Eigen::Index>(op.column[row]));
      dp.row(op.variable) += w * c.row(static_cast<Eigen::Index>(row));
    }
  }
  return dp;
}

LiftMatrix lift_matrix(const Eigen::Ref<const Eigen::VectorXd>& b, unsigned degree) {
  if (degree == 0) throw InputError("lift_matrix: degree must be at least 1");
  const auto dim = static_cast<unsigned>(b.size());
  const auto lower = MonomialTable::get(degree - 1, dim);
  const auto upper = MonomialTable::get(degree, dim);
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(lower->size()),
                                            static_cast<Eigen::Index>(upper->size()));
  for (const auto& m : lower->monomials()) {
    auto raised = m.exponents;
    for (unsigned k = 0; k < dim; ++k) {
      ++raised[k];
      r(static_cast<Eigen::Index>(m.position), static_cast<Eigen::Index>(upper->position(raised))) += b(k);
      --raised[k];
    }
  }
  return {b, degree, std::move(r)};
}

bool DivisionResult::exact(const HomogeneousPolynomial& dividend, double rel_tol) const {
  return residual <= rel_tol * dividend.coefficients().norm();
}

DivisionResult divide_by_linear(const HomogeneousPolynomial& p, const Eigen::Ref<const Eigen::VectorXd>& b) {
  if (p.degree() < 2) throw InputError("divide_by_linear: dividend degree must be at least 2");
  check_dim(p.dim(), b.size(), "divide_by_linear");
  if (!(b.norm() > 0.0)) throw InputError("divide_by_linear: divisor b must be nonzero");

  const Eigen::MatrixXd rt = lift_matrix(b, p.degree()).matrix.transpose();
  // R_n(b) has full row rank whenever b != 0.
  assert(linalg::singular_values(rt).minCoeff() > 0.0);
  const Eigen::VectorXd quotient = linalg::pinv(rt) * p.coefficients();
  const double residual = (rt * quotient - p.coefficients()).norm();
  return {HomogeneousPolynomial(p.degree() - 1, p.dim(), quotient), residual};
}

void write_polynomials(std::ostream& out, const std::vector<HomogeneousPolynomial>& polys) {
  for (const auto& p : polys) {
    out << "poly " << p.degree() << ' ' << p.dim() << '\n';
    for (Eigen::Index i = 0; i < p.coefficients().size(); ++i)
      out << (i ? " " : "") << format_double(p.coefficients()(i));
    out << '\n';
  }
}

std::vector<HomogeneousPolynomial> read_polynomials(std::istream& in) {
  std::vector<HomogeneousPolynomial> polys;
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      return true;
    }
    return false;
  };
  while (next_line()) {
    std::istringstream header(line);
    std::string tag;
    long degree = -1, dim = -1;
    if (!(header >> tag >> degree >> dim) || tag != "poly" || degree < 0 || dim < 1)
      throw InputError("polynomial text, line " + std::to_string(line_no) + ": expected 'poly <degree> <dim>'");
    const auto count = monomial_count(static_cast<unsigned>(degree), static_cast<unsigned>(dim));
    if (!next_line())
      throw InputError("polynomial text, line " + std::to_string(line_no) + ": missing coefficient line");
    std::istringstream body(line);
    std::vector<double> values;
    std::string token;
    while (body >> token) {
      double v = 0.0;
      if (!parse_double(token, v))
        throw InputError("polynomial text, line " + std::to_string(line_no) + ": bad number '" + token + "'");
      values.push_back(v);
    }
    if (values.size() != count)
      throw InputError("polynomial text, line " + std::to_string(line_no) + ": expected " +
                       std::to_string(count) + " coefficients, got " + std::to_string(values.size()));
    polys.emplace_back(static_cast<unsigned>(degree), static_cast<unsigned>(dim),
                       Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size())));
  }
  return polys;
}

}  // namespace gpca
