#include "gpca/veronese.hpp"

#include <limits>
#include <numeric>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>

#include "gpca/error.hpp"

namespace gpca {

std::size_t monomial_count(unsigned degree, unsigned dim) {
  if (dim == 0) throw InputError("monomial_count: dimension must be at least 1");
  // C(n+i, i) for i = 1..D-1, each step exact: with g = gcd(count, i), i/g divides n+i.
  std::size_t count = 1;
  for (unsigned i = 1; i < dim; ++i) {
    const std::size_t g = std::gcd(count, static_cast<std::size_t>(i));
    const std::size_t factor = (static_cast<std::size_t>(degree) + i) / (i / g);
    if (count / g > std::numeric_limits<std::size_t>::max() / factor)
      throw std::overflow_error("monomial_count: M_" + std::to_string(degree) + "(" +
                                std::to_string(dim) + ") overflows size_t");
    count = count / g * factor;
  }
  return count;
}

namespace {

void enumerate(unsigned remaining, unsigned var, std::vector<unsigned>& current,
               std::vector<MonomialIndex>& out) {
  const auto dim = static_cast<unsigned>(current.size());
  if (var + 1 == dim) {
    current[var] = remaining;
    out.push_back({current, out.size()});
    return;
  }
  for (unsigned e = remaining + 1; e-- > 0;) {
    current[var] = e;
    enumerate(remaining - e, var + 1, current, out);
  }
  current[var] = 0;
}

}  // namespace

std::vector<MonomialIndex> monomial_basis(unsigned degree, unsigned dim) {
  const std::size_t count = monomial_count(degree, dim);
  std::vector<MonomialIndex> out;
  out.reserve(count);
  std::vector<unsigned> current(dim, 0);
  enumerate(degree, 0, current, out);
  return out;
}

Eigen::MatrixXd DerivativeOperator::matrix() const {
  const std::size_t rows = monomial_count(degree, dim);
  const std::size_t cols = degree == 0 ? 0 : monomial_count(degree - 1, dim);
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows),
                                            static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < factor.size(); ++r)
    if (factor[r] != 0)
      e(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(column[r])) = factor[r];
  return e;
}

MonomialTable::MonomialTable(unsigned degree, unsigned dim)
    : degree_(degree), dim_(dim), monomials_(monomial_basis(degree, dim)) {
  for (const auto& m : monomials_) lookup_.emplace(m.exponents, m.position);
  if (degree == 0) return;

  const auto lower = MonomialTable::get(degree - 1, dim);
  derivatives_.reserve(dim);
  for (unsigned k = 0; k < dim; ++k) {
    DerivativeOperator op;
    op.variable = k;
    op.degree = degree;
    op.dim = dim;
    op.column.assign(monomials_.size(), 0);
    op.factor.assign(monomials_.size(), 0);
    for (const auto& m : monomials_) {
      const unsigned a = m.exponents[k];
      if (a == 0) continue;
      auto reduced = m.exponents;
      --reduced[k];
      op.column[m.position] = lower->position(reduced);
      op.factor[m.position] = a;
    }
    derivatives_.push_back(std::move(op));
  }
}

std::shared_ptr<const MonomialTable> MonomialTable::get(unsigned degree, unsigned dim) {
  static std::recursive_mutex mutex;
  static std::map<std::pair<unsigned, unsigned>, std::shared_ptr<const MonomialTable>> cache;
  std::lock_guard lock(mutex);
  const auto key = std::make_pair(degree, dim);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  auto table = std::make_shared<const MonomialTable>(degree, dim);
  cache.emplace(key, table);
  return table;
}

std::size_t MonomialTable::position(const std::vector<unsigned>& exponents) const {
  auto it = lookup_.find(exponents);
  if (it == lookup_.end()) throw std::out_of_range("MonomialTable::position: not a monomial of this degree");
  return it->second;
}

Eigen::VectorXd MonomialTable::lift(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != static_cast<Eigen::Index>(dim_))
    throw InputError("veronese_lift: point has dimension " + std::to_string(x.size()) +
                     ", expected " + std::to_string(dim_));
  // powers(k, e) = x_k^e
  Eigen::MatrixXd powers(dim_, degree_ + 1);
  for (unsigned k = 0; k < dim_; ++k) {
    powers(k, 0) = 1.0;
    for (unsigned e = 1; e <= degree_; ++e) powers(k, e) = powers(k, e - 1) * x(k);
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(monomials_.size()));
  for (const auto& m : monomials_) {
    double v = 1.0;
    for (unsigned k = 0; k < dim_; ++k) v *= powers(k, m.exponents[k]);
    out(static_cast<Eigen::Index>(m.position)) = v;
  }
  return out;
}

Eigen::VectorXd veronese_lift(const Eigen::Ref<const Eigen::VectorXd>& x, unsigned degree) {
  return MonomialTable::get(degree, static_cast<unsigned>(x.size()))->lift(x);
}

DerivativeOperator derivative_operator(unsigned degree, unsigned variable, unsigned dim) {
  if (degree == 0) throw InputError("derivative_operator: degree must be at least 1");
  if (variable >= dim) throw InputError("derivative_operator: variable index out of range");
  return MonomialTable::get(degree, dim)->derivatives()[variable];
}

}  // namespace gpca
