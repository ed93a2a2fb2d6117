#include "gpca/fitting.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "gpca/error.hpp"
#include "gpca/veronese.hpp"

namespace gpca {

Eigen::MatrixXd normalize_columns(const Eigen::MatrixXd& points) {
  Eigen::MatrixXd out = points;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    const double norm = out.col(j).norm();
    if (norm > 0.0) out.col(j) /= norm;
  }
  return out;
}

EmbeddedMatrix::EmbeddedMatrix(unsigned degree, unsigned dim, Eigen::MatrixXd matrix)
    : degree_(degree), dim_(dim), matrix_(std::move(matrix)) {
  const auto m = static_cast<Eigen::Index>(monomial_count(degree, dim));
  if (matrix_.rows() != m)
    throw InputError("EmbeddedMatrix: expected " + std::to_string(m) + " rows, got " +
                     std::to_string(matrix_.rows()));
  if (matrix_.cols() == 0) throw InputError("EmbeddedMatrix: no samples");

  const Eigen::Index n = matrix_.cols();
  if (n >= m) {
    // V^T = Q R, R = U_R S W_R^T  =>  V = W_R S (Q U_R)^T, so W_R holds the left vectors of V.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(matrix_.transpose());
    const Eigen::MatrixXd r = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(r, Eigen::ComputeFullV);
    singular_values_ = svd.singularValues();
    left_ = svd.matrixV();
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(matrix_, Eigen::ComputeFullU);
    singular_values_ = svd.singularValues();
    left_ = svd.matrixU();
  }

  if (static_cast<std::size_t>(n) + 1 < static_cast<std::size_t>(m))
    warnings_.push_back("sample-sufficiency: N = " + std::to_string(n) + " < M_" + std::to_string(degree) +
                        "(" + std::to_string(dim) + ") - 1 = " + std::to_string(m - 1) +
                        "; the vanishing polynomials are not uniquely determined");
}

Eigen::VectorXd EmbeddedMatrix::padded_spectrum() const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(matrix_.rows());
  out.head(singular_values_.size()) = singular_values_;
  return out;
}

EmbeddedMatrix embed(const Eigen::MatrixXd& points, unsigned degree, EmbedOptions options) {
  if (points.cols() == 0) throw InputError("embed: no data points");
  if (points.rows() == 0) throw InputError("embed: points have dimension 0");
  const auto dim = static_cast<unsigned>(points.rows());
  const auto table = MonomialTable::get(degree, dim);
  const Eigen::MatrixXd source = options.scaling == PointScaling::none ? points : normalize_columns(points);
  Eigen::MatrixXd v(static_cast<Eigen::Index>(table->size()), points.cols());
  for (Eigen::Index j = 0; j < points.cols(); ++j) {
    v.col(j) = table->lift(source.col(j));
    if (options.scaling == PointScaling::distance) v.col(j) *= points.col(j).norm();
  }
  return {degree, dim, std::move(v)};
}

namespace {

RankDecision evaluate_criterion(std::span<const double> spectrum, double kappa, std::size_t lo,
                                std::size_t hi) {
  const std::size_t total = spectrum.size();
  RankDecision best;
  best.kappa = kappa;
  double best_value = std::numeric_limits<double>::infinity();
  double head = 0.0;  // sum_{j <= r} sigma_j^2
  for (std::size_t r = 1; r <= hi; ++r) {
    head += spectrum[r - 1] * spectrum[r - 1];
    if (r < lo) continue;
    const double next = r < total ? spectrum[r] : 0.0;
    const double value = next * next / head + kappa * static_cast<double>(r);
    best.criterion.emplace_back(r, value);
    if (value < best_value) {
      best_value = value;
      best.rank = r;
    }
  }
  best.nullity = total - best.rank;
  return best;
}

void check_spectrum(std::span<const double> spectrum, double kappa) {
  if (spectrum.empty()) throw InputError("select_rank: empty spectrum");
  if (!(kappa > 0.0)) throw InputError("select_rank: kappa must be positive");
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    if (!(spectrum[i] >= 0.0)) throw InputError("select_rank: singular values must be non-negative");
    if (i > 0 && spectrum[i] > spectrum[i - 1]) throw InputError("select_rank: singular values must be descending");
  }
  if (spectrum[0] == 0.0) throw DegenerateError("select_rank: all singular values are zero");
}

std::size_t count_nonzero(std::span<const double> spectrum) {
  return static_cast<std::size_t>(std::count_if(spectrum.begin(), spectrum.end(), [](double s) { return s > 0.0; }));
}

}  // namespace

RankDecision select_rank(std::span<const double> spectrum, double kappa, std::optional<std::size_t> max_nullity) {
  check_spectrum(spectrum, kappa);
  const std::size_t total = spectrum.size();
  if (total < 2) throw InputError("select_rank: need at least two singular values to leave a null space");
  std::size_t hi = std::min(total - 1, count_nonzero(spectrum));
  std::size_t lo = 1;
  if (max_nullity) {
    if (*max_nullity == 0) throw InputError("select_rank: max_nullity must be at least 1");
    lo = total > *max_nullity ? total - *max_nullity : 1;
  }
  // With an exact zero beyond the cap the nullity bound cannot be honoured; keep the zero count.
  lo = std::min(lo, hi);
  return evaluate_criterion(spectrum, kappa, lo, hi);
}

RankDecision numerical_rank(std::span<const double> spectrum, double kappa) {
  check_spectrum(spectrum, kappa);
  return evaluate_criterion(spectrum, kappa, 1, count_nonzero(spectrum));
}

VanishingFit fit_vanishing(const EmbeddedMatrix& embedded, double kappa, std::optional<std::size_t> max_nullity) {
  const Eigen::VectorXd spectrum = embedded.padded_spectrum();
  RankDecision rank;
  try {
    rank = select_rank({spectrum.data(), static_cast<std::size_t>(spectrum.size())}, kappa, max_nullity);
  } catch (const DegenerateError& e) {
    throw FitError("fit", e.what());
  }
  const auto m = static_cast<Eigen::Index>(rank.nullity);
  PolynomialBasis basis(embedded.degree(), embedded.dim(), embedded.left_singular_vectors().rightCols(m));
  return {std::move(basis), std::move(rank)};
}

}  // namespace gpca
