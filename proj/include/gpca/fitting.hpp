#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gpca/polynomial.hpp"

namespace gpca {

/// Default penalty weight for rank selection.
inline constexpr double kDefaultKappa = 1e-6;

/// Scales every nonzero column of X (D x N) to unit Euclidean norm.
Eigen::MatrixXd normalize_columns(const Eigen::MatrixXd& points);

/// Embedded data matrix V_n(D) = [nu_n(x_1) ... nu_n(x_N)] and its SVD.
class EmbeddedMatrix {
 public:
  /// Wraps an already-assembled M_n(D) x N matrix (e.g. the stacked matrix of a peel step).
  EmbeddedMatrix(unsigned degree, unsigned dim, Eigen::MatrixXd matrix);

  unsigned degree() const { return degree_; }
  unsigned dim() const { return dim_; }
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  std::size_t monomials() const { return static_cast<std::size_t>(matrix_.rows()); }
  std::size_t samples() const { return static_cast<std::size_t>(matrix_.cols()); }

  /// Economy spectrum: min(M, N) singular values, descending.
  const Eigen::VectorXd& singular_values() const { return singular_values_; }
  /// Spectrum padded with zeros to length M (the missing values when N < M are exact zeros).
  Eigen::VectorXd padded_spectrum() const;
  /// Full M x M matrix of left singular vectors, ordered like the spectrum.
  const Eigen::MatrixXd& left_singular_vectors() const { return left_; }

  /// C = V V^T (feature-space covariance).
  Eigen::MatrixXd covariance() const { return matrix_ * matrix_.transpose(); }
  /// K = V^T V (kernel matrix).
  Eigen::MatrixXd kernel() const { return matrix_.transpose() * matrix_; }

  /// Non-fatal diagnostics, e.g. too few samples for the monomial count.
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  unsigned degree_;
  unsigned dim_;
  Eigen::MatrixXd matrix_;
  Eigen::VectorXd singular_values_;
  Eigen::MatrixXd left_;
  std::vector<std::string> warnings_;
};

/// How each point is scaled before lifting.
enum class PointScaling {
  unit,      // x / ||x||: every point weighs the same in the fit
  none,      // raw points
  distance,  // nu_n(x) / ||x||^{n-1}: residuals scale like the distance to the zero set
};

struct EmbedOptions {
  PointScaling scaling = PointScaling::unit;
};

/// Lifts the columns of X (D x N) with nu_n. Throws InputError for N = 0.
EmbeddedMatrix embed(const Eigen::MatrixXd& points, unsigned degree, EmbedOptions options = {});

/// Outcome of the penalized rank criterion
///   J(r) = sigma_{r+1}^2 / sum_{j<=r} sigma_j^2 + kappa r.
struct RankDecision {
  std::size_t rank = 0;
  std::size_t nullity = 0;
  double kappa = 0.0;
  /// (candidate rank, J(r)) for every candidate evaluated.
  std::vector<std::pair<std::size_t, double>> criterion;
};

/// Chooses the effective rank r of a matrix whose spectrum (descending, padded
/// to the full row count M) is `spectrum`. Candidates are r in {1, ..., M-1};
/// max_nullity restricts them to r >= M - max_nullity. Exact zeros in the
/// spectrum cap the candidates at the number of nonzero values.
/// Throws DegenerateError when all values are zero.
RankDecision select_rank(std::span<const double> spectrum, double kappa,
                         std::optional<std::size_t> max_nullity = std::nullopt);

/// Same criterion but the full rank M is also admissible (sigma_{M+1} := 0);
/// used for rank tests where "no deficiency" is a valid answer.
RankDecision numerical_rank(std::span<const double> spectrum, double kappa);

struct VanishingFit {
  PolynomialBasis basis;
  RankDecision rank;
};

/// Left singular vectors of V for the m smallest singular values, with m from select_rank.
VanishingFit fit_vanishing(const EmbeddedMatrix& embedded, double kappa = kDefaultKappa,
                           std::optional<std::size_t> max_nullity = std::nullopt);

inline PolynomialBasis vanishing_basis(const EmbeddedMatrix& embedded, double kappa = kDefaultKappa,
                                       std::optional<std::size_t> max_nullity = std::nullopt) {
  return fit_vanishing(embedded, kappa, max_nullity).basis;
}

}  // namespace gpca
