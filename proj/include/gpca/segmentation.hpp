#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gpca/fitting.hpp"
#include "gpca/polynomial.hpp"

namespace gpca {

inline constexpr double kDefaultDelta = 0.02;
/// Label given to rejected points.
inline constexpr int kOutlier = -1;

/// One subspace S = span(B)^perp of dimension d, with B orthonormal (D x (D-d)).
struct SubspaceModel {
  Eigen::MatrixXd complement;
  std::size_t dim = 0;
  Eigen::VectorXd point;  // the representative point the model was recovered from

  std::size_t ambient() const { return static_cast<std::size_t>(complement.rows()); }
  /// ||B^T x||.
  double residual(const Eigen::Ref<const Eigen::VectorXd>& x) const { return (complement.transpose() * x).norm(); }
  /// Orthonormal basis of S itself.
  Eigen::MatrixXd basis() const;

  static SubspaceModel from_complement(const Eigen::MatrixXd& complement);
  static SubspaceModel from_basis(const Eigen::MatrixXd& basis);
};

/// What one pass of the degree loop did.
struct StageDiagnostics {
  unsigned degree = 0;
  std::size_t nullity = 0;      // m_i
  std::size_t point_index = 0;  // chosen y_i (column of X)
  double point_score = 0.0;     // value minimised by select_point
  std::size_t model_dim = 0;
};

struct Segmentation {
  unsigned degree = 0;
  std::vector<SubspaceModel> models;
  std::vector<int> labels;      // model index, or kOutlier
  Eigen::VectorXd residuals;    // ||B_label^T x_j||; NaN for outliers
  std::vector<StageDiagnostics> stages;
  std::vector<std::string> warnings;

  std::vector<std::size_t> outliers() const;
};

/// P(x) (DP(x)^T DP(x))^+ P(x)^T. Returns +inf when DP(x) = 0 or ||x|| < 1e-12.
double algebraic_distance2(const PolynomialBasis& basis, const Eigen::Ref<const Eigen::VectorXd>& x);

/// Index of the best point for recovering the next subspace. With no models found
/// it is the argmin of the algebraic distance; afterwards the argmin of
///   (sqrt(d2(x)) + delta) / (prod_found ||B^T x|| + delta).
/// Ties go to the lowest index. Throws SelectionError if every point is degenerate.
std::size_t select_point(const PolynomialBasis& basis, const Eigen::MatrixXd& points,
                         const std::vector<SubspaceModel>& found, double delta = kDefaultDelta,
                         double* score = nullptr);

struct ModelOptions {
  double rank_kappa = kDefaultKappa;
  /// Fix rank(DP(y)) instead of estimating it (1 for hyperplanes).
  std::optional<std::size_t> codimension;
};

/// Complement basis from the principal left singular vectors of DP(y).
SubspaceModel model_at_point(const PolynomialBasis& basis, const Eigen::Ref<const Eigen::VectorXd>& y,
                             const ModelOptions& options = {});

struct PeelResult {
  PolynomialBasis basis;
  EmbeddedMatrix embedded;  // the stacked [R_i(b_1) V_i, ..., R_i(b_c) V_i]
  RankDecision rank;
};

/// Removes `model` from degree-i vanishing polynomials: null space of the stacked
/// matrix [R_i(b) V_i] over the columns b of the model's complement basis.
PeelResult peel(const PolynomialBasis& basis, const SubspaceModel& model, const EmbeddedMatrix& embedded,
                double kappa = kDefaultKappa, std::optional<std::size_t> max_nullity = std::nullopt);

struct Assignment {
  std::vector<int> labels;
  Eigen::VectorXd residuals;
};

/// label_j = argmin_l ||B_l^T x_j||, ties to the lowest l.
Assignment assign(const Eigen::MatrixXd& points, const std::vector<SubspaceModel>& models);

struct SegmentOptions {
  double kappa = kDefaultKappa;
  double delta = kDefaultDelta;
  double rank_kappa = kDefaultKappa;
  std::optional<std::size_t> max_nullity;  // cap on m_i at every stage
  std::optional<std::size_t> codimension;  // fixed rank of DP(y)
  bool normalize = true;

  /// Settings for an arrangement of hyperplanes: one polynomial per stage, one normal per model.
  static SegmentOptions hyperplanes() {
    SegmentOptions o;
    o.max_nullity = 1;
    o.codimension = 1;
    return o;
  }
};

/// Segments X (D x N) into a known number n of subspaces: fit, recover, peel, repeat.
Segmentation segment(const Eigen::MatrixXd& points, unsigned n, const SegmentOptions& options = {});

enum class OutlierMode { percentile, chi2 };

struct OutlierOptions {
  OutlierMode mode = OutlierMode::chi2;
  double threshold = 0.999;          // quantile (percentile) or chi-squared level
  std::optional<double> dof;         // chi2 degrees of freedom; default: median rank of DP(x_j)
};

struct OutlierReport {
  std::vector<bool> inlier;
  Eigen::VectorXd distance2;
  double cutoff = 0.0;  // d2 above this is rejected
  double sigma2 = 0.0;  // chi2 mode only
  double dof = 0.0;     // chi2 mode only

  std::size_t rejected() const;
};

/// Flags points whose algebraic distance is atypically large. Distances are taken
/// at the raw points, so they are in the same units as the noise. Throws
/// InputError if nothing would survive.
OutlierReport reject_outliers(const Eigen::MatrixXd& points, const PolynomialBasis& basis,
                              const OutlierOptions& options = {});

/// Alternates fitting degree-n polynomials on the current inliers with
/// reject_outliers over all points, `rounds` times. The fit uses
/// PointScaling::distance so that its residuals match the rejection test.
OutlierReport robust_inliers(const Eigen::MatrixXd& points, unsigned n, const SegmentOptions& options,
                             const OutlierOptions& outliers, unsigned rounds = 2);

/// robust_inliers followed by segment on the inliers; rejected points get kOutlier.
Segmentation segment_robust(const Eigen::MatrixXd& points, unsigned n, const SegmentOptions& options,
                            const OutlierOptions& outliers, unsigned rounds = 2);

}  // namespace gpca
