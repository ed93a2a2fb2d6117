#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "gpca/segmentation.hpp"

namespace gpca {

struct IterativeConfig {
  unsigned max_iters = 300;
  double tol = 1e-9;  // K-subspaces: absolute objective change; EM: relative log-likelihood change
  std::uint64_t seed = 0;                           // random init
  std::optional<std::vector<SubspaceModel>> init;   // start from these models instead

  void validate() const;
};

struct KSubspacesResult {
  Segmentation segmentation;
  unsigned iterations = 0;
  bool converged = false;
  std::vector<double> objective;  // sum_j min_l ||B_l^T x_j||^2; [0] is the initial assignment
  std::size_t reseeds = 0;
};

/// Alternates nearest-subspace assignment with a PCA refit of each cluster.
/// `dims` holds one dimension per subspace, or a single value for all n.
KSubspacesResult k_subspaces(const Eigen::MatrixXd& points, unsigned n, const std::vector<unsigned>& dims,
                             const IterativeConfig& config = {});

struct EmResult {
  Segmentation segmentation;            // hard labels from the largest responsibility
  Eigen::MatrixXd responsibilities;     // N x n
  Eigen::VectorXd weights;              // mixing proportions
  Eigen::VectorXd variances;            // per-subspace noise variance
  unsigned iterations = 0;
  bool converged = false;
  std::vector<double> log_likelihood;   // [0] is the initial E-step
  std::size_t reseeds = 0;
};

inline constexpr double kMinVariance = 1e-12;

/// EM for a mixture of subspaces with isotropic Gaussian noise along each
/// complement. Without `noise_variance` the start value comes from the
/// residuals of the initial hard assignment.
EmResult em_mixture_pca(const Eigen::MatrixXd& points, unsigned n, const std::vector<unsigned>& dims,
                        const IterativeConfig& config = {}, std::optional<double> noise_variance = std::nullopt);

}  // namespace gpca
