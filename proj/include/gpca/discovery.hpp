#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gpca/fitting.hpp"
#include "gpca/segmentation.hpp"

namespace gpca {

enum class ProjectionKind { identity, pca, random, perturbed_pca };

const char* to_string(ProjectionKind kind);

/// x' = P x with P (D' x D) having orthonormal rows.
struct Projection {
  Eigen::MatrixXd matrix;
  ProjectionKind kind = ProjectionKind::identity;
  std::uint64_t seed = 0;

  Eigen::MatrixXd apply(const Eigen::MatrixXd& points) const { return matrix * points; }
};

struct ProjectOptions {
  ProjectionKind kind = ProjectionKind::random;
  unsigned trials = 1;       // random only: keep the best of this many draws
  unsigned fit_degree = 1;   // degree of the vanishing fit used to rank the draws
  std::uint64_t seed = 0;
};

struct ProjectResult {
  Projection projection;
  Eigen::MatrixXd points;  // D' x N
};

/// Projects X (D x N) to `target_dim` dimensions. pca keeps the top principal
/// directions; random draws orthonormal rows; with trials > 1 the draw whose
/// degree-fit_degree vanishing fit has the smallest relative residual wins.
ProjectResult project(const Eigen::MatrixXd& points, unsigned target_dim, const ProjectOptions& options = {});

/// One rank test rank(V_i(l+1)) < M_i(l+1).
struct RankProbe {
  std::size_t node = 0;  // recursion node (0 outside recursive_segment)
  unsigned ell = 0;      // candidate subspace dimension l; data projected to l+1 dims
  unsigned degree = 0;   // i
  std::size_t rank = 0;
  std::size_t monomials = 0;
  double kappa = 0.0;
  ProjectionKind projection = ProjectionKind::identity;
  std::uint64_t seed = 0;

  bool deficient() const { return rank < monomials; }
};

/// Effective rank of V_degree(D) for the columns of X, full rank allowed.
std::size_t embedded_rank(const Eigen::MatrixXd& points, unsigned degree, double kappa = kDefaultKappa);

struct DiscoverOptions {
  unsigned n_max = 4;
  double kappa = kDefaultKappa;
  double delta = kDefaultDelta;
  std::uint64_t seed = 0;
  double tau = 1e-6;  // membership tolerance ||B^T x|| <= tau
};

/// Smallest i <= n_max with rank(V_i(D)) < M_i(D). Throws DiscoveryError if none.
unsigned count_hyperplanes(const Eigen::MatrixXd& points, unsigned n_max, double kappa = kDefaultKappa,
                           std::vector<RankProbe>* table = nullptr);

struct EqualDimResult {
  unsigned dim = 0;    // d
  unsigned count = 0;  // n
  std::vector<RankProbe> rank_table;
};

/// Sweeps l = 1..D-1 (outer) and i = 1..n_max (inner) over projections to l+1
/// dimensions and returns the first deficient (l, i) as (d, n).
EqualDimResult discover_equal_dim(const Eigen::MatrixXd& points, const DiscoverOptions& options = {});

struct DiscoveryNode {
  std::size_t id = 0;
  std::optional<std::size_t> parent;
  unsigned depth = 0;
  std::vector<std::size_t> points;  // column indices into the input
  Eigen::MatrixXd span;             // D x k orthonormal basis of the node's ambient space
  std::optional<unsigned> split_degree;
  std::optional<unsigned> split_ell;
  std::vector<std::size_t> children;
  std::size_t beyond_tau = 0;  // points whose best split residual exceeded tau
  std::string note;

  bool leaf() const { return children.empty(); }
  std::size_t dim() const { return static_cast<std::size_t>(span.cols()); }
};

struct DiscoveryReport {
  unsigned count = 0;              // number of leaves
  std::vector<std::size_t> dims;   // leaf dimensions, leaf order
  std::vector<RankProbe> rank_table;
  std::vector<DiscoveryNode> tree;  // tree[0] is the root
  std::vector<std::size_t> leaves;  // node ids, in label order
};

struct RecursiveResult {
  Segmentation segmentation;
  DiscoveryReport report;
};

/// Recursive GPCA: find the smallest deficient (l, i), split the points with
/// degree-i GPCA in the projected space, and recurse on each group inside its
/// own span. Leaves become the subspaces of the returned segmentation.
RecursiveResult recursive_segment(const Eigen::MatrixXd& points, const DiscoverOptions& options = {});

}  // namespace gpca
