#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "gpca/rng.hpp"
#include "gpca/segmentation.hpp"

namespace gpca {

/// Random arrangement of linear subspaces in R^D.
struct ArrangementSpec {
  unsigned ambient = 3;
  std::vector<unsigned> dims;             // 0 < d_i < D
  std::vector<std::size_t> points;        // per subspace; a single entry applies to all
  double noise = 0.0;                     // s.t.d. along the subspace normals, unit scale
  std::uint64_t seed = 0;
  double min_angle_deg = 10.0;            // rejection threshold between subspaces

  std::size_t points_for(std::size_t i) const { return points.size() == 1 ? points[0] : points.at(i); }
  void validate() const;
};

struct Dataset {
  Eigen::MatrixXd points;  // D x N
  std::vector<SubspaceModel> models;
  std::vector<int> labels;
};

/// Orthonormal bases drawn at random, points uniform in the unit ball of each
/// subspace, Gaussian noise along the complement. Noise is drawn after every
/// point, so the same seed gives the same noiseless points at any noise level.
Dataset generate(const ArrangementSpec& spec);

/// x3 axis and the plane x3 = 0.
Dataset line_plane_example(std::size_t per_subspace, double noise, std::uint64_t seed);
/// x1 axis, x2 axis, and the plane x1 + x2 = 0.
Dataset two_lines_plane_example(std::size_t per_subspace, double noise, std::uint64_t seed);
/// x1 axis and x2 axis.
Dataset two_lines_example(std::size_t per_subspace, double noise, std::uint64_t seed);

/// Minimum-cost perfect matching on a rectangular cost matrix (rows <= cols).
/// Returns the column assigned to each row.
std::vector<std::size_t> min_cost_assignment(const Eigen::MatrixXd& cost);

/// Mean over matched pairs of the largest principal angle between complement
/// subspaces, in degrees (for hyperplanes: acos |b^T b_hat|). Pairs with
/// different dimensions count as 90 degrees. Throws InputError on count mismatch.
double angle_error(const std::vector<SubspaceModel>& truth, const std::vector<SubspaceModel>& estimate);

/// Fraction of points whose label agrees with the truth after the best
/// one-to-one relabelling. Outliers (kOutlier) count as wrong.
double classification_rate(const std::vector<int>& truth, const std::vector<int>& estimate);

}  // namespace gpca
