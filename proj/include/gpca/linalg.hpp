#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "gpca/rng.hpp"

namespace gpca::linalg {

/// Default relative cutoff below which singular values count as zero.
inline constexpr double kPinvCutoff = 1e-10;

/// Moore-Penrose pseudo-inverse; singular values below rel_cutoff * max are dropped.
Eigen::MatrixXd pinv(const Eigen::MatrixXd& a, double rel_cutoff = kPinvCutoff);

/// Orthonormal basis of the column span of `a` (thin Q of a pivoted QR,
/// truncated to the numerical rank).
Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& a, double rel_tol = 1e-12);

/// Orthonormal basis of the orthogonal complement of span(basis) in R^D.
/// `basis` must have orthonormal columns.
Eigen::MatrixXd orthogonal_complement(const Eigen::MatrixXd& basis);

/// Principal angles (radians, ascending) between span(a) and span(b).
/// Both inputs must have orthonormal columns. Returns min(cols) angles.
/// Uses sines for small angles so that nearly identical subspaces report
/// angles down to ~1e-16 rather than the ~1e-8 floor of acos.
std::vector<double> principal_angles(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// Largest principal angle (radians); 0 when either span is empty.
double largest_principal_angle(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// k eigenvectors of a symmetric PSD matrix with the smallest eigenvalues.
Eigen::MatrixXd minor_directions(const Eigen::MatrixXd& scatter, Eigen::Index k);

/// Random D x k matrix with orthonormal columns (Gaussian + QR).
Eigen::MatrixXd random_orthonormal(Rng& rng, Eigen::Index rows, Eigen::Index cols);

/// Singular values of `a`, descending.
Eigen::VectorXd singular_values(const Eigen::MatrixXd& a);

}  // namespace gpca::linalg
