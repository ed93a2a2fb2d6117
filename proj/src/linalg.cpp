#include "gpca/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace gpca::linalg {

Eigen::MatrixXd pinv(const Eigen::MatrixXd& a, double rel_cutoff) {
  if (a.size() == 0) return Eigen::MatrixXd::Zero(a.cols(), a.rows());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double cutoff = rel_cutoff * (s.size() > 0 ? s(0) : 0.0);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cutoff && s(i) > 0.0) inv(i) = 1.0 / s(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& a, double rel_tol) {
  if (a.cols() == 0) return Eigen::MatrixXd(a.rows(), 0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU);
  const Eigen::VectorXd& s = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > rel_tol * s(0) && s(rank) > 0.0) ++rank;
  return svd.matrixU().leftCols(rank);
}

Eigen::MatrixXd orthogonal_complement(const Eigen::MatrixXd& basis) {
  const Eigen::Index dim = basis.rows();
  const Eigen::Index k = basis.cols();
  if (k == 0) return Eigen::MatrixXd::Identity(dim, dim);
  // Left singular vectors beyond the rank of `basis` span its complement.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(basis, Eigen::ComputeFullU);
  return svd.matrixU().rightCols(dim - k);
}

std::vector<double> principal_angles(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const Eigen::MatrixXd& small = a.cols() <= b.cols() ? a : b;
  const Eigen::MatrixXd& large = a.cols() <= b.cols() ? b : a;
  const Eigen::Index k = small.cols();
  std::vector<double> angles;
  if (k == 0) return angles;

  // cosines: singular values of small^T large (descending);
  // sines: singular values of the residual of `small` off span(large) (ascending once reversed).
  const Eigen::VectorXd cosines = singular_values(small.transpose() * large);
  const Eigen::MatrixXd residual = small - large * (large.transpose() * small);
  Eigen::VectorXd sines = singular_values(residual);
  angles.resize(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i) {
    const double c = i < cosines.size() ? std::min(cosines(i), 1.0) : 0.0;
    const double s = std::min(sines(k - 1 - i), 1.0);
    angles[static_cast<std::size_t>(i)] = std::atan2(s, c);
  }
  std::sort(angles.begin(), angles.end());
  return angles;
}

double largest_principal_angle(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const auto angles = principal_angles(a, b);
  return angles.empty() ? 0.0 : angles.back();
}

Eigen::MatrixXd minor_directions(const Eigen::MatrixXd& scatter, Eigen::Index k) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(scatter);
  // Eigenvalues come back ascending.
  return eig.eigenvectors().leftCols(k);
}

Eigen::MatrixXd random_orthonormal(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd g = rng.normal_matrix(rows, cols);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
  // Fix column signs so the result is a deterministic function of `g`.
  const Eigen::MatrixXd r = qr.matrixQR().topRows(cols).template triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < cols; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

Eigen::VectorXd singular_values(const Eigen::MatrixXd& a) {
  if (a.size() == 0) return Eigen::VectorXd(0);
  return Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues();
}

}  // namespace gpca::linalg
