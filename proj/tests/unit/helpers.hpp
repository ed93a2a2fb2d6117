#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gpca/linalg.hpp"
#include "gpca/rng.hpp"

namespace testutil {

/// Points on span(basis), coefficients standard normal.
inline Eigen::MatrixXd sample_span(gpca::Rng& rng, const Eigen::MatrixXd& basis, Eigen::Index count) {
  return basis * rng.normal_matrix(basis.cols(), count);
}

inline Eigen::MatrixXd hcat(const std::vector<Eigen::MatrixXd>& blocks) {
  Eigen::Index cols = 0;
  for (const auto& b : blocks) cols += b.cols();
  Eigen::MatrixXd out(blocks.front().rows(), cols);
  Eigen::Index at = 0;
  for (const auto& b : blocks) {
    out.middleCols(at, b.cols()) = b;
    at += b.cols();
  }
  return out;
}

/// Largest principal angle between column spans, orthonormalizing first.
inline double span_angle(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return gpca::linalg::largest_principal_angle(gpca::linalg::orthonormalize(a), gpca::linalg::orthonormalize(b));
}

/// Distance of vector v from span(basis).
inline double residual_from_span(const Eigen::MatrixXd& basis, const Eigen::VectorXd& v) {
  const Eigen::MatrixXd q = gpca::linalg::orthonormalize(basis);
  return (v - q * (q.transpose() * v)).norm();
}

}  // namespace testutil
