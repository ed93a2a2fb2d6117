#include "gpca/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "gpca/error.hpp"
#include "gpca/linalg.hpp"
#include "gpca/rng.hpp"

namespace gpca {

namespace {

constexpr int kMaxRejections = 1000;

double to_degrees(double rad) { return rad * 180.0 / std::numbers::pi; }

bool well_separated(const Eigen::MatrixXd& a, const Eigen::MatrixXd& a_perp, const Eigen::MatrixXd& b,
                    const Eigen::MatrixXd& b_perp, double min_angle_deg) {
  return to_degrees(linalg::largest_principal_angle(a, b)) >= min_angle_deg &&
         to_degrees(linalg::largest_principal_angle(a_perp, b_perp)) >= min_angle_deg;
}

// Points uniform in the unit ball of span(basis), appended under `label`.
void sample_subspace(Rng& rng, const Eigen::MatrixXd& basis, std::size_t count, int label, Dataset& out) {
  const Eigen::Index d = basis.cols();
  const Eigen::Index start = out.points.cols();
  out.points.conservativeResize(basis.rows(), start + static_cast<Eigen::Index>(count));
  for (std::size_t j = 0; j < count; ++j) {
    Eigen::VectorXd dir = rng.normal_matrix(d, 1);
    while (dir.norm() == 0.0) dir = rng.normal_matrix(d, 1);
    const double radius = std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
    out.points.col(start + static_cast<Eigen::Index>(j)) = basis * (radius / dir.norm() * dir);
    out.labels.push_back(label);
  }
}

void add_noise(Rng& rng, double noise, Dataset& out) {
  if (noise == 0.0) return;
  for (Eigen::Index j = 0; j < out.points.cols(); ++j) {
    const Eigen::MatrixXd& c = out.models[static_cast<std::size_t>(out.labels[static_cast<std::size_t>(j)])].complement;
    out.points.col(j) += noise * (c * rng.normal_matrix(c.cols(), 1));
  }
}

Dataset fixed_example(const std::vector<Eigen::MatrixXd>& bases, std::size_t per_subspace, double noise,
                      std::uint64_t seed) {
  if (noise < 0.0 || !std::isfinite(noise)) throw InputError("noise must be a finite value >= 0");
  Rng rng(seed);
  Dataset out;
  out.points.resize(bases.front().rows(), 0);
  for (std::size_t i = 0; i < bases.size(); ++i) {
    const Eigen::MatrixXd basis = linalg::orthonormalize(bases[i]);
    sample_subspace(rng, basis, per_subspace, static_cast<int>(i), out);
    out.models.push_back(SubspaceModel::from_basis(basis));
  }
  add_noise(rng, noise, out);
  return out;
}

}  // namespace

void ArrangementSpec::validate() const {
  if (ambient < 2) throw InputError("arrangement: ambient dimension must be at least 2");
  if (dims.empty()) throw InputError("arrangement: subspace list is empty");
  for (unsigned d : dims)
    if (d == 0 || d >= ambient)
      throw InputError("arrangement: subspace dimension " + std::to_string(d) + " outside (0, " +
                       std::to_string(ambient) + ")");
  if (points.empty()) throw InputError("arrangement: points per subspace missing");
  if (points.size() != 1 && points.size() != dims.size())
    throw InputError("arrangement: points must have one entry or one per subspace");
  if (!(noise >= 0.0) || !std::isfinite(noise)) throw InputError("arrangement: noise must be a finite value >= 0");
  if (!(min_angle_deg >= 0.0 && min_angle_deg < 90.0))
    throw InputError("arrangement: min_angle_deg must lie in [0, 90)");
}

Dataset generate(const ArrangementSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const auto dim = static_cast<Eigen::Index>(spec.ambient);
  std::vector<Eigen::MatrixXd> bases, complements;
  for (unsigned d : spec.dims) {
    for (int attempt = 0;; ++attempt) {
      if (attempt == kMaxRejections)
        throw InputError("arrangement: could not draw subspaces " + std::to_string(spec.min_angle_deg) +
                         " degrees apart");
      Eigen::MatrixXd q = linalg::random_orthonormal(rng, dim, dim);
      Eigen::MatrixXd basis = q.leftCols(d), complement = q.rightCols(dim - d);
      bool ok = true;
      for (std::size_t k = 0; k < bases.size() && ok; ++k)
        ok = well_separated(basis, complement, bases[k], complements[k], spec.min_angle_deg);
      if (ok) {
        bases.push_back(std::move(basis));
        complements.push_back(std::move(complement));
        break;
      }
    }
  }

  Dataset out;
  out.points.resize(dim, 0);
  for (std::size_t i = 0; i < bases.size(); ++i) {
    sample_subspace(rng, bases[i], spec.points_for(i), static_cast<int>(i), out);
    SubspaceModel m;
    m.complement = complements[i];
    m.dim = spec.dims[i];
    m.point = Eigen::VectorXd::Zero(dim);
    out.models.push_back(std::move(m));
  }
  add_noise(rng, spec.noise, out);
  return out;
}

Dataset line_plane_example(std::size_t per_subspace, double noise, std::uint64_t seed) {
  Eigen::MatrixXd plane(3, 2);
  plane << 1, 0, 0, 1, 0, 0;
  return fixed_example({Eigen::Vector3d(0, 0, 1), plane}, per_subspace, noise, seed);
}

Dataset two_lines_plane_example(std::size_t per_subspace, double noise, std::uint64_t seed) {
  Eigen::MatrixXd plane(3, 2);
  plane << 1, 0, -1, 0, 0, 1;
  return fixed_example({Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0), plane}, per_subspace, noise, seed);
}

Dataset two_lines_example(std::size_t per_subspace, double noise, std::uint64_t seed) {
  return fixed_example({Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0)}, per_subspace, noise, seed);
}

std::vector<std::size_t> min_cost_assignment(const Eigen::MatrixXd& cost) {
  const auto n = static_cast<std::size_t>(cost.rows());
  const auto m = static_cast<std::size_t>(cost.cols());
  if (n > m) throw InputError("min_cost_assignment: more rows than columns");
  if (n == 0) return {};
  // Shortest augmenting paths with potentials (1-based internally).
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(static_cast<Eigen::Index>(i0 - 1), static_cast<Eigen::Index>(j - 1)) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> assignment(n, 0);
  for (std::size_t j = 1; j <= m; ++j)
    if (p[j] != 0) assignment[p[j] - 1] = j - 1;
  return assignment;
}

double angle_error(const std::vector<SubspaceModel>& truth, const std::vector<SubspaceModel>& estimate) {
  if (truth.size() != estimate.size())
    throw InputError("angle_error: " + std::to_string(truth.size()) + " true models vs " +
                     std::to_string(estimate.size()) + " estimated");
  if (truth.empty()) return 0.0;
  const auto n = static_cast<Eigen::Index>(truth.size());
  Eigen::MatrixXd cost(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& a = truth[static_cast<std::size_t>(i)];
      const auto& b = estimate[static_cast<std::size_t>(j)];
      if (a.ambient() != b.ambient()) throw InputError("angle_error: ambient dimensions differ");
      cost(i, j) = a.complement.cols() == b.complement.cols()
                       ? to_degrees(linalg::largest_principal_angle(a.complement, b.complement))
                       : 90.0;
    }
  const auto match = min_cost_assignment(cost);
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) total += cost(i, static_cast<Eigen::Index>(match[static_cast<std::size_t>(i)]));
  return total / static_cast<double>(n);
}

double classification_rate(const std::vector<int>& truth, const std::vector<int>& estimate) {
  if (truth.size() != estimate.size()) throw InputError("classification_rate: label vectors differ in length");
  if (truth.empty()) return 1.0;
  int t_max = -1, e_max = -1;
  for (std::size_t j = 0; j < truth.size(); ++j) {
    if (truth[j] < 0) throw InputError("classification_rate: true labels must be non-negative");
    t_max = std::max(t_max, truth[j]);
    e_max = std::max(e_max, estimate[j]);
  }
  const Eigen::Index size = std::max(t_max, e_max) + 1;
  Eigen::MatrixXd agree = Eigen::MatrixXd::Zero(size, size);
  for (std::size_t j = 0; j < truth.size(); ++j)
    if (estimate[j] >= 0) agree(truth[j], estimate[j]) += 1.0;
  const auto match = min_cost_assignment(-agree);
  double correct = 0.0;
  for (Eigen::Index i = 0; i < size; ++i) correct += agree(i, static_cast<Eigen::Index>(match[static_cast<std::size_t>(i)]));
  return correct / static_cast<double>(truth.size());
}

}  // namespace gpca
