#include "gpca/baselines.hpp"

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

// Responsibility mass below which an EM component counts as empty.
constexpr double kEmptyMass = 1e-8;

SubspaceModel model_from_complement(Eigen::MatrixXd complement) {
  SubspaceModel m;
  m.dim = static_cast<std::size_t>(complement.rows() - complement.cols());
  m.point = Eigen::VectorXd::Zero(complement.rows());
  m.complement = std::move(complement);
  return m;
}

std::vector<unsigned> resolve_dims(const Eigen::MatrixXd& points, unsigned n, const std::vector<unsigned>& dims,
                                   const IterativeConfig& config, const char* where) {
  const std::string w(where);
  if (points.cols() == 0) throw InputError(w + ": no data points");
  if (!points.allFinite()) throw InputError(w + ": data contains non-finite values");
  if (points.rows() < 2) throw InputError(w + ": ambient dimension must be at least 2");
  if (n == 0) throw InputError(w + ": the number of subspaces must be at least 1");
  config.validate();
  const auto ambient = static_cast<unsigned>(points.rows());

  std::vector<unsigned> out;
  if (config.init) {
    if (config.init->size() != n)
      throw InputError(w + ": " + std::to_string(config.init->size()) + " initial models for n = " + std::to_string(n));
    for (const auto& m : *config.init) {
      if (m.ambient() != ambient) throw InputError(w + ": initial model has the wrong ambient dimension");
      out.push_back(static_cast<unsigned>(m.dim));
    }
    if (!dims.empty() && !(dims.size() == 1 && std::all_of(out.begin(), out.end(), [&](unsigned d) { return d == dims[0]; })) &&
        dims != out)
      throw InputError(w + ": dims disagree with the initial models");
  } else if (dims.size() == 1) {
    out.assign(n, dims[0]);
  } else if (dims.size() == n) {
    out = dims;
  } else {
    throw InputError(w + ": dims must have one entry or one per subspace");
  }
  for (unsigned d : out)
    if (d == 0 || d >= ambient)
      throw InputError(w + ": subspace dimension " + std::to_string(d) + " outside (0, " + std::to_string(ambient) + ")");
  return out;
}

std::vector<SubspaceModel> initial_models(Rng& rng, Eigen::Index ambient, const std::vector<unsigned>& dims,
                                          const IterativeConfig& config) {
  if (config.init) return *config.init;
  std::vector<SubspaceModel> models;
  for (unsigned d : dims) models.push_back(model_from_complement(linalg::random_orthonormal(rng, ambient, ambient - d)));
  return models;
}

// A d-dimensional subspace through x, completed with random directions.
SubspaceModel model_through(Rng& rng, const Eigen::VectorXd& x, unsigned d) {
  const Eigen::Index dim = x.size();
  Eigen::MatrixXd seed(dim, d);
  seed.col(0) = x;
  if (d > 1) seed.rightCols(d - 1) = rng.normal_matrix(dim, d - 1);
  Eigen::MatrixXd basis = linalg::orthonormalize(seed);
  if (basis.cols() < d) basis = linalg::random_orthonormal(rng, dim, d);
  return model_from_complement(linalg::orthogonal_complement(basis));
}

Eigen::MatrixXd weighted_scatter(const Eigen::MatrixXd& points, const Eigen::VectorXd& weights) {
  return points * weights.asDiagonal() * points.transpose();
}

double log_sum_exp(const Eigen::RowVectorXd& v) {
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((v.array() - m).exp().sum());
}

Segmentation hard_segmentation(const Eigen::MatrixXd& points, std::vector<SubspaceModel> models) {
  Segmentation seg;
  seg.degree = static_cast<unsigned>(models.size());
  auto a = assign(points, models);
  seg.models = std::move(models);
  seg.labels = std::move(a.labels);
  seg.residuals = std::move(a.residuals);
  return seg;
}

}  // namespace

void IterativeConfig::validate() const {
  if (max_iters == 0) throw InputError("iterative config: max_iters must be at least 1");
  if (!(tol > 0.0)) throw InputError("iterative config: tolerance must be positive");
}

KSubspacesResult k_subspaces(const Eigen::MatrixXd& points, unsigned n, const std::vector<unsigned>& dims,
                             const IterativeConfig& config) {
  const auto d = resolve_dims(points, n, dims, config, "k_subspaces");
  const Eigen::Index ambient = points.rows();
  Rng rng(config.seed);
  std::vector<SubspaceModel> models = initial_models(rng, ambient, d, config);

  KSubspacesResult out;
  Assignment current = assign(points, models);
  out.objective.push_back(current.residuals.squaredNorm());

  for (unsigned it = 1; it <= config.max_iters; ++it) {
    std::vector<std::size_t> empty;
    for (std::size_t l = 0; l < n; ++l) {
      Eigen::VectorXd w = Eigen::VectorXd::Zero(points.cols());
      for (std::size_t j = 0; j < current.labels.size(); ++j)
        if (current.labels[j] == static_cast<int>(l)) w(static_cast<Eigen::Index>(j)) = 1.0;
      if (w.sum() == 0.0) {
        empty.push_back(l);
        continue;
      }
      models[l] = model_from_complement(linalg::minor_directions(weighted_scatter(points, w), ambient - d[l]));
    }
    for (std::size_t l : empty) {
      Eigen::Index worst = 0;
      assign(points, models).residuals.maxCoeff(&worst);
      models[l] = model_through(rng, points.col(worst), d[l]);
      ++out.reseeds;
    }

    Assignment next = assign(points, models);
    const double obj = next.residuals.squaredNorm();
    const bool fixed = next.labels == current.labels;
    const double change = std::abs(out.objective.back() - obj);
    out.objective.push_back(obj);
    out.iterations = it;
    current = std::move(next);
    if (fixed || change <= config.tol) {
      out.converged = true;
      break;
    }
  }
  out.segmentation = hard_segmentation(points, std::move(models));
  return out;
}

EmResult em_mixture_pca(const Eigen::MatrixXd& points, unsigned n, const std::vector<unsigned>& dims,
                        const IterativeConfig& config, std::optional<double> noise_variance) {
  const auto d = resolve_dims(points, n, dims, config, "em_mixture_pca");
  if (noise_variance && !(*noise_variance > 0.0 && std::isfinite(*noise_variance)))
    throw InputError("em_mixture_pca: noise variance must be positive");
  const Eigen::Index ambient = points.rows();
  const Eigen::Index count = points.cols();
  const auto big_n = static_cast<Eigen::Index>(n);
  Rng rng(config.seed);
  std::vector<SubspaceModel> models = initial_models(rng, ambient, d, config);

  Eigen::VectorXd weights = Eigen::VectorXd::Constant(big_n, 1.0 / n);
  Eigen::VectorXd variances(big_n);
  if (noise_variance) {
    variances.setConstant(*noise_variance);
  } else {
    const auto a = assign(points, models);
    double codim = 0.0;
    for (unsigned dl : d) codim += static_cast<double>(ambient - dl);
    codim /= n;
    variances.setConstant(std::max(kMinVariance, a.residuals.squaredNorm() / (static_cast<double>(count) * codim)));
  }

  Eigen::MatrixXd log_p(count, big_n);
  Eigen::VectorXd log_norm(count);
  Eigen::MatrixXd resp(count, big_n);
  Eigen::MatrixXd r2(count, big_n);
  auto e_step = [&] {
    for (Eigen::Index l = 0; l < big_n; ++l) {
      const auto& m = models[static_cast<std::size_t>(l)];
      const double c = static_cast<double>(m.complement.cols());
      r2.col(l) = (m.complement.transpose() * points).colwise().squaredNorm().transpose();
      log_p.col(l) = (std::log(weights(l)) - 0.5 * c * std::log(2.0 * std::numbers::pi * variances(l))) -
                     r2.col(l).array() / (2.0 * variances(l));
    }
    for (Eigen::Index j = 0; j < count; ++j) {
      log_norm(j) = log_sum_exp(log_p.row(j));
      resp.row(j) = (log_p.row(j).array() - log_norm(j)).exp();
    }
    return log_norm.sum();
  };

  EmResult out;
  out.log_likelihood.push_back(e_step());
  for (unsigned it = 1; it <= config.max_iters; ++it) {
    for (Eigen::Index l = 0; l < big_n; ++l) {
      const double mass = resp.col(l).sum();
      auto& m = models[static_cast<std::size_t>(l)];
      if (mass < kEmptyMass) {
        Eigen::Index worst = 0;
        log_norm.minCoeff(&worst);
        m = model_through(rng, points.col(worst), d[static_cast<std::size_t>(l)]);
        weights(l) = 1.0 / static_cast<double>(count);
        ++out.reseeds;
        continue;
      }
      m = model_from_complement(
          linalg::minor_directions(weighted_scatter(points, resp.col(l)), ambient - d[static_cast<std::size_t>(l)]));
      const double c = static_cast<double>(m.complement.cols());
      const Eigen::VectorXd res = (m.complement.transpose() * points).colwise().squaredNorm().transpose();
      variances(l) = std::max(kMinVariance, resp.col(l).dot(res) / (c * mass));
      weights(l) = mass / static_cast<double>(count);
    }
    weights /= weights.sum();

    const double ll = e_step();
    const double prev = out.log_likelihood.back();
    out.log_likelihood.push_back(ll);
    out.iterations = it;
    if (std::abs(ll - prev) <= config.tol * std::max(1.0, std::abs(ll))) {
      out.converged = true;
      break;
    }
  }

  Segmentation seg;
  seg.degree = n;
  seg.labels.resize(static_cast<std::size_t>(count));
  seg.residuals.resize(count);
  for (Eigen::Index j = 0; j < count; ++j) {
    Eigen::Index best = 0;
    resp.row(j).maxCoeff(&best);
    seg.labels[static_cast<std::size_t>(j)] = static_cast<int>(best);
    seg.residuals(j) = std::sqrt(r2(j, best));
  }
  seg.models = std::move(models);
  out.segmentation = std::move(seg);
  out.responsibilities = std::move(resp);
  out.weights = std::move(weights);
  out.variances = std::move(variances);
  return out;
}

}  // namespace gpca
