#include "gpca/discovery.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "gpca/error.hpp"
#include "gpca/linalg.hpp"
#include "gpca/rng.hpp"
#include "gpca/veronese.hpp"

namespace gpca {

namespace {

constexpr unsigned kSeedProbes = 3;
constexpr double kPerturbation = 0.1;

// Top `k` left singular vectors of X (D x N), completed to k columns if X has lower rank.
Eigen::MatrixXd principal_directions(const Eigen::MatrixXd& points, Eigen::Index k) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(normalize_columns(points), Eigen::ComputeFullU);
  return svd.matrixU().leftCols(k);
}

double relative_fit_residual(const Eigen::MatrixXd& points, unsigned degree) {
  const Eigen::VectorXd s = embed(points, degree).padded_spectrum();
  const double total = s.squaredNorm();
  return total > 0.0 ? s(s.size() - 1) * s(s.size() - 1) / total : 0.0;
}

Projection random_projection(Eigen::Index rows, Eigen::Index dim, std::uint64_t seed) {
  Rng rng(seed);
  return {linalg::random_orthonormal(rng, dim, rows).transpose(), ProjectionKind::random, seed};
}

Projection perturbed_pca(const Eigen::MatrixXd& points, Eigen::Index rows, std::uint64_t seed) {
  Rng rng(seed);
  const Eigen::MatrixXd base = principal_directions(points, rows);
  const Eigen::MatrixXd q = linalg::orthonormalize(base + kPerturbation * rng.normal_matrix(base.rows(), rows));
  if (q.cols() < rows) return {base.transpose(), ProjectionKind::pca, seed};
  return {q.transpose(), ProjectionKind::perturbed_pca, seed};
}

// Ascending degree sweep at one l; returns the first deficient degree.
std::optional<unsigned> sweep_degrees(const Eigen::MatrixXd& projected, unsigned ell, unsigned n_max, double kappa,
                                      const Projection& projection, std::size_t node,
                                      std::vector<RankProbe>& table) {
  const auto dim = static_cast<unsigned>(projected.rows());
  for (unsigned i = 1; i <= n_max; ++i) {
    const std::size_t m = monomial_count(i, dim);
    // With N <= M the matrix is rank deficient for lack of samples, not structure.
    if (static_cast<std::size_t>(projected.cols()) <= m) break;
    RankProbe probe;
    probe.node = node;
    probe.ell = ell;
    probe.degree = i;
    probe.monomials = m;
    probe.kappa = kappa;
    probe.projection = projection.kind;
    probe.seed = projection.seed;
    probe.rank = embedded_rank(projected, i, kappa);
    table.push_back(probe);
    if (probe.deficient()) return i;
  }
  return std::nullopt;
}

struct LevelHit {
  std::optional<unsigned> degree;
  Projection projection;
};

// Probes one l. Below the full dimension the data are projected at random with
// several seeds; if the seeds disagree a perturbed PCA projection decides.
LevelHit probe_level(const Eigen::MatrixXd& points, unsigned ell, unsigned n_max, double kappa, std::uint64_t seed,
                     std::size_t node, std::vector<RankProbe>& table) {
  const auto dim = static_cast<unsigned>(points.rows());
  if (ell + 1 == dim) {
    Projection id{Eigen::MatrixXd::Identity(dim, dim), ProjectionKind::identity, 0};
    return {sweep_degrees(points, ell, n_max, kappa, id, node, table), id};
  }
  std::vector<LevelHit> hits;
  for (unsigned t = 0; t < kSeedProbes; ++t) {
    Projection p = random_projection(ell + 1, dim, mix_seed(seed, (static_cast<std::uint64_t>(node) << 32) | (ell << 8) | t));
    hits.push_back({sweep_degrees(p.apply(points), ell, n_max, kappa, p, node, table), p});
  }
  const bool agree = std::all_of(hits.begin(), hits.end(), [&](const LevelHit& h) { return h.degree == hits[0].degree; });
  if (agree) return hits[0];
  Projection p = perturbed_pca(points, ell + 1, mix_seed(seed, (static_cast<std::uint64_t>(node) << 32) | (ell << 8) | 0xff));
  return {sweep_degrees(p.apply(points), ell, n_max, kappa, p, node, table), p};
}

void check_input(const Eigen::MatrixXd& points, const char* where) {
  if (points.cols() == 0) throw InputError(std::string(where) + ": no data points");
  if (points.rows() < 2) throw InputError(std::string(where) + ": ambient dimension must be at least 2");
  if (!points.allFinite()) throw InputError(std::string(where) + ": data contains non-finite values");
}

}  // namespace

const char* to_string(ProjectionKind kind) {
  switch (kind) {
    case ProjectionKind::identity: return "identity";
    case ProjectionKind::pca: return "pca";
    case ProjectionKind::random: return "random";
    case ProjectionKind::perturbed_pca: return "perturbed_pca";
  }
  return "unknown";
}

ProjectResult project(const Eigen::MatrixXd& points, unsigned target_dim, const ProjectOptions& options) {
  const auto dim = static_cast<unsigned>(points.rows());
  if (target_dim == 0) throw InputError("project: target dimension must be positive");
  if (target_dim > dim)
    throw InputError("project: target dimension " + std::to_string(target_dim) + " exceeds " + std::to_string(dim));
  if (points.cols() == 0) throw InputError("project: no data points");

  Projection best;
  switch (options.kind) {
    case ProjectionKind::identity:
      if (target_dim != dim) throw InputError("project: identity projection needs target dimension D");
      best = {Eigen::MatrixXd::Identity(dim, dim), ProjectionKind::identity, 0};
      break;
    case ProjectionKind::pca:
      best = {principal_directions(points, target_dim).transpose(), ProjectionKind::pca, 0};
      break;
    case ProjectionKind::perturbed_pca:
      best = perturbed_pca(points, target_dim, options.seed);
      break;
    case ProjectionKind::random: {
      if (options.trials == 0) throw InputError("project: trials must be at least 1");
      double best_residual = std::numeric_limits<double>::infinity();
      for (unsigned t = 0; t < options.trials; ++t) {
        Projection p = random_projection(target_dim, dim, mix_seed(options.seed, t));
        const double r = options.trials == 1 ? 0.0 : relative_fit_residual(p.apply(points), options.fit_degree);
        if (r < best_residual) {
          best_residual = r;
          best = std::move(p);
        }
      }
      break;
    }
  }
  Eigen::MatrixXd projected = best.apply(points);
  return {std::move(best), std::move(projected)};
}

std::size_t embedded_rank(const Eigen::MatrixXd& points, unsigned degree, double kappa) {
  const Eigen::VectorXd s = embed(points, degree).padded_spectrum();
  return numerical_rank({s.data(), static_cast<std::size_t>(s.size())}, kappa).rank;
}

unsigned count_hyperplanes(const Eigen::MatrixXd& points, unsigned n_max, double kappa, std::vector<RankProbe>* table) {
  check_input(points, "count_hyperplanes");
  const auto dim = static_cast<unsigned>(points.rows());
  std::vector<RankProbe> local;
  const Projection id{Eigen::MatrixXd::Identity(dim, dim), ProjectionKind::identity, 0};
  const auto hit = sweep_degrees(points, dim - 1, n_max, kappa, id, 0, local);
  if (table) table->insert(table->end(), local.begin(), local.end());
  if (!hit) throw DiscoveryError("no arrangement of <= " + std::to_string(n_max) + " hyperplanes fits");
  return *hit;
}

EqualDimResult discover_equal_dim(const Eigen::MatrixXd& points, const DiscoverOptions& options) {
  check_input(points, "discover_equal_dim");
  const auto dim = static_cast<unsigned>(points.rows());
  EqualDimResult out;
  for (unsigned ell = 1; ell < dim; ++ell) {
    const auto hit = probe_level(points, ell, options.n_max, options.kappa, options.seed, 0, out.rank_table);
    if (hit.degree) {
      out.dim = ell;
      out.count = *hit.degree;
      return out;
    }
  }
  throw DiscoveryError("no rank deficiency for any subspace dimension below " + std::to_string(dim) +
                       " and at most " + std::to_string(options.n_max) + " subspaces");
}

namespace {

class Recursion {
 public:
  Recursion(const Eigen::MatrixXd& points, const DiscoverOptions& options) : points_(points), options_(options) {}

  std::size_t build(std::vector<std::size_t> idx, Eigen::MatrixXd span, unsigned depth,
                    std::optional<std::size_t> parent) {
    const std::size_t id = report.tree.size();
    report.tree.emplace_back();
    {
      auto& node = report.tree.back();
      node.id = id;
      node.parent = parent;
      node.depth = depth;
      node.points = idx;
    }

    const std::vector<Eigen::Index> cols(idx.begin(), idx.end());
    Eigen::MatrixXd y = span.transpose() * points_(Eigen::all, cols);

    // Restrict to the span of the data.
    const auto k = static_cast<Eigen::Index>(embedded_rank(y, 1, options_.kappa));
    if (k < y.rows()) {
      span = span * principal_directions(y, k);
      y = span.transpose() * points_(Eigen::all, cols);
    }
    report.tree[id].span = span;

    auto leaf = [&](std::string note) {
      report.tree[id].note = std::move(note);
      return id;
    };
    if (span.cols() == 1) return leaf("one-dimensional span");
    if (depth >= options_.n_max) return leaf("depth limit reached");

    const auto dim = static_cast<unsigned>(y.rows());
    LevelHit hit;
    unsigned ell = 1;
    for (; ell < dim; ++ell) {
      hit = probe_level(y, ell, options_.n_max, options_.kappa, options_.seed, id, report.rank_table);
      if (hit.degree) break;
    }
    if (!hit.degree) return leaf("no rank deficiency; points fill their span");

    const Eigen::MatrixXd projected = hit.projection.apply(y);
    SegmentOptions seg_options;
    seg_options.kappa = options_.kappa;
    seg_options.delta = options_.delta;
    seg_options.rank_kappa = options_.kappa;
    Segmentation split;
    try {
      split = segment(projected, *hit.degree, seg_options);
    } catch (const Error& e) {
      return leaf(std::string("split failed: ") + e.what());
    }
    report.tree[id].split_degree = *hit.degree;
    report.tree[id].split_ell = ell;

    std::vector<std::vector<std::size_t>> groups(split.models.size());
    std::size_t beyond = 0;
    for (std::size_t j = 0; j < idx.size(); ++j) {
      groups[static_cast<std::size_t>(split.labels[j])].push_back(idx[j]);
      if (split.residuals(static_cast<Eigen::Index>(j)) > options_.tau) ++beyond;
    }
    report.tree[id].beyond_tau = beyond;
    std::erase_if(groups, [](const auto& g) { return g.empty(); });
    if (groups.size() < 2) {
      report.tree[id].split_degree.reset();
      report.tree[id].split_ell.reset();
      return leaf("split left all points in one group");
    }

    for (auto& g : groups) {
      const std::size_t child = build(std::move(g), span, depth + 1, id);
      report.tree[id].children.push_back(child);
    }
    return id;
  }

  DiscoveryReport report;

 private:
  const Eigen::MatrixXd& points_;
  const DiscoverOptions& options_;
};

void collect_leaves(const DiscoveryReport& report, std::size_t id, std::vector<std::size_t>& out) {
  const auto& node = report.tree[id];
  if (node.leaf()) {
    out.push_back(id);
    return;
  }
  for (auto c : node.children) collect_leaves(report, c, out);
}

}  // namespace

RecursiveResult recursive_segment(const Eigen::MatrixXd& points, const DiscoverOptions& options) {
  check_input(points, "recursive_segment");
  if (options.n_max == 0) throw InputError("recursive_segment: n_max must be at least 1");
  const auto dim = points.rows();

  Recursion rec(points, options);
  std::vector<std::size_t> all(static_cast<std::size_t>(points.cols()));
  for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
  rec.build(std::move(all), Eigen::MatrixXd::Identity(dim, dim), 0, std::nullopt);

  RecursiveResult out;
  out.report = std::move(rec.report);
  auto& report = out.report;
  collect_leaves(report, 0, report.leaves);

  auto& seg = out.segmentation;
  seg.labels.assign(static_cast<std::size_t>(points.cols()), kOutlier);
  seg.residuals = Eigen::VectorXd::Zero(points.cols());
  for (std::size_t l = 0; l < report.leaves.size(); ++l) {
    const auto& node = report.tree[report.leaves[l]];
    if (node.dim() >= static_cast<std::size_t>(dim))
      throw DiscoveryError(node.parent ? "a group fills the ambient space; no subspace model fits it"
                                       : "the data fill the ambient space; no arrangement of <= " +
                                             std::to_string(options.n_max) + " subspaces fits");
    SubspaceModel model = SubspaceModel::from_basis(node.span);
    for (auto j : node.points) {
      seg.labels[j] = static_cast<int>(l);
      seg.residuals(static_cast<Eigen::Index>(j)) = model.residual(points.col(static_cast<Eigen::Index>(j)));
    }
    seg.models.push_back(std::move(model));
    report.dims.push_back(node.dim());
  }
  seg.degree = static_cast<unsigned>(report.leaves.size());
  report.count = static_cast<unsigned>(report.leaves.size());
  return out;
}

}  // namespace gpca
