#include "gpca/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/distributions/chi_squared.hpp>

#include "gpca/error.hpp"
#include "gpca/linalg.hpp"
#include "gpca/veronese.hpp"

namespace gpca {

namespace {

constexpr double kZeroNorm = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTieDistance2 = 1e-20;

std::string stage_name(const char* what, unsigned degree) {
  return std::string(what) + " (degree " + std::to_string(degree) + ")";
}

// Message of a FitError without its "stage: " prefix.
std::string detail(const FitError& e) { return std::string(e.what()).substr(e.stage().size() + 2); }

void check_points(const Eigen::MatrixXd& points, const char* where) {
  if (points.cols() == 0) throw InputError(std::string(where) + ": no data points");
  if (!points.allFinite()) throw InputError(std::string(where) + ": data contains non-finite values");
}

// Linear interpolation between order statistics.
double quantile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  if (std::isinf(values[hi])) return frac == 0.0 ? values[lo] : values[hi];
  return values[lo] + frac * (values[hi] - values[lo]);
}

}  // namespace

Eigen::MatrixXd SubspaceModel::basis() const { return linalg::orthogonal_complement(complement); }

SubspaceModel SubspaceModel::from_complement(const Eigen::MatrixXd& complement) {
  SubspaceModel m;
  m.complement = linalg::orthonormalize(complement);
  if (m.complement.cols() == 0 || m.complement.cols() >= m.complement.rows())
    throw InputError("SubspaceModel: complement must have between 1 and D-1 independent columns");
  m.dim = static_cast<std::size_t>(m.complement.rows() - m.complement.cols());
  m.point = Eigen::VectorXd::Zero(m.complement.rows());
  return m;
}

SubspaceModel SubspaceModel::from_basis(const Eigen::MatrixXd& basis) {
  return from_complement(linalg::orthogonal_complement(linalg::orthonormalize(basis)));
}

std::vector<std::size_t> Segmentation::outliers() const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < labels.size(); ++j)
    if (labels[j] == kOutlier) out.push_back(j);
  return out;
}

double algebraic_distance2(const PolynomialBasis& basis, const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.norm() < kZeroNorm) return kInf;
  const Eigen::MatrixXd dp = basis_gradients(basis, x);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(dp, Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  if (s.size() == 0 || !(s(0) > 0.0)) return kInf;
  // DP^T DP = V S^2 V^T, so the quadratic form is sum_k (v_k^T P)^2 / s_k^2.
  const Eigen::VectorXd proj = svd.matrixV().transpose() * basis.values(x);
  double d2 = 0.0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > linalg::kPinvCutoff * s(0)) d2 += proj(k) * proj(k) / (s(k) * s(k));
  return d2;
}

std::size_t select_point(const PolynomialBasis& basis, const Eigen::MatrixXd& points,
                         const std::vector<SubspaceModel>& found, double delta, double* score) {
  if (delta < 0.0) throw InputError("select_point: delta must be non-negative");
  std::size_t best = points.cols();
  double best_value = kInf;
  for (Eigen::Index j = 0; j < points.cols(); ++j) {
    double d2 = algebraic_distance2(basis, points.col(j));
    if (std::isinf(d2)) continue;
    // Rounding-level distances are exact ties, so the choice does not depend on the frame.
    if (d2 <= kTieDistance2) d2 = 0.0;
    double value = d2;
    if (!found.empty()) {
      double denom = 1.0;
      for (const auto& m : found) denom *= m.residual(points.col(j));
      value = (std::sqrt(d2) + delta) / (denom + delta);
    }
    if (value < best_value) {
      best_value = value;
      best = static_cast<std::size_t>(j);
    }
  }
  if (best == static_cast<std::size_t>(points.cols()))
    throw SelectionError("select", "every point has a vanishing derivative");
  if (score) *score = best_value;
  return best;
}

SubspaceModel model_at_point(const PolynomialBasis& basis, const Eigen::Ref<const Eigen::VectorXd>& y,
                             const ModelOptions& options) {
  const Eigen::MatrixXd dp = basis_gradients(basis, y);
  const auto dim = static_cast<std::size_t>(dp.rows());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(dp, Eigen::ComputeFullU);
  const Eigen::VectorXd& s = svd.singularValues();
  if (s.size() == 0 || !(s(0) > 0.0)) throw FitError("model", "DP(y) vanishes at the selected point");

  std::size_t rank = 0;
  if (options.codimension) {
    rank = *options.codimension;
    if (rank == 0 || rank > static_cast<std::size_t>(s.size()))
      throw FitError("model", "requested codimension " + std::to_string(rank) + " exceeds rank of DP(y)");
  } else {
    rank = numerical_rank({s.data(), static_cast<std::size_t>(s.size())}, options.rank_kappa).rank;
  }
  if (rank >= dim)
    throw FitError("model", "DP(y) has full rank; the selected point lies on no subspace at this tolerance");

  SubspaceModel m;
  m.complement = svd.matrixU().leftCols(static_cast<Eigen::Index>(rank));
  m.dim = dim - rank;
  m.point = y;
  return m;
}

PeelResult peel(const PolynomialBasis& basis, const SubspaceModel& model, const EmbeddedMatrix& embedded,
                double kappa, std::optional<std::size_t> max_nullity) {
  const unsigned i = embedded.degree();
  if (i < 2) throw InputError("peel: degree must be at least 2");
  if (basis.degree() != i || basis.dim() != embedded.dim())
    throw InputError("peel: basis and embedded matrix disagree in degree or dimension");
  if (model.ambient() != embedded.dim()) throw InputError("peel: model dimension mismatch");

  const Eigen::MatrixXd& v = embedded.matrix();
  const Eigen::Index c = model.complement.cols();
  Eigen::MatrixXd stacked(static_cast<Eigen::Index>(monomial_count(i - 1, embedded.dim())), v.cols() * c);
  for (Eigen::Index k = 0; k < c; ++k)
    stacked.middleCols(k * v.cols(), v.cols()) = lift_matrix(model.complement.col(k), i).matrix * v;

  EmbeddedMatrix next(i - 1, embedded.dim(), std::move(stacked));
  try {
    auto fit = fit_vanishing(next, kappa, max_nullity);
    return {std::move(fit.basis), std::move(next), std::move(fit.rank)};
  } catch (const FitError& e) {
    throw PeelError(stage_name("peel", i), detail(e));
  } catch (const DegenerateError& e) {
    throw PeelError(stage_name("peel", i), e.what());
  }
}

Assignment assign(const Eigen::MatrixXd& points, const std::vector<SubspaceModel>& models) {
  if (models.empty()) throw InputError("assign: no models");
  Assignment out;
  out.labels.assign(static_cast<std::size_t>(points.cols()), 0);
  out.residuals.resize(points.cols());
  for (Eigen::Index j = 0; j < points.cols(); ++j) {
    double best = kInf;
    int label = 0;
    for (std::size_t l = 0; l < models.size(); ++l) {
      const double r = models[l].residual(points.col(j));
      if (r < best) {
        best = r;
        label = static_cast<int>(l);
      }
    }
    out.labels[static_cast<std::size_t>(j)] = label;
    out.residuals(j) = best;
  }
  return out;
}

Segmentation segment(const Eigen::MatrixXd& points, unsigned n, const SegmentOptions& options) {
  check_points(points, "segment");
  if (n == 0) throw InputError("segment: the number of subspaces must be at least 1");
  if (points.rows() < 2) throw InputError("segment: ambient dimension must be at least 2");

  const Eigen::MatrixXd x = options.normalize ? normalize_columns(points) : points;
  Segmentation seg;
  seg.degree = n;

  EmbeddedMatrix embedded = embed(x, n, {.scaling = PointScaling::none});
  seg.warnings = embedded.warnings();
  VanishingFit fit = [&] {
    try {
      return fit_vanishing(embedded, options.kappa, options.max_nullity);
    } catch (const FitError& e) {
      throw FitError(stage_name("fit", n), detail(e));
    }
  }();
  PolynomialBasis basis = std::move(fit.basis);
  std::size_t nullity = fit.rank.nullity;

  const ModelOptions model_options{options.rank_kappa, options.codimension};
  for (unsigned i = n; i >= 1; --i) {
    StageDiagnostics stage;
    stage.degree = i;
    stage.nullity = nullity;
    try {
      stage.point_index = select_point(basis, x, seg.models, options.delta, &stage.point_score);
    } catch (const SelectionError& e) {
      throw SelectionError(stage_name("select", i), detail(e));
    }
    SubspaceModel model = [&] {
      try {
        return model_at_point(basis, x.col(static_cast<Eigen::Index>(stage.point_index)), model_options);
      } catch (const FitError& e) {
        throw FitError(stage_name("model", i), detail(e));
      }
    }();
    model.point = points.col(static_cast<Eigen::Index>(stage.point_index));
    stage.model_dim = model.dim;
    seg.stages.push_back(stage);
    if (i > 1) {
      auto next = peel(basis, model, embedded, options.kappa, options.max_nullity);
      basis = std::move(next.basis);
      embedded = std::move(next.embedded);
      nullity = next.rank.nullity;
    }
    seg.models.push_back(std::move(model));
  }

  auto a = assign(points, seg.models);
  seg.labels = std::move(a.labels);
  seg.residuals = std::move(a.residuals);
  return seg;
}

std::size_t OutlierReport::rejected() const {
  return static_cast<std::size_t>(std::count(inlier.begin(), inlier.end(), false));
}

OutlierReport reject_outliers(const Eigen::MatrixXd& points, const PolynomialBasis& basis,
                              const OutlierOptions& options) {
  check_points(points, "reject_outliers");
  if (!(options.threshold > 0.0 && options.threshold < 1.0))
    throw InputError("reject_outliers: threshold must lie in (0, 1)");
  const Eigen::MatrixXd& x = points;
  const auto count = static_cast<std::size_t>(x.cols());

  OutlierReport report;
  report.distance2.resize(x.cols());
  std::vector<double> ranks;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    double d2 = algebraic_distance2(basis, x.col(j));
    if (std::isinf(d2)) {
      // Origin, or a singular point of the zero set: keep it only if P vanishes there.
      const double scale = veronese_lift(x.col(j), basis.degree()).norm();
      if (x.col(j).norm() < kZeroNorm || basis.values(x.col(j)).norm() <= 1e-10 * std::max(scale, 1e-300)) d2 = 0.0;
    } else if (d2 <= kTieDistance2) {
      d2 = 0.0;
    }
    report.distance2(j) = d2;
    if (options.mode == OutlierMode::chi2 && !options.dof && std::isfinite(d2) && x.col(j).norm() >= kZeroNorm) {
      const Eigen::VectorXd s = linalg::singular_values(basis_gradients(basis, x.col(j)));
      if (s.size() > 0 && s(0) > 0.0)
        ranks.push_back(static_cast<double>(
            numerical_rank({s.data(), static_cast<std::size_t>(s.size())}, kDefaultKappa).rank));
    }
  }
  const std::vector<double> d2(report.distance2.data(), report.distance2.data() + count);

  if (options.mode == OutlierMode::percentile) {
    report.cutoff = quantile(d2, options.threshold);
  } else {
    report.dof = options.dof ? *options.dof : (ranks.empty() ? 1.0 : std::max(1.0, quantile(ranks, 0.5)));
    if (!(report.dof > 0.0)) throw InputError("reject_outliers: degrees of freedom must be positive");
    const boost::math::chi_squared dist(report.dof);
    report.sigma2 = quantile(d2, 0.5) / boost::math::median(dist);
    report.cutoff = std::isfinite(report.sigma2) ? report.sigma2 * boost::math::quantile(dist, options.threshold) : kInf;
  }

  report.inlier.resize(count);
  for (std::size_t j = 0; j < count; ++j) report.inlier[j] = d2[j] <= report.cutoff;
  if (report.rejected() == count) throw InputError("reject_outliers: every point was rejected");
  return report;
}

OutlierReport robust_inliers(const Eigen::MatrixXd& points, unsigned n, const SegmentOptions& options,
                             const OutlierOptions& outliers, unsigned rounds) {
  check_points(points, "robust_inliers");
  if (rounds == 0) throw InputError("robust_inliers: rounds must be at least 1");
  OutlierReport report;
  report.inlier.assign(static_cast<std::size_t>(points.cols()), true);
  for (unsigned r = 0; r < rounds; ++r) {
    std::vector<Eigen::Index> idx;
    for (std::size_t j = 0; j < report.inlier.size(); ++j)
      if (report.inlier[j]) idx.push_back(static_cast<Eigen::Index>(j));
    const Eigen::MatrixXd subset = points(Eigen::all, idx);
    const auto fit = fit_vanishing(embed(subset, n, {.scaling = PointScaling::distance}), options.kappa,
                                   options.max_nullity);
    report = reject_outliers(points, fit.basis, outliers);
  }
  return report;
}

Segmentation segment_robust(const Eigen::MatrixXd& points, unsigned n, const SegmentOptions& options,
                            const OutlierOptions& outliers, unsigned rounds) {
  const auto report = robust_inliers(points, n, options, outliers, rounds);
  std::vector<Eigen::Index> idx;
  for (std::size_t j = 0; j < report.inlier.size(); ++j)
    if (report.inlier[j]) idx.push_back(static_cast<Eigen::Index>(j));

  const Eigen::MatrixXd subset = points(Eigen::all, idx);
  Segmentation seg = segment(subset, n, options);
  for (auto& stage : seg.stages) stage.point_index = static_cast<std::size_t>(idx[stage.point_index]);
  auto a = assign(points, seg.models);
  seg.labels = std::move(a.labels);
  seg.residuals = std::move(a.residuals);
  for (std::size_t j = 0; j < report.inlier.size(); ++j)
    if (!report.inlier[j]) {
      seg.labels[j] = kOutlier;
      seg.residuals(static_cast<Eigen::Index>(j)) = std::numeric_limits<double>::quiet_NaN();
    }
  return seg;
}

}  // namespace gpca
