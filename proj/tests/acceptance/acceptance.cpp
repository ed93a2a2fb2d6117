// One PASS/FAIL line per acceptance criterion. With arguments, runs only the
// checks whose names start with one of them. Exit status 1 if any check fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "gpca/baselines.hpp"
#include "gpca/discovery.hpp"
#include "gpca/experiment.hpp"
#include "gpca/fitting.hpp"
#include "gpca/io.hpp"
#include "gpca/linalg.hpp"
#include "gpca/motion.hpp"
#include "gpca/polynomial.hpp"
#include "gpca/rng.hpp"
#include "gpca/segmentation.hpp"
#include "gpca/synthgen.hpp"
#include "gpca/veronese.hpp"

using namespace gpca;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Check {
  std::string name;
  double limit_s;  // 0: no runtime limit
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double exact_distance(const std::vector<SubspaceModel>& models, const Eigen::VectorXd& x) {
  double best = INFINITY;
  for (const auto& m : models) best = std::min(best, m.residual(x));
  return best;
}

double second_nearest(const std::vector<SubspaceModel>& models, const Eigen::VectorXd& x) {
  std::vector<double> r;
  for (const auto& m : models) r.push_back(m.residual(x));
  std::sort(r.begin(), r.end());
  return r.size() > 1 ? r[1] : INFINITY;
}

std::size_t numeric_rank(const Eigen::MatrixXd& a) {
  const Eigen::VectorXd s = linalg::singular_values(a);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  return static_cast<std::size_t>((s.array() > 1e-10 * s(0)).count());
}

const CellSummary& cell(const ExperimentResult& r, const std::string& algorithm, double noise) {
  for (const auto& c : r.summary)
    if (c.algorithm == algorithm && c.noise == noise) return c;
  throw std::logic_error("missing cell " + algorithm);
}

// --- criteria ------------------------------------------------------------------

Outcome golden_line_plane() {
  const auto data = line_plane_example(100, 0.0, 0);
  const auto fit = fit_vanishing(embed(data.points, 2));
  const auto table = MonomialTable::get(2, 3);
  Eigen::MatrixXd target = Eigen::MatrixXd::Zero(6, 2);
  target(static_cast<Eigen::Index>(table->position({1, 0, 1})), 0) = 1.0;
  target(static_cast<Eigen::Index>(table->position({0, 1, 1})), 1) = 1.0;
  const double span_angle =
      fit.basis.size() == 2 ? linalg::largest_principal_angle(fit.basis.coefficients(), target) : INFINITY;

  const auto seg = segment(data.points, 2);
  std::vector<std::size_t> dims;
  for (const auto& m : seg.models) dims.push_back(m.dim);
  std::sort(dims.begin(), dims.end());
  double line_angle = INFINITY, plane_angle = INFINITY;
  for (const auto& m : seg.models) {
    if (m.dim == 1) line_angle = linalg::largest_principal_angle(m.complement, Eigen::MatrixXd::Identity(3, 2));
    if (m.dim == 2) plane_angle = linalg::largest_principal_angle(m.complement, Eigen::Vector3d(0, 0, 1));
  }
  const double rate = classification_rate(data.labels, seg.labels);
  const bool pass = span_angle <= 1e-9 && dims == std::vector<std::size_t>{1, 2} && line_angle <= 1e-9 &&
                    plane_angle <= 1e-9 && rate == 1.0;
  return {pass, fmt("N=%zu, basis angle %.2e, dims {%zu,%zu}, complement angles %.2e / %.2e rad, labels %.1f%%",
                    static_cast<std::size_t>(data.points.cols()), span_angle, dims.size() > 0 ? dims[0] : 0,
                    dims.size() > 1 ? dims[1] : 0, line_angle, plane_angle, 100 * rate)};
}

Outcome rank_table() {
  const auto data = two_lines_plane_example(100, 0.0, 0);
  const std::size_t r1 = embedded_rank(data.points, 1), r2 = embedded_rank(data.points, 2),
                    r3 = embedded_rank(data.points, 3);
  const auto rec = recursive_segment(data.points);
  auto dims = rec.report.dims;
  std::sort(dims.begin(), dims.end());
  const bool pass = r1 == 3 && r2 == 5 && r3 == 6 && rec.report.leaves.size() == 3 &&
                    dims == std::vector<std::size_t>{1, 1, 2};
  std::ostringstream d;
  for (auto x : dims) d << x << ' ';
  return {pass, fmt("ranks %zu/%zu/%zu, %zu leaves with dims %s", r1, r2, r3, rec.report.leaves.size(),
                    d.str().c_str())};
}

Outcome equal_dim() {
  const auto data = two_lines_example(100, 0.0, 0);
  const auto r = discover_equal_dim(data.points);
  return {r.dim == 1 && r.count == 2, fmt("d=%u, n=%u", r.dim, r.count)};
}

Outcome noise_sweep() {
  ExperimentConfig c;
  c.algorithms = {"gpca", "ksub", "em", "gpca+ksub"};
  c.noise = {0.0, 0.01, 0.02, 0.03, 0.04, 0.05};
  c.trials = 100;
  c.dims = {2, 2, 2, 2};
  c.points_per_subspace = 200;
  c.seed = 20040601;
  const auto r = run_experiment(c);

  const double gpca0 = cell(r, "gpca", 0.0).mean_error_deg;
  const double refined = cell(r, "gpca+ksub", 0.03).mean_error_deg;
  const double random = cell(r, "ksub", 0.03).mean_error_deg;
  const double ratio = refined / random;
  auto stuck = [&](const std::string& a) {
    unsigned k = 0, total = 0;
    for (const auto& row : r.rows)
      if (row.algorithm == a && row.noise == 0.0) {
        ++total;
        if (row.status != "ok" || row.error_deg > 1e-6) ++k;
      }
    return static_cast<double>(k) / total;
  };
  const double ks0 = stuck("ksub"), em0 = stuck("em");
  unsigned failures = 0;
  for (const auto& s : r.summary) failures += s.failures;
  const bool pass = gpca0 < 1e-6 && ratio <= 0.7 && ks0 >= 0.01 && em0 >= 0.01;
  return {pass, fmt("(a) gpca error at 0: %.2e deg; (b) gpca+ksub/ksub at 3%%: %.3f / %.3f = %.2f; "
                    "(c) nonzero error at 0: ksub %.0f%%, em %.0f%%; failed trials %u",
                    gpca0, refined, random, ratio, 100 * ks0, 100 * em0, failures)};
}

Outcome iterations() {
  ExperimentConfig c;
  c.algorithms = {"ksub", "gpca+ksub", "em", "gpca+em"};
  c.noise = {0.02};
  c.trials = 500;
  c.dims = {2, 2, 2, 2};
  c.points_per_subspace = 200;
  c.seed = 20040602;
  const auto r = run_experiment(c);
  const double ks = cell(r, "ksub", 0.02).mean_iterations, gks = cell(r, "gpca+ksub", 0.02).mean_iterations;
  const double em = cell(r, "em", 0.02).mean_iterations, gem = cell(r, "gpca+em", 0.02).mean_iterations;
  unsigned failures = 0;
  for (const auto& s : r.summary) failures += s.failures;
  return {gks < ks && gem < em, fmt("500 trials at 2%%: gpca+ksub %.2f vs ksub %.2f, gpca+em %.2f vs em %.2f; "
                                    "failed trials %u",
                                    gks, ks, gem, em, failures)};
}

Outcome translations() {
  double worst_clean_error = 0.0, worst_clean_rate = 1.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    TranslationSceneSpec spec;
    spec.seed = s;
    const auto scene = translation_scene(spec);
    const auto r = segment_translations(scene.correspondences, 2);
    worst_clean_error = std::max(worst_clean_error, translation_error(scene, r.epipoles));
    worst_clean_rate = std::min(worst_clean_rate, classification_rate(scene.labels, r.segmentation.labels));
  }
  double error = 0.0, rate = 0.0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    TranslationSceneSpec spec;
    spec.noise_px = 1.0;
    spec.seed = mix_seed(2004, static_cast<std::uint64_t>(t));
    const auto scene = translation_scene(spec);
    const auto r = segment_translations(scene.correspondences, 2);
    error += translation_error(scene, r.epipoles);
    rate += classification_rate(scene.labels, r.segmentation.labels);
  }
  error /= trials;
  rate /= trials;
  const bool pass = worst_clean_rate == 1.0 && worst_clean_error < 1e-6 && error <= 3.0 && rate >= 0.9;
  return {pass, fmt("noiseless (20 scenes): worst %.1f%%, worst error %.2e deg; 1 px (200 trials): "
                    "mean error %.2f deg, mean classification %.1f%%",
                    100 * worst_clean_rate, worst_clean_error, error, 100 * rate)};
}

struct DistanceSample {
  unsigned n;
  double dist;
  double d2;
};

std::vector<DistanceSample> distance_samples() {
  Rng rng(1001);
  std::vector<DistanceSample> out;
  while (out.size() < 1000) {
    const unsigned n = 1 + static_cast<unsigned>(rng.next_u64() % 4);
    ArrangementSpec spec;
    spec.ambient = 3 + static_cast<unsigned>(rng.next_u64() % 3);
    spec.dims.assign(n, spec.ambient - 1);
    spec.points = {monomial_count(n, spec.ambient)};
    spec.seed = rng.next_u64();
    const auto data = generate(spec);
    const auto fit = fit_vanishing(embed(data.points, n));
    const auto& truth = data.models[rng.next_u64() % n];
    Eigen::VectorXd on;
    do {
      on = (truth.basis() * rng.normal_matrix(static_cast<Eigen::Index>(truth.dim), 1)).normalized();
    } while (n > 1 && second_nearest(data.models, on) < 0.1);
    const Eigen::VectorXd dir = rng.normal_matrix(spec.ambient, 1).normalized();
    const Eigen::VectorXd x = on + 1e-3 * rng.uniform(0.1, 1.0) * dir;
    out.push_back({n, exact_distance(data.models, x), algebraic_distance2(fit.basis, x)});
  }
  return out;
}

Outcome distance_n_sqrt() {
  const auto samples = distance_samples();
  std::size_t ok = 0;
  std::vector<double> ratio;
  for (const auto& s : samples) {
    const double est = s.n * std::sqrt(s.d2);
    if (std::abs(est - s.dist) <= 0.01 * s.dist) ++ok;
    ratio.push_back(est / s.dist);
  }
  std::sort(ratio.begin(), ratio.end());
  return {ok == samples.size(), fmt("n*sqrt(d2) within 1%% of the exact distance on %zu/%zu pairs; "
                                    "ratio estimate/exact ranges %.3f..%.3f",
                                    ok, samples.size(), ratio.front(), ratio.back())};
}

Outcome distance_sqrt() {
  const auto samples = distance_samples();
  std::size_t ok = 0;
  double worst = 0.0;
  for (const auto& s : samples) {
    const double rel = std::abs(std::sqrt(s.d2) - s.dist) / s.dist;
    worst = std::max(worst, rel);
    if (rel <= 0.01) ++ok;
  }
  return {ok == samples.size(),
          fmt("sqrt(d2) within 1%% on %zu/%zu pairs, worst relative error %.2e", ok, samples.size(), worst)};
}

// --- property suites ----------------------------------------------------------

Outcome veronese_properties() {
  Rng rng(11);
  double worst_h = 0.0, worst_e = 0.0;
  for (int t = 0; t < 500; ++t) {
    const unsigned dim = 2 + static_cast<unsigned>(rng.next_u64() % 4);
    const unsigned n = 1 + static_cast<unsigned>(rng.next_u64() % 5);
    const Eigen::VectorXd x = rng.normal_matrix(dim, 1);
    const double c = rng.uniform(-2.0, 2.0);
    const Eigen::VectorXd lhs = veronese_lift(c * x, n);
    const Eigen::VectorXd rhs = std::pow(c, n) * veronese_lift(x, n);
    worst_h = std::max(worst_h, (lhs - rhs).norm() / std::max(1.0, rhs.norm()));
    const HomogeneousPolynomial p(n, dim, rng.normal_matrix(static_cast<Eigen::Index>(monomial_count(n, dim)), 1));
    const double euler = x.dot(gradient(p, x));
    const double value = n * evaluate(p, x);
    worst_e = std::max(worst_e, std::abs(euler - value) / std::max(1.0, std::abs(value)));
  }
  return {worst_h <= 1e-12 && worst_e <= 1e-12,
          fmt("500 cases: homogeneity %.1e, Euler identity %.1e (relative)", worst_h, worst_e)};
}

Outcome derivative_properties() {
  Rng rng(12);
  double worst = 0.0;
  for (int t = 0; t < 300; ++t) {
    const unsigned dim = 2 + static_cast<unsigned>(rng.next_u64() % 4);
    const unsigned n = 1 + static_cast<unsigned>(rng.next_u64() % 5);
    const unsigned k = static_cast<unsigned>(rng.next_u64() % dim);
    const Eigen::VectorXd x = rng.normal_matrix(dim, 1);
    const Eigen::VectorXd exact = derivative_operator(n, k, dim).matrix() * veronese_lift(x, n - 1);
    const double h = 1e-5;
    Eigen::VectorXd xp = x, xm = x;
    xp(k) += h;
    xm(k) -= h;
    const Eigen::VectorXd fd = (veronese_lift(xp, n) - veronese_lift(xm, n)) / (2 * h);
    worst = std::max(worst, (fd - exact).norm() / std::max(1.0, exact.norm()));
  }
  return {worst <= 1e-6, fmt("300 cases: worst relative gap to central differences %.1e", worst)};
}

Outcome division_round_trip() {
  Rng rng(13);
  double worst = 0.0;
  bool all_exact = true;
  for (int t = 0; t < 300; ++t) {
    const unsigned dim = 2 + static_cast<unsigned>(rng.next_u64() % 4);
    const unsigned n = 2 + static_cast<unsigned>(rng.next_u64() % 4);
    const Eigen::VectorXd b = rng.normal_matrix(dim, 1).normalized();
    const Eigen::VectorXd q = rng.normal_matrix(static_cast<Eigen::Index>(monomial_count(n - 1, dim)), 1);
    const Eigen::VectorXd c = lift_matrix(b, n).matrix.transpose() * q;
    const HomogeneousPolynomial p(n, dim, c);
    const auto r = divide_by_linear(p, b);
    all_exact = all_exact && r.exact(p);
    worst = std::max(worst, (r.quotient.coefficients() - q).norm() / q.norm());
  }
  return {all_exact && worst <= 1e-9, fmt("300 cases: worst quotient error %.1e, all exact: %s", worst,
                                          all_exact ? "yes" : "no")};
}

Outcome complement_recovery() {
  Rng rng(14);
  double worst = 0.0;
  unsigned dim_errors = 0;
  for (int t = 0; t < 200; ++t) {
    ArrangementSpec spec;
    spec.ambient = 3 + static_cast<unsigned>(rng.next_u64() % 3);
    const unsigned n = 1 + static_cast<unsigned>(rng.next_u64() % 3);
    for (unsigned i = 0; i < n; ++i) spec.dims.push_back(1 + static_cast<unsigned>(rng.next_u64() % (spec.ambient - 1)));
    spec.points = {std::max<std::size_t>(2 * monomial_count(n, spec.ambient), 40)};
    spec.seed = rng.next_u64();
    const auto data = generate(spec);
    const auto basis = vanishing_basis(embed(data.points, n));
    const std::size_t i = rng.next_u64() % n;
    const auto& truth = data.models[i];
    const Eigen::VectorXd y = truth.basis() * rng.normal_matrix(static_cast<Eigen::Index>(truth.dim), 1);
    const auto model = model_at_point(basis, y);
    if (model.dim != truth.dim) {
      ++dim_errors;
      continue;
    }
    worst = std::max(worst, linalg::largest_principal_angle(model.complement, truth.complement));
  }
  return {dim_errors == 0 && worst <= 1e-7,
          fmt("200 noiseless arrangements: %u dimension errors, worst angle %.1e rad", dim_errors, worst)};
}

Outcome rotation_equivariance() {
  Rng rng(15);
  unsigned label_mismatch = 0;
  double worst = 0.0;
  for (int t = 0; t < 60; ++t) {
    ArrangementSpec spec;
    spec.ambient = 3 + static_cast<unsigned>(rng.next_u64() % 2);
    const unsigned n = 2 + static_cast<unsigned>(rng.next_u64() % 2);
    for (unsigned i = 0; i < n; ++i) spec.dims.push_back(1 + static_cast<unsigned>(rng.next_u64() % (spec.ambient - 1)));
    spec.points = {60};
    spec.seed = rng.next_u64();
    // Noiseless only: the monomial embedding is not orthogonally invariant, so a
    // least-squares fit to noisy data does not rotate with the data.
    const auto data = generate(spec);
    const Eigen::MatrixXd q = linalg::random_orthonormal(rng, spec.ambient, spec.ambient);
    const auto a = segment(data.points, n);
    const auto b = segment(q * data.points, n);
    if (classification_rate(a.labels, b.labels) != 1.0) ++label_mismatch;
    std::vector<SubspaceModel> rotated;
    for (const auto& m : a.models) rotated.push_back(SubspaceModel::from_complement(q * m.complement));
    worst = std::max(worst, angle_error(rotated, b.models));
  }
  return {label_mismatch == 0 && worst <= 1e-6,
          fmt("60 noiseless arrangements: %u label mismatches, worst model angle %.1e deg", label_mismatch, worst)};
}

Outcome ksub_monotone() {
  unsigned violations = 0, runs = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    ArrangementSpec spec;
    spec.dims = {2, 2, 2};
    spec.points = {80};
    spec.noise = 0.02;
    spec.seed = mix_seed(77, s);
    const auto data = generate(spec);
    IterativeConfig c;
    c.seed = s;
    const auto r = k_subspaces(data.points, 3, spec.dims, c);
    ++runs;
    for (std::size_t k = 1; k < r.objective.size(); ++k)
      if (r.objective[k] > r.objective[k - 1] * (1 + 1e-12) + 1e-15) {
        ++violations;
        break;
      }
  }
  return {violations == 0, fmt("%u runs, %u with an objective increase", runs, violations)};
}

Outcome em_monotone() {
  unsigned violations = 0, runs = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    ArrangementSpec spec;
    spec.dims = {2, 2, 2};
    spec.points = {80};
    spec.noise = 0.02;
    spec.seed = mix_seed(78, s);
    const auto data = generate(spec);
    IterativeConfig c;
    c.seed = s;
    const auto r = em_mixture_pca(data.points, 3, spec.dims, c);
    ++runs;
    for (std::size_t k = 1; k < r.log_likelihood.size(); ++k)
      if (r.log_likelihood[k] < r.log_likelihood[k - 1] - 1e-9 * std::abs(r.log_likelihood[k - 1])) {
        ++violations;
        break;
      }
  }
  return {violations == 0, fmt("%u runs, %u with a log-likelihood decrease", runs, violations)};
}

Outcome projection_preservation() {
  Rng rng(16);
  unsigned failures = 0;
  for (int t = 0; t < 200; ++t) {
    ArrangementSpec spec;
    spec.ambient = 4 + static_cast<unsigned>(rng.next_u64() % 4);
    const unsigned n = 2 + static_cast<unsigned>(rng.next_u64() % 3);
    const unsigned d_max = 1 + static_cast<unsigned>(rng.next_u64() % (spec.ambient - 2));
    for (unsigned i = 0; i < n; ++i) spec.dims.push_back(1 + static_cast<unsigned>(rng.next_u64() % d_max));
    spec.dims[0] = d_max;
    spec.points = {40};
    spec.seed = rng.next_u64();
    const auto data = generate(spec);
    ProjectOptions po;
    po.seed = rng.next_u64();
    const auto projected = project(data.points, d_max + 1, po);
    bool ok = true;
    std::vector<Eigen::MatrixXd> spans;
    for (unsigned i = 0; i < n; ++i) {
      std::vector<Eigen::Index> cols;
      for (std::size_t j = 0; j < data.labels.size(); ++j)
        if (data.labels[j] == static_cast<int>(i)) cols.push_back(static_cast<Eigen::Index>(j));
      const Eigen::MatrixXd block = projected.points(Eigen::all, cols);
      ok = ok && numeric_rank(block) == spec.dims[i];
      spans.push_back(projected.projection.matrix * data.models[i].basis());
    }
    for (unsigned i = 0; i < n && ok; ++i)
      for (unsigned k = i + 1; k < n && ok; ++k)
        if (spec.dims[i] == spec.dims[k])
          ok = linalg::largest_principal_angle(linalg::orthonormalize(spans[i]), linalg::orthonormalize(spans[k])) >
               1e-6;
    if (!ok) ++failures;
  }
  return {failures == 0, fmt("200 random projections to d_max+1: %u changed a subspace dimension or merged two "
                             "subspaces",
                             failures)};
}

Outcome determinism() {
  std::vector<std::string> differing;
  auto same = [&](const std::string& what, const std::string& a, const std::string& b) {
    if (a != b) differing.push_back(what);
  };
  const io::json spec = {{"ambient", 4}, {"dims", {1, 2, 3}}, {"points", 60}, {"noise", 0.01}, {"seed", 5}};
  auto dataset_text = [&] {
    std::ostringstream out;
    const auto d = io::dataset_from_spec(spec);
    io::write_points(out, d.points);
    return out.str() + io::dataset_sidecar(spec, d).dump();
  };
  same("generate", dataset_text(), dataset_text());

  const auto data = io::dataset_from_spec(spec);
  same("segment", io::segmentation_json(segment(data.points, 3)).dump(),
       io::segmentation_json(segment(data.points, 3)).dump());
  OutlierOptions oo;
  oo.mode = OutlierMode::percentile;
  oo.threshold = 0.95;
  same("segment --outliers", io::segmentation_json(segment_robust(data.points, 3, {}, oo)).dump(),
       io::segmentation_json(segment_robust(data.points, 3, {}, oo)).dump());

  const auto mixed = two_lines_plane_example(60, 0.0, 3);
  same("discover", io::discovery_json(recursive_segment(mixed.points).report).dump(),
       io::discovery_json(recursive_segment(mixed.points).report).dump());

  ExperimentConfig c;
  c.noise = {0.0, 0.02};
  c.trials = 4;
  c.dims = {2, 2, 2};
  c.points_per_subspace = 60;
  auto experiment_text = [&](unsigned threads) {
    c.threads = threads;
    std::ostringstream out;
    write_experiment_csv(out, run_experiment(c), false);
    return out.str();
  };
  same("experiment", experiment_text(1), experiment_text(4));

  auto motion_text = [] {
    TranslationSceneSpec ts;
    ts.noise_px = 1.0;
    ts.seed = 9;
    std::ostringstream out;
    const auto scene = translation_scene(ts);
    write_correspondences(out, scene.correspondences);
    out << io::segmentation_json(segment_translations(scene.correspondences, 2).segmentation).dump();
    AffineSceneSpec as;
    as.noise_px = 0.5;
    as.seed = 9;
    const auto affine = affine_scene(as);
    write_tracks(out, affine.trajectories);
    out << io::segmentation_json(segment_affine(affine.trajectories, 2).segmentation).dump();
    return out.str();
  };
  same("motion", motion_text(), motion_text());

  std::string list;
  for (const auto& d : differing) list += " " + d;
  return {differing.empty(), differing.empty() ? "generate, segment, discover, experiment and motion repeat exactly"
                                               : "differs:" + list};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Check> checks = {
      {"ac1_line_plane_golden", 1.0, golden_line_plane},
      {"ac2_rank_table_recursive", 5.0, rank_table},
      {"ac3_two_lines_equal_dim", 5.0, equal_dim},
      {"ac4_noise_sweep", 600.0, noise_sweep},
      {"ac5_iteration_counts", 0.0, iterations},
      {"ac6_two_translations", 120.0, translations},
      {"ac7_distance_n_sqrt", 60.0, distance_n_sqrt},
      {"info_distance_sqrt", 60.0, distance_sqrt},
      {"prop_veronese_homogeneity_euler", 0.0, veronese_properties},
      {"prop_derivative_operators", 0.0, derivative_properties},
      {"prop_lift_divide_round_trip", 0.0, division_round_trip},
      {"prop_complement_recovery", 0.0, complement_recovery},
      {"prop_rotation_equivariance", 0.0, rotation_equivariance},
      {"prop_ksubspaces_monotone", 0.0, ksub_monotone},
      {"prop_em_monotone", 0.0, em_monotone},
      {"prop_projection_preservation", 0.0, projection_preservation},
      {"prop_determinism", 0.0, determinism},
  };
  const std::vector<std::string> filters(argv + 1, argv + argc);
  bool all_pass = true;
  for (const auto& check : checks) {
    if (!filters.empty() &&
        std::none_of(filters.begin(), filters.end(), [&](const std::string& f) { return check.name.rfind(f, 0) == 0; }))
      continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = check.run();
    } catch (const std::exception& e) {
      out = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = fmt("%.2f s", secs);
    if (check.limit_s > 0) {
      timing += fmt(" (limit %.0f s)", check.limit_s);
      if (secs > check.limit_s) out.pass = false;
    }
    std::printf("%s %s: %s [%s]\n", out.pass ? "PASS" : "FAIL", check.name.c_str(), out.detail.c_str(),
                timing.c_str());
    std::fflush(stdout);
    all_pass = all_pass && out.pass;
  }
  return all_pass ? 0 : 1;
}
