#include "gpca/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <thread>

#include "gpca/error.hpp"
#include "gpca/format.hpp"
#include "gpca/rng.hpp"

namespace gpca {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string number(double v) { return std::isfinite(v) ? format_double(v) : std::string("nan"); }

SegmentOptions gpca_options(const ExperimentConfig& config) {
  const bool hyperplanes =
      std::all_of(config.dims.begin(), config.dims.end(), [&](unsigned d) { return d + 1 == config.ambient; });
  SegmentOptions o = hyperplanes ? SegmentOptions::hyperplanes() : SegmentOptions{};
  o.kappa = config.kappa;
  o.delta = config.delta;
  o.rank_kappa = config.kappa;
  return o;
}

}  // namespace

const std::vector<std::string>& known_algorithms() {
  static const std::vector<std::string> names = {"gpca", "pfa-stub", "ksub", "em", "gpca+ksub", "gpca+em",
                                                 "gpca+ksub+em"};
  return names;
}

void ExperimentConfig::validate() const {
  if (algorithms.empty()) throw InputError("experiment: no algorithms");
  for (const auto& a : algorithms) {
    if (a == "pfa-stub") throw InputError("pfa-stub: PFA is not implemented in this library");
    if (std::find(known_algorithms().begin(), known_algorithms().end(), a) == known_algorithms().end())
      throw InputError("experiment: unknown algorithm '" + a + "'");
  }
  if (noise.empty()) throw InputError("experiment: empty noise grid");
  for (double s : noise)
    if (!(s >= 0.0) || !std::isfinite(s)) throw InputError("experiment: noise values must be finite and >= 0");
  if (trials == 0) throw InputError("experiment: trials must be at least 1");
  if (dims.empty()) throw InputError("experiment: dims must list at least one subspace");
  if (points_per_subspace == 0) throw InputError("experiment: points per subspace must be positive");
  if (max_iters == 0 || !(tol > 0.0)) throw InputError("experiment: bad iteration settings");
  ArrangementSpec probe;
  probe.ambient = ambient;
  probe.dims = dims;
  probe.points = {points_per_subspace};
  probe.validate();
}

TrialRow run_trial(const std::string& algorithm, const Dataset& data, const ExperimentConfig& config,
                   std::uint64_t init_seed) {
  TrialRow row;
  row.algorithm = algorithm;
  const auto n = static_cast<unsigned>(config.dims.size());
  const auto start = std::chrono::steady_clock::now();
  try {
    IterativeConfig iter;
    iter.max_iters = config.max_iters;
    iter.tol = config.tol;
    iter.seed = init_seed;

    std::vector<SubspaceModel> models;
    std::vector<int> labels;
    unsigned iterations = 0;
    const bool uses_gpca = algorithm.rfind("gpca", 0) == 0;
    if (uses_gpca) {
      auto seg = segment(data.points, n, gpca_options(config));
      models = std::move(seg.models);
      labels = std::move(seg.labels);
    }
    const bool ksub = algorithm == "ksub" || algorithm == "gpca+ksub" || algorithm == "gpca+ksub+em";
    const bool em = algorithm == "em" || algorithm == "gpca+em" || algorithm == "gpca+ksub+em";
    // GPCA can recover models whose dims differ from the requested ones; the
    // refinement then keeps the recovered dims.
    if (ksub) {
      if (uses_gpca) iter.init = models;
      auto r = k_subspaces(data.points, n, uses_gpca ? std::vector<unsigned>{} : config.dims, iter);
      iterations += r.iterations;
      models = std::move(r.segmentation.models);
      labels = std::move(r.segmentation.labels);
    }
    if (em) {
      if (uses_gpca || ksub) iter.init = models;
      auto r = em_mixture_pca(data.points, n, iter.init ? std::vector<unsigned>{} : config.dims, iter);
      iterations += r.iterations;
      models = std::move(r.segmentation.models);
      labels = std::move(r.segmentation.labels);
    }
    row.error_deg = angle_error(data.models, models);
    row.classification = 100.0 * classification_rate(data.labels, labels);
    row.iterations = iterations;
  } catch (const Error& e) {
    row.status = std::string("failed: ") + e.what();
    row.error_deg = kNaN;
    row.classification = kNaN;
  }
  row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return row;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const std::size_t n_alg = config.algorithms.size();
  const std::size_t tasks = config.noise.size() * config.trials;
  ExperimentResult out;
  out.rows.resize(tasks * n_alg);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t; (t = next.fetch_add(1)) < tasks;) {
      const std::size_t noise_index = t / config.trials;
      const auto trial = static_cast<unsigned>(t % config.trials);
      ArrangementSpec spec;
      spec.ambient = config.ambient;
      spec.dims = config.dims;
      spec.points = {config.points_per_subspace};
      spec.noise = config.noise[noise_index];
      spec.seed = mix_seed(config.seed, trial);
      const Dataset data = generate(spec);
      const std::uint64_t init_seed = mix_seed(spec.seed, 0x1717);
      for (std::size_t a = 0; a < n_alg; ++a) {
        TrialRow row = run_trial(config.algorithms[a], data, config, init_seed);
        row.noise = spec.noise;
        row.trial = trial;
        row.seed = spec.seed;
        out.rows[t * n_alg + a] = std::move(row);
      }
    }
  };
  unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, tasks));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  for (double s : config.noise)
    for (const auto& a : config.algorithms) {
      CellSummary cell;
      cell.algorithm = a;
      cell.noise = s;
      unsigned ok = 0;
      for (const auto& r : out.rows) {
        if (r.algorithm != a || r.noise != s) continue;
        ++cell.trials;
        cell.mean_wall_ms += r.wall_ms;
        if (r.status != "ok") {
          ++cell.failures;
          continue;
        }
        ++ok;
        cell.mean_error_deg += r.error_deg;
        cell.mean_classification += r.classification;
        cell.mean_iterations += r.iterations;
      }
      if (cell.trials) cell.mean_wall_ms /= cell.trials;
      if (ok) {
        cell.mean_error_deg /= ok;
        cell.mean_classification /= ok;
        cell.mean_iterations /= ok;
      } else {
        cell.mean_error_deg = cell.mean_classification = cell.mean_iterations = kNaN;
      }
      out.summary.push_back(cell);
    }
  return out;
}

void write_experiment_csv(std::ostream& out, const ExperimentResult& result, bool timing) {
  out << "algorithm,noise,trial,seed,status,error_deg,classification_pct,iterations" << (timing ? ",wall_ms" : "")
      << '\n';
  for (const auto& r : result.rows) {
    out << r.algorithm << ',' << number(r.noise) << ',' << r.trial << ',' << r.seed << ',' << csv_field(r.status) << ','
        << number(r.error_deg) << ',' << number(r.classification) << ',' << r.iterations;
    if (timing) out << ',' << number(r.wall_ms);
    out << '\n';
  }
  out << "# summary\n";
  out << "algorithm,noise,trials,failures,mean_error_deg,mean_classification_pct,mean_iterations"
      << (timing ? ",mean_wall_ms" : "") << '\n';
  for (const auto& c : result.summary) {
    out << c.algorithm << ',' << number(c.noise) << ',' << c.trials << ',' << c.failures << ','
        << number(c.mean_error_deg) << ',' << number(c.mean_classification) << ',' << number(c.mean_iterations);
    if (timing) out << ',' << number(c.mean_wall_ms);
    out << '\n';
  }
}

}  // namespace gpca
