#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gpca/baselines.hpp"
#include "gpca/segmentation.hpp"
#include "gpca/synthgen.hpp"

namespace gpca {

/// gpca | pfa-stub | ksub | em | gpca+ksub | gpca+em | gpca+ksub+em
const std::vector<std::string>& known_algorithms();

struct ExperimentConfig {
  std::vector<std::string> algorithms = {"gpca", "ksub", "em", "gpca+ksub", "gpca+em", "gpca+ksub+em"};
  std::vector<double> noise = {0.0, 0.01, 0.02, 0.03, 0.04, 0.05};
  unsigned trials = 100;
  unsigned ambient = 3;
  std::vector<unsigned> dims = {2, 2, 2, 2};  // one per subspace; n = dims.size()
  std::size_t points_per_subspace = 200;
  double kappa = kDefaultKappa;
  double delta = kDefaultDelta;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0: hardware concurrency
  unsigned max_iters = 300;
  double tol = 1e-9;

  void validate() const;
};

struct TrialRow {
  std::string algorithm;
  double noise = 0.0;
  unsigned trial = 0;
  std::uint64_t seed = 0;      // dataset seed
  std::string status = "ok";   // or "failed: <reason>"
  double error_deg = 0.0;      // NaN when failed
  double classification = 0.0;
  unsigned iterations = 0;
  double wall_ms = 0.0;
};

struct CellSummary {
  std::string algorithm;
  double noise = 0.0;
  unsigned trials = 0;
  unsigned failures = 0;
  double mean_error_deg = 0.0;
  double mean_classification = 0.0;
  double mean_iterations = 0.0;
  double mean_wall_ms = 0.0;
};

struct ExperimentResult {
  std::vector<TrialRow> rows;  // noise-major, then trial, then algorithm order
  std::vector<CellSummary> summary;
};

/// Runs every algorithm on the same dataset per (noise, trial); dataset seeds
/// depend only on (seed, trial), so each trial sees the same clean points at
/// every noise level. Deterministic apart from wall_ms.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// One algorithm on one dataset.
TrialRow run_trial(const std::string& algorithm, const Dataset& data, const ExperimentConfig& config,
                   std::uint64_t init_seed);

/// Per-trial CSV rows, then a "# summary" section with per-cell means.
void write_experiment_csv(std::ostream& out, const ExperimentResult& result, bool timing = true);

}  // namespace gpca
