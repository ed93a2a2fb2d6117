#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "gpca/error.hpp"
#include "gpca/experiment.hpp"

using namespace gpca;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.noise = {0.0, 0.02};
  c.trials = 3;
  c.dims = {2, 2, 2};
  c.points_per_subspace = 60;
  c.seed = 11;
  return c;
}

std::string csv(const ExperimentResult& r) {
  std::ostringstream out;
  write_experiment_csv(out, r, false);
  return out.str();
}

}  // namespace

TEST_CASE("experiment output does not depend on thread count") {
  auto c = small_config();
  c.threads = 1;
  const auto one = run_experiment(c);
  c.threads = 4;
  const auto four = run_experiment(c);
  CHECK(csv(one) == csv(four));
  REQUIRE(one.rows.size() == 2 * 3 * c.algorithms.size());
  CHECK(one.summary.size() == 2 * c.algorithms.size());
}

TEST_CASE("rows are ordered by noise, trial, algorithm") {
  auto c = small_config();
  c.algorithms = {"gpca", "ksub"};
  const auto r = run_experiment(c);
  REQUIRE(r.rows.size() == 12);
  CHECK(r.rows[0].algorithm == "gpca");
  CHECK(r.rows[1].algorithm == "ksub");
  CHECK(r.rows[0].seed == r.rows[1].seed);
  CHECK(r.rows[2].trial == 1);
  CHECK(r.rows[6].noise == 0.02);
  // Each trial reuses its dataset seed across noise levels.
  CHECK(r.rows[6].seed == r.rows[0].seed);
  CHECK(r.rows[0].seed != r.rows[2].seed);
}

TEST_CASE("noiseless gpca is exact") {
  ExperimentConfig c;
  c.algorithms = {"gpca"};
  c.noise = {0.0};
  c.trials = 1;
  const auto r = run_experiment(c);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].status == "ok");
  CHECK(r.rows[0].error_deg < 1e-6);
  CHECK(r.rows[0].classification == doctest::Approx(100.0));
}

TEST_CASE("chained refinements report summed iterations") {
  auto c = small_config();
  c.algorithms = {"gpca+ksub", "gpca+ksub+em"};
  c.noise = {0.02};
  const auto r = run_experiment(c);
  for (const auto& row : r.rows) {
    CHECK(row.status == "ok");
    CHECK(row.iterations >= 1);
  }
  for (std::size_t t = 0; t < c.trials; ++t) CHECK(r.rows[2 * t + 1].iterations >= r.rows[2 * t].iterations);
}

TEST_CASE("csv layout") {
  auto c = small_config();
  c.algorithms = {"gpca"};
  c.noise = {0.0};
  c.trials = 2;
  const auto r = run_experiment(c);
  std::ostringstream out;
  write_experiment_csv(out, r, true);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "algorithm,noise,trial,seed,status,error_deg,classification_pct,iterations,wall_ms");
  std::getline(in, line);
  CHECK(line.rfind("gpca,0,0,", 0) == 0);
  std::getline(in, line);
  std::getline(in, line);
  CHECK(line == "# summary");
  std::getline(in, line);
  CHECK(line == "algorithm,noise,trials,failures,mean_error_deg,mean_classification_pct,mean_iterations,mean_wall_ms");
  std::getline(in, line);
  CHECK(line.rfind("gpca,0,2,0,", 0) == 0);
  CHECK(csv(r).find("wall_ms") == std::string::npos);
}

TEST_CASE("failed trials are marked instead of thrown") {
  auto c = small_config();
  ArrangementSpec spec;
  spec.dims = c.dims;
  spec.points = {20};
  auto data = generate(spec);
  data.points.setZero();
  const auto row = run_trial("gpca", data, c, 1);
  CHECK(row.status.rfind("failed: ", 0) == 0);
  CHECK(std::isnan(row.error_deg));
  CHECK(std::isnan(row.classification));

  ExperimentResult r;
  r.rows = {row};
  r.summary.push_back({"gpca", 0.0, 1, 1, std::nan(""), std::nan(""), std::nan(""), 0.0});
  const auto text = csv(r);
  CHECK(text.find(",failed: ") != std::string::npos);
  CHECK(text.find("gpca,0,1,1,nan,nan,nan") != std::string::npos);
}

TEST_CASE("config validation") {
  ExperimentConfig c;
  c.algorithms = {"gpca", "pfa-stub"};
  CHECK_THROWS_WITH_AS(run_experiment(c), "pfa-stub: PFA is not implemented in this library", InputError);
  c.algorithms = {"pca"};
  CHECK_THROWS_AS(c.validate(), InputError);
  c = ExperimentConfig{};
  c.trials = 0;
  CHECK_THROWS_AS(c.validate(), InputError);
  c = ExperimentConfig{};
  c.noise = {0.01, -0.01};
  CHECK_THROWS_AS(c.validate(), InputError);
  c = ExperimentConfig{};
  c.dims = {3};
  CHECK_THROWS_AS(c.validate(), InputError);
  CHECK(known_algorithms().size() == 7);
}
