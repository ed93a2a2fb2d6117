#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "gpca/discovery.hpp"
#include "gpca/experiment.hpp"
#include "gpca/motion.hpp"
#include "gpca/segmentation.hpp"
#include "gpca/synthgen.hpp"

namespace gpca::io {

using nlohmann::json;

inline constexpr int kReportVersion = 1;

/// One point per row, comma or whitespace separated; '#' comments, blank lines and
/// a non-numeric first row are skipped. Returns D x N.
Eigen::MatrixXd read_points(std::istream& in);
Eigen::MatrixXd read_points_file(const std::string& path);
/// Shortest round-trip decimal for every value.
void write_points(std::ostream& out, const Eigen::MatrixXd& points);

std::vector<int> read_labels(std::istream& in);

/// {"ambient", "dims", "points", "noise", "seed", "min_angle_deg"} or
/// {"preset": "line_plane" | "two_lines_plane" | "two_lines", "points", "noise", "seed"}.
Dataset dataset_from_spec(const json& spec);
json dataset_sidecar(const json& spec, const Dataset& data);

json matrix_json(const Eigen::MatrixXd& m);  // list of rows
Eigen::MatrixXd matrix_from_json(const json& j);

json model_json(const SubspaceModel& model);
SubspaceModel model_from_json(const json& j);

json segmentation_json(const Segmentation& seg);
json discovery_json(const DiscoveryReport& report);
json equal_dim_json(const EqualDimResult& result);
json rank_probe_json(const RankProbe& probe);

/// Plain-text rendering of a discovery report: rank table and indented tree.
std::string discovery_text(const DiscoveryReport& report);

/// Keys mirror ExperimentConfig; unknown keys are rejected.
ExperimentConfig experiment_config_from_json(const json& j);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace gpca::io
