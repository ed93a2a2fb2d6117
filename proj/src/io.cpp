#include "gpca/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gpca/error.hpp"
#include "gpca/format.hpp"
#include "gpca/veronese.hpp"

namespace gpca::io {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',' || c == ' ' || c == '\t' || c == ';') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError(std::string("field '") + key + "' has the wrong type");
  }
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

Eigen::MatrixXd read_points(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  bool first = true;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto fields = split_fields(line);
    if (fields.empty()) continue;
    std::vector<double> row(fields.size());
    bool numeric = true;
    for (std::size_t k = 0; k < fields.size() && numeric; ++k) numeric = parse_double(fields[k], row[k]);
    if (!numeric && first) {
      first = false;
      continue;
    }
    first = false;
    if (!numeric) throw InputError("line " + std::to_string(line_no) + ": non-numeric value");
    for (double v : row)
      if (!std::isfinite(v)) throw InputError("line " + std::to_string(line_no) + ": non-finite value");
    if (!rows.empty() && row.size() != rows.front().size())
      throw InputError("line " + std::to_string(line_no) + ": expected " + std::to_string(rows.front().size()) +
                       " values, got " + std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError("points: no data rows");
  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.front().size()), static_cast<Eigen::Index>(rows.size()));
  for (std::size_t j = 0; j < rows.size(); ++j)
    for (std::size_t i = 0; i < rows[j].size(); ++i)
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[j][i];
  return x;
}

Eigen::MatrixXd read_points_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return read_points(in);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_points(std::ostream& out, const Eigen::MatrixXd& points) {
  for (Eigen::Index j = 0; j < points.cols(); ++j) {
    for (Eigen::Index i = 0; i < points.rows(); ++i) out << (i ? "," : "") << format_double(points(i, j));
    out << '\n';
  }
}

std::vector<int> read_labels(std::istream& in) {
  std::vector<int> out;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    for (const auto& f : split_fields(line.substr(0, line.find('#')))) {
      double v = 0.0;
      if (!parse_double(f, v) || v != std::floor(v))
        throw InputError("line " + std::to_string(line_no) + ": '" + f + "' is not an integer label");
      out.push_back(static_cast<int>(v));
    }
  }
  return out;
}

Dataset dataset_from_spec(const json& spec) {
  if (!spec.is_object()) throw InputError("spec: expected a JSON object");
  const auto seed = get_or<std::uint64_t>(spec, "seed", 0);
  const auto noise = get_or<double>(spec, "noise", 0.0);
  if (spec.contains("preset")) {
    const auto preset = get_or<std::string>(spec, "preset", "");
    const auto per = get_or<std::size_t>(spec, "points", 100);
    if (per == 0) throw InputError("spec: points must be positive");
    if (preset == "line_plane") return line_plane_example(per, noise, seed);
    if (preset == "two_lines_plane") return two_lines_plane_example(per, noise, seed);
    if (preset == "two_lines") return two_lines_example(per, noise, seed);
    throw InputError("spec: unknown preset '" + preset + "'");
  }
  ArrangementSpec a;
  a.ambient = get_or<unsigned>(spec, "ambient", 3);
  if (!spec.contains("dims")) throw InputError("spec: missing 'dims'");
  a.dims = get_or<std::vector<unsigned>>(spec, "dims", {});
  if (spec.contains("points") && spec.at("points").is_number_integer())
    a.points = {spec.at("points").get<std::size_t>()};
  else
    a.points = get_or<std::vector<std::size_t>>(spec, "points", {200});
  a.noise = noise;
  a.seed = seed;
  a.min_angle_deg = get_or<double>(spec, "min_angle_deg", 10.0);
  return generate(a);
}

json dataset_sidecar(const json& spec, const Dataset& data) {
  json models = json::array();
  for (const auto& m : data.models) models.push_back(model_json(m));
  return {{"version", kReportVersion},
          {"spec", spec},
          {"ambient", data.points.rows()},
          {"count", data.points.cols()},
          {"models", models},
          {"labels", data.labels}};
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw InputError("matrix: expected a non-empty list of rows");
  const std::size_t cols = j.front().size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw InputError("matrix: ragged rows");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) throw InputError("matrix: non-numeric entry");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
    }
  }
  return m;
}

json model_json(const SubspaceModel& model) {
  // Columns of the complement are the normals; stored one per row.
  return {{"dim", model.dim},
          {"normals", matrix_json(model.complement.transpose())},
          {"basis", matrix_json(model.basis().transpose())}};
}

SubspaceModel model_from_json(const json& j) {
  if (!j.is_object() || !j.contains("normals")) throw InputError("model: missing 'normals'");
  return SubspaceModel::from_complement(matrix_from_json(j.at("normals")).transpose());
}

json segmentation_json(const Segmentation& seg) {
  json models = json::array();
  std::vector<std::size_t> dims;
  for (const auto& m : seg.models) {
    models.push_back(model_json(m));
    dims.push_back(m.dim);
  }
  json residuals = json::array();
  for (Eigen::Index j = 0; j < seg.residuals.size(); ++j) residuals.push_back(number_or_null(seg.residuals(j)));
  json stages = json::array();
  for (const auto& s : seg.stages)
    stages.push_back({{"degree", s.degree},
                      {"nullity", s.nullity},
                      {"point_index", s.point_index},
                      {"point_score", number_or_null(s.point_score)},
                      {"model_dim", s.model_dim}});
  json out = {{"n", seg.degree},
              {"dims", dims},
              {"models", models},
              {"labels", seg.labels},
              {"residuals", residuals},
              {"outliers", seg.outliers()},
              {"stages", stages},
              {"warnings", seg.warnings}};
  if (!seg.stages.empty() && !seg.models.empty()) {
    const auto ambient = static_cast<unsigned>(seg.models.front().ambient());
    const std::size_t m = monomial_count(seg.degree, ambient);
    out["fit"] = {{"monomials", m}, {"nullity", seg.stages.front().nullity},
                  {"rank", m - std::min(m, seg.stages.front().nullity)}};
  }
  return out;
}

json rank_probe_json(const RankProbe& p) {
  return {{"node", p.node},           {"ell", p.ell},         {"degree", p.degree},
          {"rank", p.rank},           {"monomials", p.monomials}, {"deficient", p.deficient()},
          {"kappa", p.kappa},         {"projection", to_string(p.projection)}, {"seed", p.seed}};
}

json discovery_json(const DiscoveryReport& report) {
  json table = json::array();
  for (const auto& p : report.rank_table) table.push_back(rank_probe_json(p));
  json tree = json::array();
  for (const auto& node : report.tree) {
    json jn = {{"id", node.id},
               {"parent", node.parent ? json(*node.parent) : json(nullptr)},
               {"depth", node.depth},
               {"dim", node.dim()},
               {"count", node.points.size()},
               {"points", node.points},
               {"span", matrix_json(node.span.transpose())},
               {"split_degree", node.split_degree ? json(*node.split_degree) : json(nullptr)},
               {"split_ell", node.split_ell ? json(*node.split_ell) : json(nullptr)},
               {"children", node.children},
               {"beyond_tau", node.beyond_tau},
               {"note", node.note}};
    tree.push_back(std::move(jn));
  }
  return {{"n", report.count}, {"dims", report.dims}, {"leaves", report.leaves}, {"rank_table", table}, {"tree", tree}};
}

json equal_dim_json(const EqualDimResult& result) {
  json table = json::array();
  for (const auto& p : result.rank_table) table.push_back(rank_probe_json(p));
  return {{"n", result.count}, {"d", result.dim}, {"rank_table", table}};
}

std::string discovery_text(const DiscoveryReport& report) {
  std::ostringstream out;
  out << "subspaces: " << report.count << "\ndims:";
  for (auto d : report.dims) out << ' ' << d;
  out << "\n\nrank table (node ell degree rank/monomials projection seed)\n";
  for (const auto& p : report.rank_table)
    out << "  " << p.node << ' ' << p.ell << ' ' << p.degree << ' ' << p.rank << '/' << p.monomials
        << (p.deficient() ? " deficient " : " full ") << to_string(p.projection) << ' ' << p.seed << '\n';
  out << "\ntree\n";
  auto walk = [&](auto&& self, std::size_t id) -> void {
    const auto& node = report.tree[id];
    out << std::string(2 * (node.depth + 1), ' ') << "node " << node.id << ": " << node.points.size()
        << " points, span " << node.dim();
    if (node.split_degree) out << ", split degree " << *node.split_degree << " at l = " << *node.split_ell;
    if (!node.note.empty()) out << " (" << node.note << ")";
    out << '\n';
    for (auto c : node.children) self(self, c);
  };
  if (!report.tree.empty()) walk(walk, 0);
  return out.str();
}

ExperimentConfig experiment_config_from_json(const json& j) {
  if (!j.is_object()) throw InputError("experiment config: expected a JSON object");
  static const std::vector<std::string> keys = {"algorithms", "noise", "trials", "ambient", "dims",
                                                "points_per_subspace", "kappa", "delta", "seed", "threads",
                                                "max_iters", "tol"};
  for (const auto& [key, value] : j.items())
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw InputError("experiment config: unknown key '" + key + "'");
  ExperimentConfig c;
  c.algorithms = get_or(j, "algorithms", c.algorithms);
  c.noise = get_or(j, "noise", c.noise);
  c.trials = get_or(j, "trials", c.trials);
  c.ambient = get_or(j, "ambient", c.ambient);
  c.dims = get_or(j, "dims", c.dims);
  c.points_per_subspace = get_or(j, "points_per_subspace", c.points_per_subspace);
  c.kappa = get_or(j, "kappa", c.kappa);
  c.delta = get_or(j, "delta", c.delta);
  c.seed = get_or(j, "seed", c.seed);
  c.threads = get_or(j, "threads", c.threads);
  c.max_iters = get_or(j, "max_iters", c.max_iters);
  c.tol = get_or(j, "tol", c.tol);
  c.validate();
  return c;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
  if (!out) throw InputError("write failed for '" + path + "'");
}

}  // namespace gpca::io
