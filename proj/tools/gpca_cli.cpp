// gpca: command-line front end for the library.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "gpca/baselines.hpp"
#include "gpca/discovery.hpp"
#include "gpca/error.hpp"
#include "gpca/experiment.hpp"
#include "gpca/format.hpp"
#include "gpca/io.hpp"
#include "gpca/motion.hpp"
#include "gpca/polynomial.hpp"
#include "gpca/segmentation.hpp"
#include "gpca/synthgen.hpp"

using namespace gpca;
using io::json;

namespace {

enum ExitCode { kOk = 0, kInput = 2, kFit = 3, kDiscovery = 4, kPeel = 5, kSelection = 6 };

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    io::write_text_file(path, text);
}

void emit_json(const std::string& path, const json& j) { emit(path, j.dump(2) + "\n"); }

json envelope(const std::string& command, json parameters, json result) {
  return {{"version", io::kReportVersion}, {"command", command}, {"parameters", std::move(parameters)},
          {"result", std::move(result)}};
}

Eigen::VectorXd parse_vector(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  for (std::string tok; std::getline(ss, tok, ',');) {
    double x = 0.0;
    if (!parse_double(tok, x)) throw InputError("'" + text + "' is not a comma-separated vector");
    v.push_back(x);
  }
  if (v.empty()) throw InputError("empty vector");
  return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

OutlierOptions parse_outliers(const std::string& text) {
  const auto colon = text.find(':');
  const std::string mode = text.substr(0, colon);
  OutlierOptions o;
  if (mode == "chi2")
    o.mode = OutlierMode::chi2;
  else if (mode == "percentile")
    o.mode = OutlierMode::percentile;
  else
    throw InputError("--outliers: expected chi2:<level> or percentile:<quantile>, got '" + text + "'");
  if (colon != std::string::npos && !parse_double(text.substr(colon + 1), o.threshold))
    throw InputError("--outliers: bad level in '" + text + "'");
  if (!(o.threshold > 0.0 && o.threshold < 1.0)) throw InputError("--outliers: level must lie in (0, 1)");
  return o;
}

std::vector<HomogeneousPolynomial> read_polynomial_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return read_polynomials(in);
}

struct Args {
  // shared
  std::string data, out, input, format = "json";
  double kappa = kDefaultKappa, delta = kDefaultDelta;
  std::uint64_t seed = 0;
  bool seed_given = false;
  // generate
  std::string spec, sidecar, scene;
  double noise = 0.0;
  // segment
  unsigned n = 0;
  std::string outliers;
  bool hyperplanes = false, raw = false;
  std::optional<std::size_t> max_nullity, codim;
  // discover
  unsigned n_max = 4;
  double tau = 1e-6;
  std::string mode = "recursive";
  // experiment
  std::string config;
  std::optional<unsigned> trials, threads;
  bool no_timing = false;
  // motion
  std::string layout = "tracks";
  unsigned dim = 5;
  bool no_condition = false;
  // poly
  std::string poly, point, by;
};

int cmd_generate(const Args& a) {
  if (a.out.empty()) throw InputError("generate: --out is required");
  const std::string sidecar = a.sidecar.empty() ? a.out + ".json" : a.sidecar;
  if (!a.scene.empty()) {
    json side = {{"version", io::kReportVersion}, {"scene", a.scene}, {"seed", a.seed}, {"noise", a.noise}};
    std::ostringstream body;
    if (a.scene == "translation") {
      TranslationSceneSpec s;
      s.seed = a.seed;
      s.noise_px = a.noise;
      const auto scene = translation_scene(s);
      write_correspondences(body, scene.correspondences);
      side["labels"] = scene.labels;
      json t = json::array(), e = json::array();
      for (const auto& v : scene.translations) t.push_back({v(0), v(1), v(2)});
      for (const auto& v : scene.epipoles) e.push_back({v(0), v(1), v(2)});
      side["translations"] = t;
      side["epipoles"] = e;
    } else if (a.scene == "affine") {
      AffineSceneSpec s;
      s.seed = a.seed;
      s.noise_px = a.noise;
      const auto scene = affine_scene(s);
      write_tracks(body, scene.trajectories);
      side["labels"] = scene.labels;
    } else {
      throw InputError("generate: --scene must be translation or affine");
    }
    emit(a.out, body.str());
    emit_json(sidecar, side);
    return kOk;
  }
  if (a.spec.empty()) throw InputError("generate: --spec or --scene is required");
  const json spec = io::read_json_file(a.spec);
  const Dataset data = io::dataset_from_spec(spec);
  std::ostringstream body;
  io::write_points(body, data.points);
  emit(a.out, body.str());
  emit_json(sidecar, io::dataset_sidecar(spec, data));
  return kOk;
}

int cmd_segment(const Args& a) {
  const Eigen::MatrixXd x = io::read_points_file(a.data);
  SegmentOptions o = a.hyperplanes ? SegmentOptions::hyperplanes() : SegmentOptions{};
  o.kappa = a.kappa;
  o.delta = a.delta;
  o.rank_kappa = a.kappa;
  o.normalize = !a.raw;
  if (a.max_nullity) o.max_nullity = a.max_nullity;
  if (a.codim) o.codimension = a.codim;
  json params = {{"data", a.data},     {"n", a.n},         {"kappa", a.kappa},
                 {"delta", a.delta},   {"hyperplanes", a.hyperplanes}, {"normalize", o.normalize},
                 {"outliers", a.outliers.empty() ? json(nullptr) : json(a.outliers)}};
  Segmentation seg = a.outliers.empty() ? segment(x, a.n, o) : segment_robust(x, a.n, o, parse_outliers(a.outliers));
  emit_json(a.out, envelope("segment", params, io::segmentation_json(seg)));
  return kOk;
}

int cmd_discover(const Args& a) {
  const Eigen::MatrixXd x = io::read_points_file(a.data);
  DiscoverOptions o;
  o.n_max = a.n_max;
  o.kappa = a.kappa;
  o.delta = a.delta;
  o.seed = a.seed;
  o.tau = a.tau;
  json params = {{"data", a.data}, {"mode", a.mode}, {"n_max", a.n_max}, {"kappa", a.kappa},
                 {"delta", a.delta}, {"seed", a.seed}, {"tau", a.tau}};
  if (a.mode == "recursive") {
    const auto r = recursive_segment(x, o);
    if (a.format == "text") {
      emit(a.out, io::discovery_text(r.report));
      return kOk;
    }
    json result = io::discovery_json(r.report);
    result["segmentation"] = io::segmentation_json(r.segmentation);
    emit_json(a.out, envelope("discover", params, result));
  } else if (a.mode == "equal-dim") {
    emit_json(a.out, envelope("discover", params, io::equal_dim_json(discover_equal_dim(x, o))));
  } else if (a.mode == "hyperplanes") {
    std::vector<RankProbe> table;
    const unsigned n = count_hyperplanes(x, a.n_max, a.kappa, &table);
    json t = json::array();
    for (const auto& p : table) t.push_back(io::rank_probe_json(p));
    emit_json(a.out, envelope("discover", params, {{"n", n}, {"d", x.rows() - 1}, {"rank_table", t}}));
  } else {
    throw InputError("discover: --mode must be recursive, equal-dim or hyperplanes");
  }
  return kOk;
}

int cmd_experiment(const Args& a) {
  ExperimentConfig c = a.config.empty() ? ExperimentConfig{} : io::experiment_config_from_json(io::read_json_file(a.config));
  if (a.trials) c.trials = *a.trials;
  if (a.threads) c.threads = *a.threads;
  if (a.seed_given) c.seed = a.seed;
  const auto result = run_experiment(c);
  std::ostringstream csv;
  write_experiment_csv(csv, result, !a.no_timing);
  emit(a.out, csv.str());
  return kOk;
}

int cmd_motion(const Args& a) {
  std::ifstream in(a.input);
  if (!in) throw InputError("cannot open '" + a.input + "'");
  json params = {{"input", a.input}, {"mode", a.mode}, {"n", a.n}, {"kappa", a.kappa}, {"delta", a.delta}};
  if (a.mode == "epipolar") {
    const auto corr = read_correspondences(in);
    TranslationOptions o;
    o.kappa = a.kappa;
    o.delta = a.delta;
    o.normalize_image = !a.no_condition;
    params["normalize_image"] = o.normalize_image;
    const auto r = segment_translations(corr, a.n, o);
    json result = io::segmentation_json(r.segmentation);
    json e = json::array();
    for (const auto& v : r.epipoles) e.push_back({v(0), v(1), v(2)});
    result["epipoles"] = e;
    result["excluded"] = r.excluded;
    emit_json(a.out, envelope("motion", params, result));
  } else if (a.mode == "affine") {
    TrajectoryMatrix w;
    if (a.layout == "tracks")
      w = read_tracks(in);
    else if (a.layout == "frame-major")
      w = import_frame_major(in);
    else
      throw InputError("motion: --layout must be tracks or frame-major");
    SegmentOptions o;
    o.kappa = a.kappa;
    o.delta = a.delta;
    o.rank_kappa = a.kappa;
    params["layout"] = a.layout;
    params["dim"] = a.dim;
    const auto r = segment_affine(w, a.n, o, a.dim);
    json result = io::segmentation_json(r.segmentation);
    const Eigen::VectorXd s = w.singular_values();
    result["singular_values"] = std::vector<double>(s.data(), s.data() + s.size());
    result["frames"] = w.frames;
    emit_json(a.out, envelope("motion", params, result));
  } else {
    throw InputError("motion: --mode must be epipolar or affine");
  }
  return kOk;
}

int cmd_poly(const std::string& action, const Args& a) {
  if (action == "fit") {
    if (a.n == 0) throw InputError("fit: --n (degree) must be positive");
    const Eigen::MatrixXd x = io::read_points_file(a.data);
    const auto basis = vanishing_basis(embed(x, a.n), a.kappa);
    std::vector<HomogeneousPolynomial> polys;
    for (std::size_t k = 0; k < basis.size(); ++k) polys.push_back(basis.polynomial(k));
    std::ostringstream out;
    write_polynomials(out, polys);
    emit(a.out, out.str());
    return kOk;
  }
  const auto polys = read_polynomial_file(a.poly);
  std::ostringstream out;
  if (action == "eval") {
    const Eigen::VectorXd x = parse_vector(a.point);
    for (const auto& p : polys) {
      if (static_cast<Eigen::Index>(p.dim()) != x.size()) throw InputError("eval: point dimension mismatch");
      const Eigen::VectorXd g = gradient(p, x);
      out << "value " << format_double(evaluate(p, x)) << " gradient";
      for (Eigen::Index i = 0; i < g.size(); ++i) out << ' ' << format_double(g(i));
      out << '\n';
    }
  } else if (action == "divide") {
    const Eigen::VectorXd b = parse_vector(a.by);
    std::vector<HomogeneousPolynomial> quotients;
    for (const auto& p : polys) {
      if (static_cast<Eigen::Index>(p.dim()) != b.size()) throw InputError("divide: divisor dimension mismatch");
      auto r = divide_by_linear(p, b);
      std::cerr << "residual " << format_double(r.residual) << (r.exact(p) ? " exact" : " inexact") << '\n';
      quotients.push_back(std::move(r.quotient));
    }
    write_polynomials(out, quotients);
  }
  emit(a.out, out.str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized PCA: segmentation of data drawn from a union of linear subspaces"};
  app.require_subcommand(1);
  Args a;

  auto* gen = app.add_subcommand("generate", "write a synthetic dataset (CSV + JSON sidecar)");
  gen->add_option("--spec", a.spec, "arrangement spec JSON");
  gen->add_option("--scene", a.scene, "motion scene instead of a spec: translation | affine");
  gen->add_option("--seed", a.seed, "scene seed");
  gen->add_option("--noise", a.noise, "scene noise in pixels");
  gen->add_option("--out", a.out, "output data file")->required();
  gen->add_option("--sidecar", a.sidecar, "sidecar path (default: <out>.json)");

  auto* seg = app.add_subcommand("segment", "segment points into n subspaces");
  seg->add_option("--data", a.data, "points CSV, one point per row")->required();
  seg->add_option("-n,--n", a.n, "number of subspaces")->required()->check(CLI::PositiveNumber);
  seg->add_option("--kappa", a.kappa, "model-selection tolerance")->check(CLI::PositiveNumber);
  seg->add_option("--delta", a.delta, "point-selection regularizer")->check(CLI::NonNegativeNumber);
  seg->add_option("--outliers", a.outliers, "chi2:<level> or percentile:<quantile>");
  seg->add_flag("--hyperplanes", a.hyperplanes, "one normal per subspace");
  seg->add_flag("--raw", a.raw, "do not scale points to unit norm before fitting");
  seg->add_option("--max-nullity", a.max_nullity, "cap on the number of vanishing polynomials");
  seg->add_option("--codim", a.codim, "fixed codimension of every subspace");
  seg->add_option("--out", a.out, "report path (default: stdout)");

  auto* disc = app.add_subcommand("discover", "find the number and dimensions of the subspaces");
  disc->add_option("--data", a.data, "points CSV")->required();
  disc->add_option("--mode", a.mode, "recursive | equal-dim | hyperplanes");
  disc->add_option("--n-max", a.n_max, "largest number of subspaces tried")->check(CLI::PositiveNumber);
  disc->add_option("--kappa", a.kappa, "model-selection tolerance")->check(CLI::PositiveNumber);
  disc->add_option("--delta", a.delta, "point-selection regularizer")->check(CLI::NonNegativeNumber);
  disc->add_option("--tau", a.tau, "membership tolerance")->check(CLI::PositiveNumber);
  disc->add_option("--seed", a.seed, "projection seed");
  disc->add_option("--format", a.format, "json | text");
  disc->add_option("--out", a.out, "report path (default: stdout)");

  auto* exp = app.add_subcommand("experiment", "run a noise sweep and write per-trial CSV");
  exp->add_option("--config", a.config, "experiment config JSON");
  exp->add_option("--trials", a.trials, "override the trial count");
  exp->add_option("--threads", a.threads, "worker threads (0: all cores)");
  exp->add_option("--seed", a.seed, "override the base seed");
  exp->add_flag("--no-timing", a.no_timing, "omit wall-time columns");
  exp->add_option("--out", a.out, "CSV path (default: stdout)");

  auto* mot = app.add_subcommand("motion", "segment motions from correspondences or tracks");
  mot->add_option("--mode", a.mode, "epipolar | affine")->required();
  mot->add_option("--input", a.input, "correspondence CSV or track file")->required();
  mot->add_option("-n,--n", a.n, "number of motions")->required()->check(CLI::PositiveNumber);
  mot->add_option("--layout", a.layout, "affine input layout: tracks | frame-major");
  mot->add_option("--dim", a.dim, "projection dimension for affine mode");
  mot->add_option("--kappa", a.kappa, "model-selection tolerance")->check(CLI::PositiveNumber);
  mot->add_option("--delta", a.delta, "point-selection regularizer")->check(CLI::NonNegativeNumber);
  mot->add_flag("--no-condition", a.no_condition, "form epipolar lines from raw pixel coordinates");
  mot->add_option("--out", a.out, "report path (default: stdout)");

  auto* poly = app.add_subcommand("poly", "fit, evaluate or divide homogeneous polynomials");
  std::string action;
  poly->add_option("action", action, "fit | eval | divide")->required()->check(CLI::IsMember({"fit", "eval", "divide"}));
  poly->add_option("--data", a.data, "points CSV (fit)");
  poly->add_option("-n,--n", a.n, "degree (fit)");
  poly->add_option("--kappa", a.kappa, "model-selection tolerance (fit)");
  poly->add_option("--poly", a.poly, "polynomial file (eval, divide)");
  poly->add_option("--point", a.point, "x as comma-separated values (eval)");
  poly->add_option("--by", a.by, "linear form b as comma-separated values (divide)");
  poly->add_option("--out", a.out, "output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }
  a.seed_given = exp->count("--seed") > 0;

  // Errors carry their stage name; each family gets its own exit code.
  try {
    if (*gen) return cmd_generate(a);
    if (*seg) return cmd_segment(a);
    if (*disc) return cmd_discover(a);
    if (*exp) return cmd_experiment(a);
    if (*mot) return cmd_motion(a);
    if (*poly) return cmd_poly(action, a);
  } catch (const PeelError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kPeel;
  } catch (const SelectionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSelection;
  } catch (const FitError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFit;
  } catch (const DegenerateError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFit;
  } catch (const DiscoveryError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDiscovery;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kOk;
}
