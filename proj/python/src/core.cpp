#include <optional>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gpca/baselines.hpp"
#include "gpca/discovery.hpp"
#include "gpca/error.hpp"
#include "gpca/fitting.hpp"
#include "gpca/io.hpp"
#include "gpca/segmentation.hpp"
#include "gpca/synthgen.hpp"
#include "gpca/veronese.hpp"

namespace py = pybind11;
using namespace gpca;

namespace {

// Reports cross the boundary as parsed JSON so they match the CLI documents.
py::object to_python(const io::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

io::json from_python(const py::object& o) {
  return io::json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

SegmentOptions segment_options(double kappa, double delta, bool hyperplanes) {
  SegmentOptions o = hyperplanes ? SegmentOptions::hyperplanes() : SegmentOptions{};
  o.kappa = kappa;
  o.delta = delta;
  o.rank_kappa = kappa;
  return o;
}

std::vector<SubspaceModel> models_from_python(const py::object& models) {
  std::vector<SubspaceModel> out;
  for (const auto& m : models) out.push_back(io::model_from_json(from_python(py::reinterpret_borrow<py::object>(m))));
  return out;
}

py::dict segmentation_dict(const Segmentation& seg) {
  return to_python(io::segmentation_json(seg)).cast<py::dict>();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Generalized PCA: segmentation of data drawn from a union of linear subspaces";

  auto base = py::register_exception<Error>(m, "GpcaError", PyExc_RuntimeError);
  py::register_exception<InputError>(m, "InputError", base.ptr());
  py::register_exception<DegenerateError>(m, "DegenerateError", base.ptr());
  auto fit = py::register_exception<FitError>(m, "FitError", base.ptr());
  py::register_exception<PeelError>(m, "PeelError", fit.ptr());
  py::register_exception<SelectionError>(m, "SelectionError", fit.ptr());
  py::register_exception<DiscoveryError>(m, "DiscoveryError", base.ptr());

  m.attr("DEFAULT_KAPPA") = kDefaultKappa;
  m.attr("DEFAULT_DELTA") = kDefaultDelta;

  m.def("monomial_count", &monomial_count, py::arg("degree"), py::arg("dim"));
  m.def(
      "veronese", [](const Eigen::MatrixXd& points, unsigned degree) { return embed(points, degree).matrix(); },
      py::arg("points"), py::arg("degree"), "Veronese lift of the unit-normalized columns of a D x N array.");
  m.def(
      "fit_vanishing",
      [](const Eigen::MatrixXd& points, unsigned degree, double kappa) {
        const auto f = fit_vanishing(embed(points, degree), kappa);
        return py::make_tuple(f.basis.coefficients(), f.rank.rank);
      },
      py::arg("points"), py::arg("degree"), py::arg("kappa") = kDefaultKappa,
      "Coefficients (monomials x m) of the degree-n vanishing polynomials and the rank of the embedded matrix.");

  m.def(
      "segment",
      [](const Eigen::MatrixXd& points, unsigned n, double kappa, double delta, bool hyperplanes,
         std::optional<double> outlier_level) {
        const auto o = segment_options(kappa, delta, hyperplanes);
        if (!outlier_level) return segmentation_dict(segment(points, n, o));
        OutlierOptions out;
        out.threshold = *outlier_level;
        return segmentation_dict(segment_robust(points, n, o, out));
      },
      py::arg("points"), py::arg("n"), py::arg("kappa") = kDefaultKappa, py::arg("delta") = kDefaultDelta,
      py::arg("hyperplanes") = false, py::arg("outlier_level") = py::none(),
      "Segments the columns of a D x N array into n subspaces; returns the JSON report as a dict.");

  m.def(
      "discover",
      [](const Eigen::MatrixXd& points, unsigned n_max, double kappa, double delta, double tau, std::uint64_t seed) {
        DiscoverOptions o{n_max, kappa, delta, seed, tau};
        const auto r = recursive_segment(points, o);
        auto j = io::discovery_json(r.report);
        j["segmentation"] = io::segmentation_json(r.segmentation);
        return to_python(j);
      },
      py::arg("points"), py::arg("n_max") = 4, py::arg("kappa") = kDefaultKappa, py::arg("delta") = kDefaultDelta,
      py::arg("tau") = 1e-6, py::arg("seed") = 0);
  m.def(
      "discover_equal_dim",
      [](const Eigen::MatrixXd& points, unsigned n_max, double kappa, std::uint64_t seed) {
        DiscoverOptions o;
        o.n_max = n_max;
        o.kappa = kappa;
        o.seed = seed;
        const auto r = discover_equal_dim(points, o);
        return py::make_tuple(r.count, r.dim);
      },
      py::arg("points"), py::arg("n_max") = 4, py::arg("kappa") = kDefaultKappa, py::arg("seed") = 0,
      "(n, d) for an arrangement of n subspaces of equal dimension d.");

  m.def(
      "k_subspaces",
      [](const Eigen::MatrixXd& points, unsigned n, std::vector<unsigned> dims, std::uint64_t seed,
         unsigned max_iters) {
        IterativeConfig c;
        c.seed = seed;
        c.max_iters = max_iters;
        const auto r = k_subspaces(points, n, dims, c);
        py::dict d = segmentation_dict(r.segmentation);
        d["iterations"] = r.iterations;
        d["converged"] = r.converged;
        d["objective"] = r.objective;
        return d;
      },
      py::arg("points"), py::arg("n"), py::arg("dims"), py::arg("seed") = 0, py::arg("max_iters") = 300);
  m.def(
      "em_mixture_pca",
      [](const Eigen::MatrixXd& points, unsigned n, std::vector<unsigned> dims, std::uint64_t seed,
         unsigned max_iters) {
        IterativeConfig c;
        c.seed = seed;
        c.max_iters = max_iters;
        const auto r = em_mixture_pca(points, n, dims, c);
        py::dict d = segmentation_dict(r.segmentation);
        d["iterations"] = r.iterations;
        d["converged"] = r.converged;
        d["log_likelihood"] = r.log_likelihood;
        d["responsibilities"] = r.responsibilities;
        return d;
      },
      py::arg("points"), py::arg("n"), py::arg("dims"), py::arg("seed") = 0, py::arg("max_iters") = 300);

  m.def(
      "generate",
      [](const py::object& spec) {
        const auto j = from_python(spec);
        const auto data = io::dataset_from_spec(j);
        return py::make_tuple(data.points, data.labels, to_python(io::dataset_sidecar(j, data)));
      },
      py::arg("spec"), "(points D x N, labels, sidecar) for a dataset spec dict.");

  m.def(
      "angle_error",
      [](const py::object& truth, const py::object& estimate) {
        return angle_error(models_from_python(truth), models_from_python(estimate));
      },
      py::arg("truth"), py::arg("estimate"), "Mean matched angle in degrees between two lists of model dicts.");
  m.def("classification_rate", &classification_rate, py::arg("truth"), py::arg("estimate"));
}
