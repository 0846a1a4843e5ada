#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "opmetric/corpus.hpp"
#include "opmetric/criteria.hpp"
#include "opmetric/errors.hpp"
#include "opmetric/formulas.hpp"
#include "opmetric/gadgets.hpp"
#include "opmetric/report.hpp"
#include "opmetric/space_io.hpp"

namespace py = pybind11;
using namespace opmetric;

namespace {

py::object to_python(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

SearchConfig make_config(std::optional<double> tolerance, std::optional<int> levels, std::optional<double> radius,
                         std::optional<int> restarts, std::optional<std::uint64_t> seed, int threads) {
  SearchConfig cfg;
  if (tolerance) cfg.tolerance = *tolerance;
  if (levels) cfg.max_level = *levels;
  if (radius) cfg.radius = *radius;
  if (restarts) cfg.restarts = *restarts;
  if (seed) cfg.seed = *seed;
  cfg.threads = threads;
  cfg.validate();
  return cfg;
}

LevelElement grid_from(const SpaceRep& space, const CVec& coeffs, int level) {
  return LevelElement(level, level, space.dim(), coeffs);
}

}  // namespace

PYBIND11_MODULE(_opmetric, m) {
  m.doc() = "Metric characterization checks for concrete operator spaces";
  m.attr("__version__") = kToolVersion;

  auto& base = py::register_exception<Error>(m, "OpmetricError");
  py::register_exception<InvalidInput>(m, "InvalidInput", base.ptr());
  py::register_exception<ShapeError>(m, "ShapeError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<RankDeficient>(m, "RankDeficient", base.ptr());
  py::register_exception<UnsupportedLevel>(m, "UnsupportedLevel", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

  py::class_<SpaceRep>(m, "Space")
      .def_property_readonly("p", &SpaceRep::p)
      .def_property_readonly("q", &SpaceRep::q)
      .def_property_readonly("dim", &SpaceRep::dim)
      .def_property_readonly("embedded", &SpaceRep::embedded)
      .def_property_readonly("unit", &SpaceRep::unit)
      .def("realize", py::overload_cast<const CVec&>(&SpaceRep::realize, py::const_), py::arg("coeffs"))
      .def(
          "norm", [](const SpaceRep& s, const CVec& c, int level) { return s.norm(grid_from(s, c, level)); },
          py::arg("coeffs"), py::arg("level") = 1,
          "Norm of a level-n element given as n*n*dim coefficients, cell-major.")
      .def("membership_residual", &SpaceRep::membership_residual, py::arg("m"))
      .def("with_unit", &SpaceRep::with_unit, py::arg("unit"))
      .def("to_json", [](const SpaceRep& s) { return space_to_json(s).dump(); });

  m.def(
      "load_space", [](const std::string& doc, double rank_tol) { return load_space(doc, rank_tol); },
      py::arg("document"), py::arg("rank_tol") = kDefaultRankTolerance);
  m.def("load_space_file", &load_space_file, py::arg("path"), py::arg("rank_tol") = kDefaultRankTolerance);

  m.def("op_norm", &op_norm, py::arg("m"));
  m.def("trace_norm", &trace_norm, py::arg("m"));
  m.def(
      "t_gadget",
      [](const SpaceRep& s, const CVec& v, const CVec& x, int level) {
        return gadgets::build_t(s, v, grid_from(s, x, level));
      },
      py::arg("space"), py::arg("v"), py::arg("x"), py::arg("level") = 1);

  m.def("catalog", &criteria::catalog);

  m.def(
      "check",
      [](const std::string& criterion, const SpaceRep& space, std::optional<CVec> unit, std::optional<CVec> x,
         std::optional<CVec> z, std::optional<CMat> w, const std::string& side, std::optional<CMat> map,
         std::optional<double> tolerance, std::optional<int> levels, std::optional<double> radius,
         std::optional<int> restarts, std::optional<std::uint64_t> seed, int threads) {
        criteria::Operands ops;
        ops.unit = std::move(unit);
        ops.x = std::move(x);
        ops.z = std::move(z);
        ops.w = std::move(w);
        ops.map = std::move(map);
        ops.side = criteria::multiplier_side_from_string(side);
        const SearchConfig cfg = make_config(tolerance, levels, radius, restarts, seed, threads);
        CheckReport r;
        {
          py::gil_scoped_release release;
          r = criteria::run_criterion(criterion, space, ops, cfg);
        }
        return to_python(report_to_json(r));
      },
      py::arg("criterion"), py::arg("space"), py::kw_only(), py::arg("unit") = py::none(), py::arg("x") = py::none(),
      py::arg("z") = py::none(), py::arg("w") = py::none(), py::arg("side") = "left", py::arg("map") = py::none(),
      py::arg("tolerance") = py::none(), py::arg("levels") = py::none(), py::arg("radius") = py::none(),
      py::arg("restarts") = py::none(), py::arg("seed") = py::none(), py::arg("threads") = 0,
      "Runs one criterion and returns the report as a dict.");

  m.def(
      "verify_formulas",
      [](std::optional<int> trials, std::uint64_t seed) {
        formulas::Options opt;
        opt.trials = trials;
        opt.seed = seed;
        return to_python(formulas::to_json(formulas::run_all(opt), opt));
      },
      py::arg("trials") = py::none(), py::arg("seed") = kDefaultSeed);

  m.def("corpus_names", [] {
    std::vector<std::string> names;
    for (const auto& e : corpus::default_corpus()) names.push_back(e.name);
    return names;
  });

  m.def(
      "run_corpus",
      [](const std::vector<std::string>& only, std::optional<int> restarts, std::optional<std::uint64_t> seed,
         int threads) {
        const SearchConfig cfg = make_config(std::nullopt, std::nullopt, std::nullopt, restarts, seed, threads);
        corpus::CorpusRun run;
        {
          py::gil_scoped_release release;
          run = corpus::run_corpus(corpus::default_corpus(), cfg, only);
        }
        return to_python(corpus::run_to_json(run, cfg));
      },
      py::arg("only") = std::vector<std::string>{}, py::arg("restarts") = py::none(), py::arg("seed") = py::none(),
      py::arg("threads") = 0);
}
