#include <optional>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mmspace/bishop_gromov.hpp"
#include "mmspace/comparison.hpp"
#include "mmspace/cut_points.hpp"
#include "mmspace/dimension.hpp"
#include "mmspace/errors.hpp"
#include "mmspace/poincare.hpp"
#include "mmspace/report.hpp"
#include "mmspace/run.hpp"
#include "mmspace/space_io.hpp"
#include "mmspace/suite.hpp"
#include "mmspace/zoo.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

py::object to_py(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

mms::VertexId point_of(const mms::DiscreteSpace& space, const std::string& name) {
  const auto& meta = space.meta();
  if (meta.contains("points") && meta["points"].contains(name)) return mms::named_point(space, name);
  return space.index_of(name);
}

mms::SamplingPlan plan_with(std::uint64_t seed) {
  mms::SamplingPlan plan;
  plan.seed = seed;
  return plan;
}

double dimension_or_default(const mms::DiscreteSpace& space, std::optional<double> n) {
  return n ? *n : mms::default_dimension(space);
}

}  // namespace

PYBIND11_MODULE(_mmspace, m) {
  m.doc() = "Discrete metric measure spaces: comparison checks, cut points, Poincare and dimension estimates";
  m.attr("__version__") = mms::kToolVersion;

  auto base = py::register_exception<mms::Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<mms::ParameterError>(m, "ParameterError", base.ptr());
  py::register_exception<mms::DomainError>(m, "DomainError", base.ptr());
  py::register_exception<mms::SpaceError>(m, "SpaceError", base.ptr());
  py::register_exception<mms::ParseError>(m, "ParseError", base.ptr());
  py::register_exception<mms::BudgetError>(m, "BudgetError", base.ptr());

  py::class_<mms::DiscreteSpace>(m, "Space")
      .def_static("from_source", [](const std::string& src) { return mms::load_source(src).space; },
                  py::arg("source"), "zoo:NAME?key=value&... or a space file path")
      .def_static("from_text", &mms::from_space_text, py::arg("text"))
      .def_property_readonly("size", &mms::DiscreteSpace::size)
      .def_property_readonly("mesh", &mms::DiscreteSpace::mesh)
      .def_property_readonly("tau", &mms::DiscreteSpace::tau)
      .def_property_readonly("total_measure", &mms::DiscreteSpace::total_measure)
      .def_property_readonly("meta", [](const mms::DiscreteSpace& s) { return to_py(s.meta()); })
      .def("ids",
           [](const mms::DiscreteSpace& s) {
             std::vector<std::string> out;
             for (const auto& v : s.vertices()) out.push_back(v.id);
             return out;
           })
      .def("point", [](const mms::DiscreteSpace& s, const std::string& name) { return s.vertex(point_of(s, name)).id; },
           py::arg("name"), "Vertex id of a named point (or the id itself)")
      .def("distance",
           [](const mms::DiscreteSpace& s, const std::string& a, const std::string& b) {
             return s.distance(point_of(s, a), point_of(s, b));
           })
      .def("eccentricity", [](const mms::DiscreteSpace& s, const std::string& a) { return s.eccentricity(point_of(s, a)); })
      .def("rescale", &mms::rescale, py::arg("a"), py::arg("b"))
      .def("to_text", &mms::to_space_text)
      .def("save", [](const mms::DiscreteSpace& s, const std::string& path) { mms::save_space(s, path); })
      .def("__len__", &mms::DiscreteSpace::size);

  m.def("zoo_families", &mms::zoo_families);
  m.def("gamma", &mms::gamma_fn, py::arg("s"));
  m.def("unit_ball_volume", &mms::unit_ball_volume, py::arg("s"));
  m.def("volume", [](double k, double n, double r1, double r2) { return mms::volume(k, n, r1, r2).value; },
        py::arg("k"), py::arg("n"), py::arg("r1"), py::arg("r2"));
  m.def("delta_threshold", &mms::delta_threshold, py::arg("k"), py::arg("n"), py::arg("C"), py::arg("R"));

  m.def(
      "check_bg",
      [](const mms::DiscreteSpace& s, double k, std::optional<double> n, double C, std::uint64_t seed) {
        return to_py(mms::report_json(s, mms::check_bg(s, k, dimension_or_default(s, n), C, plan_with(seed))));
      },
      py::arg("space"), py::arg("k") = 0.0, py::arg("n") = py::none(), py::arg("C") = 1.0, py::arg("seed") = 1);
  m.def(
      "estimate_min_c",
      [](const mms::DiscreteSpace& s, double k, std::optional<double> n, std::uint64_t seed) {
        return to_py(mms::report_json(s, mms::estimate_min_c(s, k, dimension_or_default(s, n), plan_with(seed))));
      },
      py::arg("space"), py::arg("k") = 0.0, py::arg("n") = py::none(), py::arg("seed") = 1);

  m.def(
      "cut_profile",
      [](const mms::DiscreteSpace& s, const std::string& point, std::vector<double> radii) {
        auto x = point_of(s, point);
        if (radii.empty()) radii = mms::default_radius_grid(s, x);
        return to_py(mms::report_json(s, mms::cut_profile(s, x, radii)));
      },
      py::arg("space"), py::arg("point"), py::arg("radii") = std::vector<double>{});
  m.def(
      "find_local_cut_points",
      [](const mms::DiscreteSpace& s) {
        json out = json::array();
        for (const auto& p : mms::find_local_cut_points(s)) out.push_back(mms::report_json(s, p));
        return to_py(out);
      },
      py::arg("space"));
  m.def(
      "is_r_cut_point",
      [](const mms::DiscreteSpace& s, const std::string& point, double r) {
        return to_py(mms::report_json(s, mms::is_r_cut_point(s, point_of(s, point), r)));
      },
      py::arg("space"), py::arg("point"), py::arg("r"));
  m.def(
      "ends_at_scale",
      [](const mms::DiscreteSpace& s, const std::string& point, double R) {
        return mms::ends_at_scale(s, point_of(s, point), R);
      },
      py::arg("space"), py::arg("point"), py::arg("R"));
  m.def(
      "diam_check",
      [](const mms::DiscreteSpace& s, const std::string& point, double r, double k, std::optional<double> n,
         double C) {
        return to_py(mms::report_json(s, mms::diam_check(s, point_of(s, point), r, k, dimension_or_default(s, n), C)));
      },
      py::arg("space"), py::arg("point"), py::arg("r"), py::arg("k") = 0.0, py::arg("n") = py::none(),
      py::arg("C") = 1.0);

  m.def(
      "estimate_cp",
      [](const mms::DiscreteSpace& s, double p, double R, std::vector<std::string> families,
         std::optional<std::string> point, std::vector<double> radii, std::uint64_t seed) {
        std::vector<mms::TestFamily> fams;
        for (const auto& f : families) fams.push_back(mms::test_family_from_string(f));
        if (fams.empty()) fams = {mms::TestFamily::distance, mms::TestFamily::u_N};
        mms::PoincareSample sample;
        sample.seed = seed;
        sample.radii = std::move(radii);
        if (point) {
          sample.centers = {point_of(s, *point)};
          sample.center_count = 0;
        }
        return to_py(mms::report_json(s, mms::estimate_CP(s, p, R, fams, sample)));
      },
      py::arg("space"), py::arg("p"), py::arg("R"), py::arg("families") = std::vector<std::string>{},
      py::arg("point") = py::none(), py::arg("radii") = std::vector<double>{}, py::arg("seed") = 1);
  m.def(
      "volume_decay_exponent",
      [](const mms::DiscreteSpace& s, const std::string& point, std::vector<double> radii) {
        return to_py(mms::report_json(mms::volume_decay_exponent(s, point_of(s, point), std::move(radii))));
      },
      py::arg("space"), py::arg("point"), py::arg("radii") = std::vector<double>{});

  m.def(
      "dimension_estimate",
      [](const mms::DiscreteSpace& s, std::vector<double> grid, std::uint64_t seed) {
        return to_py(mms::report_json(mms::dimension_estimate(s, std::move(grid), seed)));
      },
      py::arg("space"), py::arg("grid") = std::vector<double>{}, py::arg("seed") = 1);
  m.def("covering_number", &mms::covering_number, py::arg("space"), py::arg("delta"), py::arg("seed") = 1);
  m.def(
      "gh_distance",
      [](const mms::DiscreteSpace& X, const mms::DiscreteSpace& Y, std::size_t budget, bool heuristic) {
        mms::GHOptions o;
        o.budget = budget;
        o.allow_heuristic = heuristic;
        return to_py(mms::report_json(X, Y, mms::gh_distance_small(X, Y, o)));
      },
      py::arg("X"), py::arg("Y"), py::arg("budget") = 36, py::arg("heuristic") = false);

  m.def(
      "run",
      [](const std::string& command, const std::string& space, py::kwargs kwargs) {
        mms::RunConfig cfg;
        cfg.command = command;
        cfg.space = space;
        for (auto [key, value] : kwargs) {
          std::string k = py::str(key);
          if (k == "other") cfg.other_space = value.cast<std::string>();
          else if (k == "k") cfg.k = value.cast<double>();
          else if (k == "n") cfg.n = value.cast<double>();
          else if (k == "C") cfg.C = value.cast<double>();
          else if (k == "p") cfg.p = value.cast<double>();
          else if (k == "R") cfg.R = value.cast<double>();
          else if (k == "radii") cfg.radii = value.cast<std::vector<double>>();
          else if (k == "point") cfg.point = value.cast<std::string>();
          else if (k == "seed") cfg.seed = value.cast<std::uint64_t>();
          else if (k == "families") cfg.families = value.cast<std::vector<std::string>>();
          else if (k == "out") cfg.out = value.cast<std::string>();
          else if (k == "budget") cfg.budget = value.cast<std::size_t>();
          else if (k == "heuristic") cfg.heuristic = value.cast<bool>();
          else throw py::value_error("unknown option '" + k + "'");
        }
        mms::RunOutcome outcome;
        {
          py::gil_scoped_release release;
          outcome = mms::run(cfg);
        }
        return py::make_tuple(outcome.status, to_py(outcome.envelope));
      },
      py::arg("command"), py::arg("space"),
      "Same as the command-line tool; returns (exit_status, report)");
}
