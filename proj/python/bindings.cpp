#include "scenario.hpp"

#include "equinox/cone.hpp"
#include "equinox/convex_body.hpp"
#include "equinox/crossing.hpp"
#include "equinox/equilibrium.hpp"
#include "equinox/error.hpp"
#include "equinox/fixed_point.hpp"
#include "equinox/preferences.hpp"
#include "equinox/price_polytope.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

using namespace equinox;
namespace eq = equinox::equilibrium;
namespace geo = equinox::geometry;
namespace pref = equinox::preferences;

py::dict solver_dict(const cli::SolverSettings& s) {
  return py::dict("epsilon"_a = s.epsilon, "seed"_a = s.seed, "max_refine"_a = s.max_refine,
                  "verify_tol"_a = s.verify_tol);
}

cli::json parse_text(const std::string& text) {
  try {
    return cli::json::parse(text);
  } catch (const cli::json::exception& e) {
    throw Error(Errc::schema, e.what());
  }
}

}  // namespace

PYBIND11_MODULE(_equinox, m) {
  m.doc() = "Approximate competitive equilibria of convex production economies";

  static py::exception<Error> error_type(m, "EquinoxError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const py::object cls = error_type;
      py::object exc = cls(e.what());
      exc.attr("code") = std::string(to_string(e.code()));
      exc.attr("detail") = e.detail();
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  py::class_<geo::ConvexBody>(m, "ConvexBody")
      .def_static("box", &geo::ConvexBody::box, "lower"_a, "upper"_a)
      .def_static("ball", &geo::ConvexBody::ball, "center"_a, "radius"_a)
      .def_static("vpolytope", &geo::ConvexBody::vpolytope, "vertices"_a)
      .def_property_readonly("dimension", &geo::ConvexBody::dimension)
      .def("contains", &geo::ConvexBody::contains, "x"_a, "band"_a = kBoundaryBand)
      .def("project", &geo::ConvexBody::project, "x"_a)
      .def("distance", &geo::ConvexBody::distance, "x"_a)
      .def("interior_radius", &geo::ConvexBody::interior_radius, "x"_a);

  py::class_<geo::FiniteCone>(m, "FiniteCone")
      .def(py::init<std::vector<Vector>>(), "generators"_a)
      .def_property_readonly("dimension", &geo::FiniteCone::dimension)
      .def_property_readonly("generators", &geo::FiniteCone::generators)
      .def("project", &geo::FiniteCone::project, "x"_a)
      .def("distance", &geo::FiniteCone::distance, "x"_a)
      .def("contains", &geo::FiniteCone::contains, "x"_a, "band"_a = kBoundaryBand)
      .def("interior_radius", &geo::FiniteCone::interior_radius, "x"_a);

  py::class_<geo::PricePolytope>(m, "PricePolytope")
      .def(py::init([](const geo::FiniteCone& cone, const Vector& xi_bar) { return geo::price_polytope(cone, xi_bar); }),
           "cone"_a, "xi_bar"_a)
      .def_property_readonly("vertices", &geo::PricePolytope::vertices)
      .def_property_readonly("normalizer", &geo::PricePolytope::normalizer)
      .def_property_readonly("norm_bound", &geo::PricePolytope::norm_bound)
      .def_property_readonly("m_constant", &geo::PricePolytope::m_constant)
      .def("max_vertex_norm", &geo::PricePolytope::max_vertex_norm)
      .def("contains", &geo::PricePolytope::contains, "p"_a, "tol"_a = 1e-7);

  m.def(
      "boundary_crossing",
      [](const geo::FiniteCone& cone, double radius, const Vector& xi, const Vector& z) {
        const auto c = geo::boundary_crossing(geo::ClippedCone(cone, radius), xi, z);
        return py::make_tuple(c.point, c.t);
      },
      "cone"_a, "radius"_a, "xi"_a, "z"_a,
      "Where the segment from xi to z leaves the cone clipped to the ball of the given radius; returns (point, t).");
  m.def("crossing_modulus", &geo::crossing_modulus, "outer_radius"_a, "inner_radius"_a, "delta"_a);

  py::class_<pref::Preference>(m, "Preference")
      .def(py::init<geo::ConvexBody, Vector, std::optional<Matrix>>(), "consumption_set"_a, "bliss_point"_a,
           "q"_a = std::nullopt)
      .def_property_readonly("consumption_set", &pref::Preference::consumption_set)
      .def_property_readonly("bliss_point", &pref::Preference::bliss_point)
      .def_property_readonly("q", &pref::Preference::q)
      .def("utility", &pref::Preference::utility, "x"_a)
      .def("rotundity_delta", [](const pref::Preference& p, double eps) { return pref::rotundity_delta(p, eps); },
           "eps"_a);

  m.def(
      "demand", [](const pref::Preference& p, const Vector& price, double tol) { return pref::demand(p, price, tol); },
      "preference"_a, "price"_a, "tol"_a = 1e-6, py::call_guard<py::gil_scoped_release>());

  py::class_<eq::Economy>(m, "Economy")
      .def(py::init<std::vector<pref::Preference>, geo::FiniteCone, std::optional<std::vector<Vector>>>(),
           "consumers"_a, "production"_a, "interior_points"_a = std::nullopt)
      .def_property_readonly("dimension", &eq::Economy::dimension)
      .def_property_readonly("consumers", &eq::Economy::consumers)
      .def_property_readonly("production", &eq::Economy::production)
      .def_property_readonly("interior_points", &eq::Economy::interior_points);

  py::class_<eq::InteriorWitness>(m, "InteriorWitness")
      .def_readonly("point", &eq::InteriorWitness::point)
      .def_readonly("radius", &eq::InteriorWitness::radius);

  py::class_<eq::ValidationReport>(m, "ValidationReport")
      .def_property_readonly("ok", &eq::ValidationReport::ok)
      .def_readonly("pointed", &eq::ValidationReport::pointed)
      .def_readonly("pointedness_certificate", &eq::ValidationReport::pointedness_certificate)
      .def_readonly("interior_ok", &eq::ValidationReport::interior_ok)
      .def_readonly("witnesses", &eq::ValidationReport::witnesses)
      .def_readonly("nonsatiation_pass", &eq::ValidationReport::nonsatiation_pass)
      .def_readonly("nonsatiation_fail", &eq::ValidationReport::nonsatiation_fail)
      .def_readonly("nonsatiation_vacuous", &eq::ValidationReport::nonsatiation_vacuous)
      .def_readonly("notes", &eq::ValidationReport::notes);

  py::class_<eq::Metrics>(m, "Metrics")
      .def_readonly("p_dot_eta", &eq::Metrics::p_dot_eta)
      .def_readonly("dist_eta_to_y", &eq::Metrics::dist_eta_to_y)
      .def_readonly("budget_residuals", &eq::Metrics::budget_residuals);

  py::class_<eq::ApproximateEquilibrium>(m, "ApproximateEquilibrium")
      .def_readonly("price", &eq::ApproximateEquilibrium::price)
      .def_readonly("allocations", &eq::ApproximateEquilibrium::allocations)
      .def_readonly("eta", &eq::ApproximateEquilibrium::eta)
      .def_readonly("zeta", &eq::ApproximateEquilibrium::zeta)
      .def_readonly("xi_bar", &eq::ApproximateEquilibrium::xi_bar)
      .def_readonly("t", &eq::ApproximateEquilibrium::t)
      .def_readonly("epsilon", &eq::ApproximateEquilibrium::epsilon)
      .def_readonly("delta", &eq::ApproximateEquilibrium::delta)
      .def_readonly("m_const", &eq::ApproximateEquilibrium::m_const)
      .def_readonly("demand_tol", &eq::ApproximateEquilibrium::demand_tol)
      .def_readonly("metrics", &eq::ApproximateEquilibrium::metrics)
      .def("to_json", [](const eq::ApproximateEquilibrium& e) { return cli::dump(cli::to_json(e)); })
      .def_static(
          "from_json", [](const std::string& text) { return cli::certificate_from_json(parse_text(text)); },
          "text"_a);

  py::class_<eq::Clause>(m, "Clause")
      .def_readonly("name", &eq::Clause::name)
      .def_readonly("passed", &eq::Clause::pass)
      .def_readonly("detail", &eq::Clause::detail);

  py::class_<eq::CheckReport>(m, "CheckReport")
      .def_property_readonly("ok", &eq::CheckReport::ok)
      .def_readonly("clauses", &eq::CheckReport::clauses);

  py::class_<eq::RefineSequence>(m, "RefineSequence")
      .def_readonly("stages", &eq::RefineSequence::stages)
      .def_readonly("price_steps", &eq::RefineSequence::price_steps)
      .def_readonly("error", &eq::RefineSequence::error);

  m.def("validate_economy", &eq::validate_economy, "economy"_a, "seed"_a = 0,
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "solve",
      [](const eq::Economy& econ, double epsilon, std::uint64_t seed, int max_refine, double verify_tol) {
        return eq::solve(econ, eq::SolveOptions{epsilon, seed, max_refine, verify_tol});
      },
      "economy"_a, "epsilon"_a = 0.01, "seed"_a = 0, "max_refine"_a = 12, "verify_tol"_a = 1e-7,
      py::call_guard<py::gil_scoped_release>());
  m.def("check_equilibrium", &eq::check_equilibrium, "economy"_a, "candidate"_a, "seed"_a = 0,
        py::call_guard<py::gil_scoped_release>());
  m.def("refine_sequence", &eq::refine_sequence, "economy"_a, "eps0"_a, "k"_a, "seed"_a = 0,
        py::call_guard<py::gil_scoped_release>());

  m.def(
      "approximate_zero",
      [](const std::function<double(double)>& f, double eps, std::optional<long> grid) {
        const auto z = fixed_point::approximate_zero(f, eps, grid);
        return py::make_tuple(z.x, z.value);
      },
      "f"_a, "eps"_a, "grid"_a = std::nullopt, "Returns (x, f(x)) with |f(x)| <= eps for f(0) < 0 < f(1).");

  m.def(
      "load_scenario",
      [](const std::string& path) {
        const auto sc = cli::load_scenario(path);
        return py::make_tuple(sc.economy, solver_dict(sc.solver));
      },
      "path"_a, "Returns (economy, solver settings) from a scenario file.");
  m.def(
      "parse_scenario",
      [](const std::string& text) {
        const auto sc = cli::parse_scenario(parse_text(text));
        return py::make_tuple(sc.economy, solver_dict(sc.solver));
      },
      "text"_a);
}
