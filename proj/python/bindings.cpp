#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wft/cli.hpp"

namespace py = pybind11;
using namespace wft;

namespace {

State to_state(const std::array<Real, 3>& a) { return {a[0], a[1], a[2]}; }
std::array<Real, 3> from_state(const State& s) { return {s.u, s.v, s.w}; }

StepFunction step_function(const std::vector<Real>& breakpoints, const std::vector<std::array<Real, 3>>& values) {
  StepFunction d;
  d.breakpoints = breakpoints;
  for (const auto& v : values) d.values.push_back(to_state(v));
  d.validate();
  return d;
}

}  // namespace

PYBIND11_MODULE(_wftrack, m) {
  m.doc() = "Wave-front tracking for a 3x3 system of conservation laws";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
  py::register_exception<InternalError>(m, "InternalError", PyExc_RuntimeError);

  m.attr("extended_precision") = kExtendedPrecision;

  m.def("eigenvalues", [](const std::array<Real, 3>& U, Real eta) { return eigenvalues(to_state(U), SystemParams(eta)); },
        py::arg("U"), py::arg("eta"));
  m.def("flux", [](const std::array<Real, 3>& U, Real eta) { return from_state(flux(to_state(U), SystemParams(eta))); },
        py::arg("U"), py::arg("eta"));
  m.def("certify_json", [](Real eta, int resolution) { return to_json(certify_domain(SystemParams(eta), resolution)).dump(); },
        py::arg("eta"), py::arg("resolution") = 16);

  m.def("derive_params_json", [](Real eps) { return to_json(derive_params(eps)).dump(); }, py::arg("eps"));

  m.def("solve_riemann_json",
        [](const std::array<Real, 3>& UL, const std::array<Real, 3>& UR, Real eta) {
          return to_json(solve_riemann(to_state(UL), to_state(UR), SystemParams(eta))).dump();
        },
        py::arg("UL"), py::arg("UR"), py::arg("eta"));

  m.def("lax_oleinik",
        [](const std::vector<Real>& breakpoints, const std::vector<Real>& values, Real t, const std::vector<Real>& xs,
           Real k) {
          const auto s = lax_oleinik_solve(ConvexFlux::quadratic_flux(k), ScalarProfile::steps(breakpoints, values), t, xs);
          return py::make_tuple(s.u, s.y);
        },
        py::arg("breakpoints"), py::arg("values"), py::arg("t"), py::arg("xs"), py::arg("k") = 0.5,
        "Entropy solution of u_t + (k u^2)_x = 0 for piecewise-constant data: (u, backward minimizers).");

  m.def("build_datum",
        [](const std::string& config) {
          const auto bd = build_datum(datum_spec_from_json(json::parse(config)));
          std::vector<std::array<Real, 3>> vals;
          for (const auto& v : bd.datum.values) vals.push_back(from_state(v));
          return py::make_tuple(bd.datum.breakpoints, vals);
        },
        py::arg("config"), "Scenario datum from a JSON config: (breakpoints, values).");

  m.def("evolve_json",
        [](const std::vector<Real>& breakpoints, const std::vector<std::array<Real, 3>>& values, Real eps,
           const std::string& ft_overrides, int J_max) {
          const auto sp = derive_params(eps);
          const FTParams fp = ft_params_from_json(json::parse(ft_overrides), default_ft_params(sp, J_max));
          const FTSolution sol = evolve(step_function(breakpoints, values), fp, SystemParams(sp.eta));
          json j = run_summary(sol, eps);
          j["glimm_F"] = json::array();
          for (const auto& e : sol.events) j["glimm_F"].push_back(e.glimm.F);
          return j.dump();
        },
        py::arg("breakpoints"), py::arg("values"), py::arg("eps"), py::arg("ft_overrides") = "{}",
        py::arg("J_max") = 3);

  m.def("run_cli", [](const std::vector<std::string>& args) { return run_cli(args); }, py::arg("args"));
}
