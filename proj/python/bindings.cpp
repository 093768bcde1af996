#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>

#include "mprk/errors.hpp"
#include "mprk/operators.hpp"
#include "mprk/precision.hpp"
#include "mprk/stability.hpp"
#include "mprk/stepper.hpp"
#include "mprk/tableau.hpp"

namespace py = pybind11;
using namespace mprk;

namespace {

FloatFormat parse_format(const std::string& s) {
  if (s == "f16" || s == "binary16") return FloatFormat::Binary16;
  if (s == "f32" || s == "binary32") return FloatFormat::Binary32;
  throw std::invalid_argument("unknown float format: " + s + " (want f16 or f32)");
}

Equation parse_equation(const std::string& s) {
  if (s == "heat") return Equation::Heat;
  if (s == "advection") return Equation::Advection;
  throw std::invalid_argument("unknown equation: " + s + " (want heat or advection)");
}

Precision parse_precision(const std::string& s) {
  if (s == "f32") return Precision::F32;
  if (s == "f64") return Precision::F64;
  throw std::invalid_argument("unknown precision: " + s + " (want f32 or f64)");
}

py::dict result_to_dict(const IntegrationResult& r) {
  py::dict d;
  d["steps"] = r.steps;
  d["solver_failure"] = r.solver_failure;
  d["mean_iterations"] = r.mean_iterations;
  d["total_iterations"] = r.total_iterations;
  d["solve_iterations"] = r.solve_iterations;
  d["wall_seconds"] = r.wall_seconds;
  d["state"] = r.state;
  if (r.error_max)
    d["error_max"] = *r.error_max;
  else
    d["error_max"] = py::none();
  if (r.error_l2)
    d["error_l2"] = *r.error_l2;
  else
    d["error_l2"] = py::none();
  py::dict timings;
  for (const auto& [label, entry] : r.timings.entries()) {
    py::dict t;
    t["count"] = entry.count;
    t["total_seconds"] = entry.seconds;
    t["seconds_per_call"] = entry.seconds_per_call();
    timings[py::str(label)] = t;
  }
  d["timings"] = timings;
  return d;
}

}  // namespace

PYBIND11_MODULE(_mprk, m) {
  m.doc() = "Mixed-precision Runge-Kutta integrators with fast-diagonalization "
            "preconditioning for linear 3D heat and advection problems";

  py::class_<ButcherTableau>(m, "Tableau")
      .def(py::init<>())
      .def_readwrite("name", &ButcherTableau::name)
      .def_readwrite("q", &ButcherTableau::q)
      .def_readwrite("c", &ButcherTableau::c)
      .def_readwrite("a_high", &ButcherTableau::a_high)
      .def_readwrite("a_eps", &ButcherTableau::a_eps)
      .def_readwrite("b", &ButcherTableau::b)
      .def("__repr__", [](const ButcherTableau& t) {
        return "<Tableau '" + t.name + "' with " + std::to_string(t.q) + " stages>";
      });

  m.def(
      "builtin",
      [](const std::string& name) { return builtin_tableau(method_from_name(name)); },
      py::arg("name"), "Load one of the published tableaus: 4s3pA, 4s3pB, or 4s3pC.");
  m.def("midpoint_corrected", &midpoint_corrected, py::arg("p"),
        "Implicit midpoint rule with p explicit corrector stages.");
  m.def("validate", &validate, py::arg("tableau"),
        "Structural invariant check; returns one line per violation (empty = clean).");
  m.def("tableau_to_json", &tableau_to_json, py::arg("tableau"));
  m.def("tableau_from_json", &tableau_from_json, py::arg("text"));

  m.def("stability_function", &stability_function, py::arg("tableau"), py::arg("z"),
        "R(z) = 1 + z b^T (I - z A)^{-1} 1.");
  m.def("corrected_midpoint_reference", &corrected_midpoint_reference, py::arg("z"),
        "Closed form (2 + z) / (2 - z) shared by every corrected midpoint scheme.");
  m.def(
      "truncate_eps",
      [](const ButcherTableau& t, const std::string& fmt) { return truncate_eps(t, parse_format(fmt)); },
      py::arg("tableau"), py::arg("format"),
      "Round the A_eps block to binary16 ('f16') or binary32 ('f32').");
  m.def(
      "region_scan",
      [](const ButcherTableau& t, double re_min, double re_max, double im_min, double im_max,
         int nx, int ny) {
        const StabilityGrid g = region_scan(t, re_min, re_max, im_min, im_max, nx, ny);
        py::dict d;
        d["re_min"] = g.re_min;
        d["re_max"] = g.re_max;
        d["im_min"] = g.im_min;
        d["im_max"] = g.im_max;
        d["nx"] = g.nx;
        d["ny"] = g.ny;
        d["values"] = g.values;
        std::vector<bool> stable(g.stable.begin(), g.stable.end());
        d["stable"] = stable;
        d["stable_count"] = g.stable_count();
        return d;
      },
      py::arg("tableau"), py::arg("re_min") = -10.0, py::arg("re_max") = 4.0,
      py::arg("im_min") = -7.0, py::arg("im_max") = 7.0, py::arg("nx") = 201, py::arg("ny") = 201,
      "Evaluate |R| on an inclusive lattice; values are laid out ix*ny + iy.");

  m.def("round_binary16", &round_binary16, py::arg("x"),
        "Round through IEEE binary16 (ties to even, saturating to inf).");
  m.def("round_binary32", &round_binary32, py::arg("x"));

  m.def(
      "integrate",
      [](const ButcherTableau& t, const std::string& equation, int n, double tau, double t_end,
         double tol, const std::string& precision, int max_iter) {
        const ProblemSpec p = make_problem(parse_equation(equation), n);
        IntegrationConfig cfg;
        cfg.tableau = t;
        cfg.tau = tau;
        cfg.t_end = t_end;
        cfg.tol = tol;
        cfg.policy.implicit = parse_precision(precision);
        cfg.max_iter = max_iter;
        return result_to_dict(integrate(p, cfg));
      },
      py::arg("tableau"), py::arg("equation"), py::arg("n"), py::arg("tau"), py::arg("t_end"),
      py::arg("tol") = 1e-6, py::arg("precision") = "f64", py::arg("max_iter") = 40,
      "Run the split-tableau integrator on a built-in problem and report the "
      "per-solve iteration counts, timings, and (for heat) final-time errors.");

  py::register_exception<Error>(m, "MprkError");
}
