#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gradcalc/calculus.hpp"
#include "gradcalc/chart.hpp"
#include "gradcalc/dsl.hpp"
#include "gradcalc/lifts.hpp"
#include "gradcalc/render.hpp"
#include "gradcalc/suite.hpp"
#include "gradcalc/tensor.hpp"

namespace py = pybind11;
using namespace gradcalc;

namespace {

// None for a non-homogeneous tensor; zero reports 0
py::object degree(const TensorField& k, int component) {
  auto d = degree_of_tensor(k, component);
  if (!d.is_homogeneous()) return py::none();
  return py::int_(d.value());
}

}  // namespace

PYBIND11_MODULE(_gradcalc, m) {
  m.attr("__version__") = GRADCALC_VERSION;

  // translators are tried newest first, so the base goes in first
  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ChartMismatch>(m, "ChartMismatch", base);
  py::register_exception<DomainError>(m, "DomainError", base);
  py::register_exception<ValenceError>(m, "ValenceError", base);
  py::register_exception<ScriptError>(m, "ScriptError", base);

  py::class_<Chart>(m, "Chart")
      .def(py::init([](std::vector<std::string> names, std::vector<std::vector<int>> weights, std::string label,
                       std::optional<int> vb) { return make_chart(std::move(names), std::move(weights), {}, label, vb); }),
           py::arg("names"), py::arg("weights"), py::arg("label") = "M", py::arg("vb") = py::none())
      .def_property_readonly("label", &Chart::label)
      .def_property_readonly("names", [](const Chart& c) {
        auto n = c.names();
        return std::vector<std::string>(n.begin(), n.end());
      })
      .def("__len__", &Chart::size)
      .def("__eq__", [](const Chart& a, const Chart& b) { return a == b; });

  py::class_<TensorField>(m, "Tensor")
      .def_static("parse", &parse_tensor, py::arg("text"), py::arg("chart"))
      .def_property_readonly("chart", &TensorField::chart)
      .def_property_readonly("valence", [](const TensorField& k) { return std::pair{k.q(), k.p()}; })
      .def("is_zero", &TensorField::is_zero)
      .def("degree", &degree, py::arg("component") = 0)
      .def("__str__", &render_tensor)
      .def("__repr__", [](const TensorField& k) { return "Tensor('" + render_tensor(k) + "')"; })
      .def("__eq__", [](const TensorField& a, const TensorField& b) { return a == b; })
      .def("__add__", [](const TensorField& a, const TensorField& b) { return a + b; })
      .def("__sub__", [](const TensorField& a, const TensorField& b) { return a - b; })
      .def("__neg__", [](const TensorField& a) { return -a; });

  py::class_<LiftContext>(m, "Prolongation")
      .def(py::init<Chart, int>(), py::arg("chart"), py::arg("r"))
      .def_property_readonly("r", &LiftContext::r)
      .def_property_readonly("base", &LiftContext::base)
      .def_property_readonly("chart", &LiftContext::prolonged)
      .def(
          "lift", [](const LiftContext& c, const TensorField& k, int lam) { return lift_tensor(k, lam, c); },
          py::arg("tensor"), py::arg("lam"))
      .def("complete_lift", [](const LiftContext& c, const TensorField& k) { return complete_lift(k, c); });

  m.def("d", &exterior_derivative);
  m.def("lie_bracket", &lie_bracket);
  m.def("lie_derivative", &lie_derivative);
  m.def("interior", &interior);
  m.def("schouten", &schouten_bracket);
  m.def("nijenhuis_torsion", &nijenhuis_torsion);
  m.def("fn_bracket", &fn_bracket);
  m.def("nr_bracket", &nr_bracket);

  m.def(
      "run_json",
      [](const std::string& script, std::uint64_t seed, int samples) {
        RunOptions o{seed, samples};
        auto r = run_script(script, o);
        return format_json(r, o);
      },
      py::arg("script"), py::arg("seed") = 42, py::arg("samples") = 8);
  m.def(
      "check_suite_json",
      [](std::uint64_t seed, int cases) {
        SuiteOptions o{seed, cases};
        return suite_json(run_check_suite(o), o).dump();
      },
      py::arg("seed") = 42, py::arg("cases") = 200);
}
