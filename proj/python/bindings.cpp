// Thin module: RunConfig in, JSON artifact out, plus a few direct helpers.
#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "circlenf/cli.hpp"
#include "circlenf/io.hpp"

namespace py = pybind11;
using namespace circlenf;

namespace {

void translate_error(const Error& e) {
  PyErr_SetString(PyExc_RuntimeError, (error_json(e).dump()).c_str());
}

}  // namespace

PYBIND11_MODULE(_circlenf, m) {
  m.doc() = "normal forms of foliation-preserving planar maps";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      translate_error(e);
    }
  });

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("command", &RunConfig::command)
      .def_readwrite("family", &RunConfig::family)
      .def_readwrite("omega", &RunConfig::omega)
      .def_readwrite("modulus", &RunConfig::modulus)
      .def_readwrite("a", &RunConfig::a)
      .def_readwrite("d", &RunConfig::d)
      .def_readwrite("order", &RunConfig::order)
      .def_readwrite("bits", &RunConfig::bits)
      .def_readwrite("map_file", &RunConfig::map_file)
      .def_readwrite("gauge", &RunConfig::gauge)
      .def_readwrite("diag", &RunConfig::diag)
      .def_readwrite("out", &RunConfig::out)
      .def_readwrite("grid", &RunConfig::grid)
      .def_readwrite("ladder", &RunConfig::ladder)
      .def_readwrite("z", &RunConfig::z)
      .def_readwrite("n_deviation", &RunConfig::n_deviation)
      .def_readwrite("n_jet", &RunConfig::n_jet)
      .def_readwrite("t", &RunConfig::t)
      .def_readwrite("q_max", &RunConfig::q_max)
      .def_readwrite("tol", &RunConfig::tol)
      .def_readwrite("r0", &RunConfig::r0)
      .def_readwrite("gauge_a", &RunConfig::gauge_a)
      .def_readwrite("gauge_b", &RunConfig::gauge_b)
      .def_readwrite("poly", &RunConfig::poly)
      .def_readwrite("what", &RunConfig::what)
      .def_readwrite("depth", &RunConfig::depth);

  m.def("run_json", &run_json, py::arg("config"),
        "execute one command, return its JSON artifact as a string");

  m.def(
      "eval_map",
      [](const std::string& family, const std::string& omega, double a, int d,
         std::complex<double> z, int order, int bits) {
        RunConfig cfg;
        cfg.family = family;
        cfg.omega = omega;
        cfg.order = order;
        cfg.bits = bits;
        Family tag = family == "A" ? Family::A : family == "B" ? Family::B : Family::C;
        FoliationMap F = make_family(tag, parse_omega(omega, bits), Real(a, bits), d,
                                     order, bits);
        Complex w = eval_map(F, Complex(z.real(), z.imag(), bits));
        return std::complex<double>(w.re().d(), w.im().d());
      },
      py::arg("family"), py::arg("omega"), py::arg("a"), py::arg("d"), py::arg("z"),
      py::arg("order") = 16, py::arg("bits") = 256);

  m.def(
      "rotation_number_arnold",
      [](double s, double t, long iterations, double tol) {
        auto lift = [s, t](double th) {
          return th + s + t * std::sin(2.0 * 3.14159265358979323846 * th);
        };
        RotationResult r = rotation_number(lift, 0.0, iterations, tol);
        return py::make_tuple(r.rho, r.error_est, r.converged);
      },
      py::arg("s"), py::arg("t"), py::arg("iterations") = 1 << 16,
      py::arg("tol") = 1e-9);

  m.def("omega_value", [](const std::string& omega, int bits) {
    return parse_omega(omega, bits).omega().d();
  });
}
