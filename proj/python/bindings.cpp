#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cli.hpp"
#include "spot/bench.hpp"
#include "spot/errors.hpp"
#include "spot/persist.hpp"
#include "spot/simulator.hpp"

namespace py = pybind11;
using namespace spot;

namespace {

Bytes to_bytes(const py::bytes& b) {
  const std::string s = b;
  return Bytes(s.begin(), s.end());
}

py::bytes from_bytes(const Bytes& b) { return py::bytes(reinterpret_cast<const char*>(b.data()), b.size()); }

}  // namespace

PYBIND11_MODULE(_spot, m) {
  m.doc() = "SPOT proximity tracing core";

  py::register_exception<MalformedInput>(m, "MalformedInput", PyExc_ValueError);
  py::register_exception<ProtocolError>(m, "ProtocolError", PyExc_RuntimeError);
  py::register_exception<MissingState>(m, "MissingState", PyExc_FileNotFoundError);
  py::register_exception<UnsupportedSecurityLevel>(m, "UnsupportedSecurityLevel", PyExc_ValueError);

  py::class_<PairingContext>(m, "Context")
      .def_static(
          "setup",
          [](int level, const py::bytes& seed) { return PairingContext::setup(security_level_from_bits(level), to_bytes(seed)); },
          py::arg("level"), py::arg("seed"))
      .def_property_readonly("security_level", [](const PairingContext& c) { return bits(c.security_level()); })
      .def_property_readonly("curve", [](const PairingContext& c) { return std::string(curve_name(c.security_level())); })
      .def_property_readonly("order", [](const PairingContext& c) { return py::int_(py::str(c.order_decimal())); })
      .def_property_readonly("scalar_size", &PairingContext::scalar_size)
      .def_property_readonly("g1_size", &PairingContext::g1_size)
      .def_property_readonly("g2_size", &PairingContext::g2_size)
      .def("hash_to_scalar",
           [](const PairingContext& c, const py::bytes& data) { return from_bytes(c.hash_to_scalar(to_bytes(data)).to_bytes()); })
      .def("set_ccm",
           [](const PairingContext& c, const py::bytes& a, const py::bytes& b) {
             return from_bytes(set_ccm(c, Ebid::from_bytes(to_bytes(a)), Ebid::from_bytes(to_bytes(b))).to_bytes());
           })
      .def("serialize", [](const PairingContext& c) { return from_bytes(c.serialize()); });

  m.def(
      "simulate_json", [](const std::string& scenario) {
        SimulationResult r = run_scenario(Scenario::from_json(Json::parse(scenario)));
        return r.report().dump();
      },
      py::arg("scenario"), "Runs a scenario given as JSON text; returns the report as JSON text.");

  m.def(
      "bench_json",
      [](std::size_t runs, const std::vector<std::string>& algorithms, const std::vector<std::string>& variants,
         int level) {
        BenchOptions o;
        o.runs = runs;
        o.level = security_level_from_bits(level);
        o.algorithms = algorithms;
        if (!variants.empty()) {
          o.variants.clear();
          for (const auto& v : variants) o.variants.push_back(BenchVariant::parse(v));
        }
        py::gil_scoped_release release;
        return run_bench(o).to_json().dump();
      },
      py::arg("runs") = 100, py::arg("algorithms") = std::vector<std::string>{},
      py::arg("variants") = std::vector<std::string>{}, py::arg("level") = 112);

  m.def(
      "cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = spot::cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command line tool in-process; returns (exit code, stdout, stderr).");

  m.def("algorithms", &bench_algorithms);
}
