#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "coinwalk/experiments.hpp"

namespace py = pybind11;
using namespace coinwalk;

namespace {

BakerSpec make_spec(int num_qubits, int n, double eta, double kappa) {
  return BakerSpec::qubit(num_qubits, n, {eta, kappa});
}

QubitState coin_by_name(const std::string& name) { return parse_coin(name).qubit; }

}  // namespace

PYBIND11_MODULE(_coinwalk, m) {
  m.doc() = "Coined quantum walk whose coin is a quantum baker map";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<GuardViolation>(m, "GuardViolation", PyExc_ArithmeticError);

  py::class_<FloquetAngles>(m, "FloquetAngles")
      .def(py::init<double, double>(), py::arg("eta") = 0.0, py::arg("kappa") = 0.0)
      .def_readwrite("eta", &FloquetAngles::eta)
      .def_readwrite("kappa", &FloquetAngles::kappa);

  py::class_<BakerSpec>(m, "BakerSpec")
      .def_static("qubit", &make_spec, py::arg("num_qubits"), py::arg("n"), py::arg("eta") = 0.0,
                  py::arg("kappa") = 0.0)
      .def_static("even", [](std::size_t d, double eta, double kappa) {
        return BakerSpec::even(d, {eta, kappa});
      }, py::arg("dim"), py::arg("eta") = 0.0, py::arg("kappa") = 0.0)
      .def_property_readonly("dim", &BakerSpec::dim)
      .def_property_readonly("label", &BakerSpec::label)
      .def("__repr__", [](const BakerSpec& s) { return "<BakerSpec " + s.label() + ">"; });

  py::class_<BakerMap>(m, "BakerMap")
      .def(py::init<BakerSpec>())
      .def_property_readonly("dim", &BakerMap::dim)
      .def("__call__", &BakerMap::operator())
      .def("dense", &BakerMap::dense);

  m.def("fourier_matrix", [](std::size_t d, double eta, double kappa) {
    return fourier_matrix(d, {eta, kappa});
  }, py::arg("dim"), py::arg("eta") = 0.0, py::arg("kappa") = 0.0);
  m.def("unitarity_defect", &unitarity_defect);
  m.def("classical_baker_step", [](double q, double p) {
    const PhasePoint r = classical_baker_step({q, p});
    return py::make_tuple(r.q, r.p);
  });

  py::class_<SystemState>(m, "SystemState")
      .def_readonly("ring_size", &SystemState::ring_size)
      .def_readonly("time", &SystemState::time)
      .def_property_readonly("sectors", [](const SystemState& s) { return s.sectors; })
      .def_property_readonly("dim", &SystemState::dim)
      .def("norm_squared", &SystemState::norm_squared);

  m.def("init_state", [](std::size_t ring, const std::string& coin, std::size_t dim) {
    return init_state(ring, InitialCoinSpec::product(coin_by_name(coin)), dim);
  }, py::arg("ring_size"), py::arg("coin"), py::arg("dim"),
     "Walker at the origin, every coin qubit in the named state (zero, plus_i, plus_3pi4).");
  m.def("init_state_vector", [](std::size_t ring, const CoinVector& coin) {
    return init_state(ring, coin);
  }, py::arg("ring_size"), py::arg("coin"));
  m.def("evolve", [](SystemState s, long steps, const BakerMap& map, int threads) {
    py::gil_scoped_release release;
    evolve_in_place(s, steps, map, threads);
    return s;
  }, py::arg("state"), py::arg("steps"), py::arg("map"), py::arg("threads") = 1);
  m.def("dense_oracle_evolve", [](std::size_t ring, const CoinVector& coin, const BakerSpec& spec,
                                  long steps) { return dense_oracle_evolve(ring, coin, spec, steps); });
  m.def("position_vector", &position_vector);
  m.def("position_distribution",
        py::overload_cast<const SystemState&>(&position_distribution));
  m.def("position_variance", [](const std::vector<double>& p) { return position_variance(p); });
  m.def("linear_entropy", py::overload_cast<const SystemState&>(&linear_entropy));
  m.def("von_neumann_entropy", py::overload_cast<const SystemState&>(&von_neumann_entropy));
  m.def("reduced_density", [](const SystemState& s, bool position) {
    const ReducedDensity rho = reduced_density(s);
    return position ? to_position_basis(rho).matrix : rho.matrix;
  }, py::arg("state"), py::arg("position_basis") = false);

  m.def("wigner", [](const SystemState& s) {
    return wigner_from_density(to_position_basis(reduced_density(s))).values;
  }, "2M x 2M discrete Wigner function of the walker.");
  m.def("classical_grid", [](std::size_t ring, long t) {
    return classical_phase_grid(classical_walk_distribution(ring, t)).values;
  });

  m.def("preset_names", &preset_names);
  m.def("preset_text", [](const std::string& name) { return to_config_text(preset(name).front()); });
  m.def("run", [](const std::string& config_text, int threads) {
    py::list out;
    for (const auto& cfg : parse_config_text(config_text)) {
      RunResult r;
      {
        py::gil_scoped_release release;
        r = run_experiment(cfg, threads);
      }
      for (const auto& mem : r.members) {
        py::dict d;
        d["run"] = cfg.name;
        d["member"] = mem.member.label();
        d["coin"] = mem.coin;
        for (const auto& s : mem.series) {
          d[py::str(std::string(observable_name(s.label)))] = py::make_tuple(s.times, s.values);
        }
        if (mem.saturation) d["saturation"] = mem.saturation->level;
        if (mem.saturation && mem.saturation->period) d["period"] = *mem.saturation->period;
        if (mem.slope) d["slope"] = *mem.slope;
        if (mem.growth) d["growth_exponent"] = *mem.growth;
        if (mem.late_distance) d["late_distance"] = *mem.late_distance;
        out.append(d);
      }
    }
    return out;
  }, py::arg("config_text"), py::arg("threads") = 1,
     "Runs every section of a config text; one dict per (member, coin).");
}
