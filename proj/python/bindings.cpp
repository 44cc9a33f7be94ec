#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>
#include <tuple>

#include "abspec/ab3d.hpp"
#include "abspec/errors.hpp"
#include "abspec/measures.hpp"
#include "abspec/special_fns.hpp"
#include "abspec/theta_spec.hpp"
#include "abspec/transform1d.hpp"
#include "abspec/verify.hpp"

namespace py = pybind11;
using namespace abspec;

namespace {

std::pair<double, double> pair_of(const ValueWithDerivative& v) { return {v.value, v.d_dr}; }

std::vector<std::tuple<double, double>> atom_list(const std::vector<Atom>& atoms) {
  std::vector<std::tuple<double, double>> out;
  for (const Atom& a : atoms) out.emplace_back(a.energy, a.weight);
  return out;
}

// Radial transform on a fixed grid and measure quadrature; builds the kernel once.
class Transform1D {
 public:
  Transform1D(double kappa, double theta, std::vector<double> r, std::vector<double> weights, double e_max,
              std::size_t node_budget)
      : params_(kappa, theta),
        transform_(params_, discretize(spectral_measure(params_), e_max, node_budget),
                   RadialGrid{std::move(r), std::move(weights)}) {}

  TransformCoefficients forward(const std::vector<Complex>& values) const { return transform_.forward(values); }

  std::vector<Complex> inverse(const TransformCoefficients& c, bool include_atoms) const {
    return transform_.inverse(c, TransformOptions{include_atoms}).values;
  }

  const ExtensionParams& params() const { return params_; }

 private:
  ExtensionParams params_;
  RadialTransform transform_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spectral transforms of Aharonov-Bohm Hamiltonians";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ContractError>(m, "ContractError", PyExc_RuntimeError);

  m.def("chi_kappa", [](double kappa, double zeta) { return chi_kappa(Order(kappa), zeta); },
        py::arg("kappa"), py::arg("zeta"));
  m.def("u_eigen", [](double kappa, double energy, double r) { return pair_of(u_eigen(Order(kappa), {energy, r})); },
        py::arg("kappa"), py::arg("energy"), py::arg("r"), "(u, du/dr) of the regular-type solution.");
  m.def("w_eigen", [](double kappa, double energy, double r) { return pair_of(w_eigen(Order(kappa), {energy, r})); },
        py::arg("kappa"), py::arg("energy"), py::arg("r"));
  m.def(
      "u_theta_eigen",
      [](double kappa, double theta, double energy, double r) {
        return pair_of(u_theta_eigen(Order(kappa), theta, {energy, r}));
      },
      py::arg("kappa"), py::arg("theta"), py::arg("energy"), py::arg("r"));

  m.def("theta_kappa", &theta_kappa, py::arg("kappa"));
  m.def("bound_state_energy", [](double kappa, double theta) { return bound_state_energy(ExtensionParams(kappa, theta)); },
        py::arg("kappa"), py::arg("theta") = 0.0);
  m.def("atom_weight", [](double kappa, double theta) { return atom_weight(ExtensionParams(kappa, theta)); },
        py::arg("kappa"), py::arg("theta") = 0.0);
  m.def("ac_density", [](double kappa, double theta, double energy) {
          return ac_density(ExtensionParams(kappa, theta), energy);
        },
        py::arg("kappa"), py::arg("theta"), py::arg("energy"));

  py::class_<MeasureQuadrature>(m, "MeasureQuadrature")
      .def_readonly("nodes", &MeasureQuadrature::nodes)
      .def_readonly("weights", &MeasureQuadrature::weights)
      .def_readonly("e_max", &MeasureQuadrature::e_max)
      .def_property_readonly("atoms", [](const MeasureQuadrature& q) { return atom_list(q.atoms); })
      .def("continuum_mass", &MeasureQuadrature::continuum_mass);
  m.def(
      "discretize",
      [](double kappa, double theta, double e_max, std::size_t node_budget) {
        return discretize(spectral_measure(ExtensionParams(kappa, theta)), e_max, node_budget);
      },
      py::arg("kappa"), py::arg("theta") = 0.0, py::arg("e_max") = 800.0, py::arg("node_budget") = kDefaultNodeBudget);

  py::class_<TransformCoefficients>(m, "TransformCoefficients")
      .def_property_readonly("energies", [](const TransformCoefficients& c) { return c.quad.nodes; })
      .def_property_readonly("weights", [](const TransformCoefficients& c) { return c.quad.weights; })
      .def_property_readonly("atoms", [](const TransformCoefficients& c) { return atom_list(c.quad.atoms); })
      .def_readonly("continuum", &TransformCoefficients::continuum)
      .def_readonly("atom_values", &TransformCoefficients::atom_values)
      .def("norm_squared", &TransformCoefficients::norm_squared, py::arg("include_atoms") = true);

  py::class_<Transform1D>(m, "Transform1D")
      .def(py::init<double, double, std::vector<double>, std::vector<double>, double, std::size_t>(),
           py::arg("kappa"), py::arg("theta"), py::arg("r"), py::arg("weights"), py::arg("e_max") = 800.0,
           py::arg("node_budget") = kDefaultNodeBudget)
      .def_property_readonly("kappa", [](const Transform1D& t) { return t.params().kappa(); })
      .def_property_readonly("theta", [](const Transform1D& t) { return t.params().theta(); })
      .def("forward", &Transform1D::forward, py::arg("values"), py::call_guard<py::gil_scoped_release>())
      .def("inverse", &Transform1D::inverse, py::arg("coefficients"), py::arg("include_atoms") = true,
           py::call_guard<py::gil_scoped_release>());

  m.def(
      "gauss_bump",
      [](double a, double b, std::size_t n) {
        const RadialFunction f = GaussianBump(a, b).sample(n);
        return std::make_tuple(f.grid.nodes, f.grid.weights, f.values);
      },
      py::arg("a"), py::arg("b"), py::arg("n") = 96, "(nodes, weights, values) of the test bump on [a, b].");

  m.def(
      "bound_states",
      [](double phi, std::map<int, double> thetas, int m_max) {
        std::map<int, ThetaEntry> entries(thetas.begin(), thetas.end());
        std::vector<py::dict> rows;
        for (const BoundStateRow& row : bound_state_table(ThetaSpec(phi, std::move(entries)), m_max)) {
          py::dict d;
          d["m"] = row.m;
          d["kappa"] = row.kappa;
          d["energy"] = row.energy;
          d["weight"] = row.weight;
          d["theta"] = row.theta;
          rows.push_back(std::move(d));
        }
        return rows;
      },
      py::arg("phi"), py::arg("thetas"), py::arg("m_max") = 3);

  m.def("check_ids", &check_ids);
  m.def(
      "run_suite_json",
      [](std::vector<std::string> checks, bool negative_controls) {
        SuiteConfig config;
        config.checks = std::move(checks);
        config.negative_controls = negative_controls;
        return report_json(run_suite(config));
      },
      py::arg("checks") = std::vector<std::string>{}, py::arg("negative_controls") = false,
      py::call_guard<py::gil_scoped_release>());
}
