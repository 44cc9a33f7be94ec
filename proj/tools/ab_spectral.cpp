#include <CLI11.hpp>

#include <cmath>
#include <exception>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "abspec/ab3d.hpp"
#include "abspec/errors.hpp"
#include "abspec/io.hpp"
#include "abspec/measures.hpp"
#include "abspec/transform1d.hpp"
#include "abspec/verify.hpp"

using namespace abspec;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

// Raised for argument combinations CLI11 cannot express.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Reals are taken as strings so "pi/2" works and parsing ignores the locale.
struct RealArg {
  std::string text;
  std::optional<double> get() const {
    if (text.empty()) return std::nullopt;
    return parse_real(text);
  }
  double require(const char* flag) const {
    if (text.empty()) throw UsageError(std::string(flag) + " is required");
    return parse_real(text);
  }
};

void emit(const std::string& path, const std::string& content) { write_text_atomic(path, content); }

// Summary lines go to stdout unless stdout already carries the CSV.
std::ostream& summary_stream(const std::string& output) { return output == "-" ? std::cerr : std::cout; }

struct Common {
  std::string output;

  // -o wins over the config's [output] path; standard output otherwise.
  std::string destination(const std::string& from_config = "") const {
    if (!output.empty()) return output;
    return from_config.empty() ? "-" : from_config;
  }
};

struct EigenArgs : Common {
  RealArg kappa, theta, energy;
  std::string r_range;
};

int run_eigenfunction(const EigenArgs& a) {
  const double kappa = a.kappa.require("--kappa");
  const double energy = a.energy.require("--energy");
  const std::optional<double> theta = a.theta.get();
  const bool family = std::fabs(kappa) < 1.0;
  if (family && !theta) throw UsageError("--theta is required when |kappa| < 1");
  if (!family && theta) throw UsageError("--theta only applies when |kappa| < 1");
  const std::vector<double> r = parse_range(a.r_range);
  for (double x : r) {
    if (!(x > 0.0)) throw UsageError("--r must stay off the axis (r > 0)");
  }
  const ExtensionParams params = family ? ExtensionParams(kappa, *theta) : ExtensionParams(kappa);
  std::vector<ValueWithDerivative> values;
  values.reserve(r.size());
  for (double x : r) values.push_back(transform_kernel(params, energy, x));
  emit(a.destination(), eigenfunction_csv(r, values));
  return kExitOk;
}

struct MeasureArgs : Common {
  RealArg kappa, theta;
  std::string energies;
};

int run_measure(const MeasureArgs& a) {
  const double kappa = a.kappa.require("--kappa");
  const std::optional<double> theta = a.theta.get();
  const bool family = std::fabs(kappa) < 1.0;
  if (family && !theta) throw UsageError("--theta is required when |kappa| < 1");
  if (!family && theta) throw UsageError("--theta only applies when |kappa| < 1");
  const ExtensionParams params = family ? ExtensionParams(kappa, *theta) : ExtensionParams(kappa);
  emit(a.destination(), measure_csv(spectral_measure(params), parse_range(a.energies)));
  return kExitOk;
}

struct SpecArgs {
  std::string config;
  RealArg phi, theta;
  int m_max = -1;
};

// ThetaSpec from a config file, or from --phi with one --theta for every A^phi channel.
struct ResolvedSpec {
  RunConfig config;
  ThetaSpec spec;
};

ResolvedSpec resolve_spec(const SpecArgs& a) {
  RunConfig cfg = a.config.empty() ? RunConfig{} : load_run_config(a.config);
  if (const auto phi = a.phi.get()) {
    cfg.phi = *phi;
    if (const auto theta = a.theta.get()) {
      cfg.channels.clear();
      for (int m : ThetaSpec::a_phi_channels(*phi)) cfg.channels.emplace(m, ThetaEntry(*theta));
    }
  } else if (!a.theta.text.empty() && a.config.empty()) {
    throw UsageError("--theta needs --phi");
  }
  if (!cfg.phi) throw UsageError("give --config with a flux or --phi and --theta");
  if (a.m_max >= 0) cfg.m_max = a.m_max;
  ThetaSpec spec = cfg.theta_spec();
  return {std::move(cfg), std::move(spec)};
}

struct BoundArgs : Common, SpecArgs {};

int run_bound_states(const BoundArgs& a) {
  const ResolvedSpec r = resolve_spec(a);
  emit(a.destination(r.config.output), bound_states_csv(bound_state_table(r.spec, r.config.m_max)));
  return kExitOk;
}

struct TransformArgs : Common, SpecArgs {
  std::string mode = "1d";
  std::string input;
  RealArg kappa;
  RealArg e_max;
  std::optional<std::size_t> nodes;
  std::optional<std::size_t> node_budget;
  std::string axial = "-2.5:2.5";
  std::optional<int> m;
  RealArg p_max;
  std::size_t p_nodes = 0;
};

std::optional<GaussianBump> named_family(const std::string& input) {
  if (input.rfind("gauss:", 0) != 0) return std::nullopt;
  const std::string rest = input.substr(6);
  const auto colon = rest.find(':');
  if (colon == std::string::npos || rest.find(':', colon + 1) != std::string::npos) {
    throw UsageError("family must look like gauss:a:b");
  }
  const double a = parse_real(rest.substr(0, colon));
  const double b = parse_real(rest.substr(colon + 1));
  if (!(a > 0.0) || !(b > a)) throw UsageError("gauss:a:b needs 0 < a < b");
  return GaussianBump(a, b);
}

int run_transform_1d(const TransformArgs& a) {
  const double kappa = a.kappa.require("--kappa");
  const std::optional<double> theta = a.theta.get();
  const bool family = std::fabs(kappa) < 1.0;
  if (family && !theta) throw UsageError("--theta is required when |kappa| < 1");
  if (!family && theta) throw UsageError("--theta only applies when |kappa| < 1");
  const ExtensionParams params = family ? ExtensionParams(kappa, *theta) : ExtensionParams(kappa);
  const std::optional<GaussianBump> bump = named_family(a.input);
  const RadialFunction psi = bump ? bump->sample(a.nodes.value_or(96)) : read_radial_csv_file(a.input);
  const double e_max = a.e_max.get().value_or(800.0);
  const RadialTransform t(params, discretize(spectral_measure(params), e_max, a.node_budget.value_or(kDefaultNodeBudget)), psi.grid);
  const TransformCoefficients c = t.forward(psi);
  const std::string out = a.destination();
  emit(out, coefficients_csv(c));
  summary_stream(out) << "parseval_defect=" << format_real(parseval_defect(psi, c))
                           << " roundtrip_defect=" << format_real(relative_l2_distance(t.inverse(c), psi))
                           << " e_max=" << format_real(e_max) << " nodes=" << c.continuum.size()
                           << " atoms=" << c.atom_values.size() << "\n";
  return kExitOk;
}

int run_transform_3d(const TransformArgs& a) {
  if (!a.kappa.text.empty()) throw UsageError("--kappa does not apply in 3d mode; channels follow from --phi");
  const std::optional<GaussianBump> bump = named_family(a.input);
  if (!bump) throw UsageError("3d mode takes the separable family gauss:a:b as --input");
  ResolvedSpec r = resolve_spec(a);
  if (const auto p = a.p_max.get()) r.config.p_max = *p;
  if (a.p_nodes > 0) r.config.p_nodes = a.p_nodes;
  if (const auto e = a.e_max.get()) r.config.forward.e_max = *e;
  if (a.node_budget) r.config.forward.node_budget = *a.node_budget;
  if (a.nodes) r.config.forward.reduction.radial_nodes = *a.nodes;
  const std::vector<double> z = parse_range(a.axial + ":2");
  const int m0 = a.m.value_or(ThetaSpec::a_phi_channels(r.spec.phi()).back());
  if (std::abs(m0) > r.config.m_max) throw UsageError("--m lies outside [-m_max, m_max]");
  const SeparableField field(*bump, GaussianBump(z[0], z[1]), m0);
  const Coefficients3D c = full_forward(r.spec, field, r.config.mode_grid(), r.config.forward);
  const std::string out = a.destination(r.config.output);
  emit(out, coefficients3d_csv(c));
  const double exact = field.norm_squared();
  summary_stream(out) << "parseval_defect=" << format_real(std::fabs(c.norm_squared() - exact) / exact)
                           << " m=" << m0 << " m_max=" << r.config.m_max << " p_max=" << format_real(r.config.p_max)
                           << " p_nodes=" << r.config.p_nodes << " e_max=" << format_real(r.config.forward.e_max)
                           << "\n";
  return kExitOk;
}

struct VerifyArgs : Common {
  std::string config;
  bool negative_controls = false;
  std::vector<std::string> checks;
};

int run_verify(const VerifyArgs& a) {
  const RunConfig cfg = a.config.empty() ? RunConfig{} : load_run_config(a.config);
  SuiteConfig suite = cfg.suite;
  if (a.negative_controls) suite.negative_controls = true;
  for (const std::string& id : a.checks) {
    const auto& ids = check_ids();
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) throw UsageError("unknown check id '" + id + "'");
  }
  suite.checks = a.checks;
  const std::vector<CheckResult> results = run_suite(suite);
  const std::string out = a.destination(cfg.output);
  emit(out, report_json(results));
  std::size_t bad = 0, controls = 0;
  for (const CheckResult& r : results) {
    if (!outcome_ok(r)) ++bad;
    if (r.expected_failure) ++controls;
  }
  summary_stream(out) << results.size() << " checks, " << bad << " failed, " << controls
                           << " negative controls\n";
  return bad == 0 ? kExitOk : kExitCheckFailed;
}

void add_output(CLI::App* cmd, Common& c, const std::string& what) {
  cmd->add_option("-o,--output", c.output,
                  what + " ('-' for standard output, the default; files are replaced atomically)");
}

void add_spec_options(CLI::App* cmd, SpecArgs& s) {
  cmd->add_option("--config", s.config, "Config file with phi and [channel.M] sections")->check(CLI::ExistingFile);
  cmd->add_option("--phi", s.phi.text, "Flux phi (flux / 2pi); overrides the config");
  cmd->add_option("--theta", s.theta.text, "One extension angle for every channel with |m + phi| < 1");
  cmd->add_option("--m-max", s.m_max, "Largest |m| considered");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral toolkit for the Aharonov-Bohm Hamiltonian and its radial problems.\n"
               "Reals accept plain decimals or multiples of pi such as pi/2 or -0.25pi.\n"
               "Exit status: 0 success, 1 a verification check failed, 2 usage or config error.\n"
               "AB_SPECTRAL_THREADS caps the worker threads."};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every command");

  EigenArgs eig;
  auto* c_eig = app.add_subcommand(
      "eigenfunction",
      "Tabulate a generalized eigenfunction of l_q, q = (kappa^2 - 1/4)/r^2.\n"
      "Columns r,u,du_dr. For |kappa| < 1, u = u^kappa_theta(E|r) = cos(theta - pi kappa/2) u^kappa + "
      "sin(theta - pi kappa/2) w^kappa.\n"
      "For |kappa| >= 1, u = u^|kappa|(E|r) = r^(1/2+|kappa|) X_|kappa|(r^2 E), X the entire Bessel-type series.");
  c_eig->add_option("--kappa", eig.kappa.text, "Order kappa")->required();
  c_eig->add_option("--theta", eig.theta.text, "Extension angle (required iff |kappa| < 1)");
  c_eig->add_option("--energy", eig.energy.text, "Spectral parameter E")->required();
  c_eig->add_option("--r", eig.r_range, "Radii start:stop:count, all > 0")->required();
  add_output(c_eig, eig, "CSV destination");

  MeasureArgs mea;
  auto* c_mea = app.add_subcommand(
      "measure",
      "Tabulate the spectral measure of the radial problem.\n"
      "Columns E,density: the absolutely continuous density (1/2) E^|kappa| for |kappa| >= 1, and for |kappa| < 1\n"
      "(1/2) sin^2(pi kappa) / (E^-kappa A^2 - 2 cos(pi kappa) A B + E^kappa B^2), A = sin(theta + pi kappa/2),\n"
      "B = sin(theta - pi kappa/2); at kappa = 0, (1/2) / ((cos theta - sin theta ln(E)/pi)^2 + sin^2 theta).\n"
      "Then '# atom,energy,weight' for the bound state, present iff theta mod pi lies strictly between "
      "|pi kappa/2| and pi - |pi kappa/2|.");
  c_mea->add_option("--kappa", mea.kappa.text, "Order kappa")->required();
  c_mea->add_option("--theta", mea.theta.text, "Extension angle (required iff |kappa| < 1)");
  c_mea->add_option("--energy", mea.energies, "Energies start:stop:count")->required();
  add_output(c_mea, mea, "CSV destination");

  BoundArgs bnd;
  auto* c_bnd = app.add_subcommand(
      "bound-states",
      "List the bound states of the 3D Hamiltonian, one row per channel with |m + phi| < 1 that has one.\n"
      "Columns m,kappa,E_b,weight,theta with kappa = m + phi. E_b = -(sin(theta + pi kappa/2) / "
      "sin(theta - pi kappa/2))^(1/kappa), or -exp(pi cot theta) at kappa = 0; the\n"
      "axial motion adds p^2, so each row is the bottom of a band E_b + p^2.");
  add_spec_options(c_bnd, bnd);
  add_output(c_bnd, bnd, "CSV destination");

  TransformArgs tr;
  auto* c_tr = app.add_subcommand(
      "transform",
      "Expand a function in generalized eigenfunctions and report how well the expansion preserves the norm.\n"
      "1d: c(E) = int u(E|r) psi(r) dr on the measure quadrature; columns E,re,im plus "
      "'# atom,energy,weight,re,im'.\n"
      "3d: the separable field r^(-1/2) psi(r) chi(x3) e^(i m angle) reduced channel by channel, "
      "c(m,p,E); columns m,p,E,re,im, channels without content omitted.\n"
      "The summary line gives | ||psi||^2 - ||c||^2 | / ||psi||^2 and, in 1d, the relative synthesis error.");
  c_tr->add_option("--mode", tr.mode, "1d or 3d")->check(CLI::IsMember({"1d", "3d"}))->capture_default_str();
  c_tr->add_option("--input", tr.input, "CSV with header r,re,im, or the Gaussian bump family gauss:a:b")->required();
  c_tr->add_option("--kappa", tr.kappa.text, "Order kappa (1d)");
  c_tr->add_option("--e-max", tr.e_max.text, "Spectral cutoff E_max (default 800)");
  c_tr->add_option("--nodes", tr.nodes, "Radial Gauss-Legendre nodes for gauss:a:b (default 96)");
  c_tr->add_option("--node-budget", tr.node_budget, "Energy quadrature nodes per channel (default 512)");
  c_tr->add_option("--axial", tr.axial, "Support z0:z1 of the axial bump (3d)")->capture_default_str();
  c_tr->add_option("--m", tr.m, "Angular index of the separable field (3d; default the largest m with |m + phi| < 1)");
  c_tr->add_option("--p-max", tr.p_max.text, "Axial momentum cutoff (3d)");
  c_tr->add_option("--p-nodes", tr.p_nodes, "Gauss-Legendre nodes in p (3d)");
  add_spec_options(c_tr, tr);
  add_output(c_tr, tr, "Coefficient CSV destination");

  VerifyArgs ver;
  auto* c_ver = app.add_subcommand(
      "verify",
      "Run the property suite and write a JSON report, one entry per check and parameter tuple.\n"
      "Checks: Wronskian W(u^kappa(0), w^kappa(0)) = 2/pi; half-order and series identities of X_kappa;\n"
      "second-order convergence of the ODE residual; bound-state energies and weights; measure collapse\n"
      "at theta = pi kappa/2; Parseval, roundtrip and diagonalization of the radial transforms;\n"
      "the half-order sine transform; theta -> theta + pi periodicity; continuity at kappa = 0;\n"
      "3D channel selectivity, Parseval, symmetry covariance and p^2 + E diagonalization.");
  c_ver->add_option("--config", ver.config, "Config file with a [verify] section")->check(CLI::ExistingFile);
  c_ver->add_flag("--negative-controls", ver.negative_controls,
                  "Add atom-drop and theta-mismatch controls, reported as expected failures");
  c_ver->add_option("--check", ver.checks, "Run only these check ids (repeatable)");
  add_output(c_ver, ver, "JSON report destination");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (c_eig->parsed()) return run_eigenfunction(eig);
    if (c_mea->parsed()) return run_measure(mea);
    if (c_bnd->parsed()) return run_bound_states(bnd);
    if (c_tr->parsed()) return tr.mode == "3d" ? run_transform_3d(tr) : run_transform_1d(tr);
    if (c_ver->parsed()) return run_verify(ver);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
