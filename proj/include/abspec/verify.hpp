#pragma once

#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace abspec {

using CheckParams = std::vector<std::pair<std::string, std::string>>;

struct CheckResult {
  std::string check_id;
  CheckParams params;
  double measured = std::numeric_limits<double>::quiet_NaN();
  double tolerance = 0.0;
  /// measured <= tolerance.
  bool passed = false;
  /// Negative control: the theory predicts this check fails.
  bool expected_failure = false;
  /// For controls, the smallest measured value that counts as the predicted failure.
  double control_threshold = 0.0;
  /// Message of an exception raised inside the check; the check then counts as failed.
  std::string error;
};

/// A regular check must pass; a control must fail by at least its threshold.
bool outcome_ok(const CheckResult& r);

struct SuiteTolerances {
  double wronskian = 1e-9;
  double bessel = 1e-10;
  /// Halving h must shrink the residual by a factor within 4 +- this.
  double ode_ratio = 0.4;
  double bound_state = 1e-12;
  double kappa_limit = 1e-6;
  double collapse = 1e-12;
  double parseval = 1e-6;
  double roundtrip = 1e-6;
  double diagonalization = 1e-5;
  double sine_transform = 1e-8;
  double periodicity = 1e-12;
  /// Largest admissible ratio of successive continuity defects.
  double continuity_ratio = 0.999;
  double selectivity = 1e-10;
  double parseval_3d = 1e-5;
  double symmetry = 1e-6;
  double apply_h = 1e-4;
  double control_deficit = 1e-3;
};

struct SuiteConfig {
  /// Orders of the 1D transform checks. The suite is scoped by this list: empty means an empty report.
  std::vector<double> kappas{0.0, 0.3, -0.7, 1.5, 3.0};
  /// Extension angles, used for |kappa| < 1 only.
  std::vector<double> thetas{0.0, 1.0, std::numbers::pi / 2};
  /// Flux values of the 3D checks.
  std::vector<double> phis{0.3, 0.5, 2.0};
  std::vector<double> wronskian_kappas{0.0, 0.25, -0.25, 0.5, -0.5, 0.9, -0.9};
  std::vector<double> wronskian_radii{0.1, 1.0, 10.0};
  std::vector<double> series_kappas{0.0, 0.3, -0.3, 0.9, -0.9};
  std::size_t bessel_samples = 1000;
  double bump_a = 0.5;
  double bump_b = 3.0;
  std::size_t radial_nodes = 96;
  double e_max_start = 100.0;
  /// Lowered to the series domain bound over the bump support when larger.
  double e_max_cap = 1600.0;
  /// E_max of the 3D checks, where the 1D doubling rule settles for the default bump.
  double e_max_3d = 800.0;
  int m_max = 3;
  std::size_t p_nodes = 64;
  double p_max = 10.0;
  /// Half-width of the axial bump of the 3D test field.
  double axial_half_width = 2.5;
  SuiteTolerances tol;
  /// Adds the atom-drop and theta-mismatch controls.
  bool negative_controls = false;
  /// Restricts the run to these check ids; empty runs every check.
  std::vector<std::string> checks;
};

/// Identifiers of every check, one per acceptance criterion, in report order.
const std::vector<std::string>& check_ids();

/// Runs the checks sequentially; results sorted by check id, then params.
std::vector<CheckResult> run_suite(const SuiteConfig& config);

/// JSON array of the results; byte-identical for identical inputs.
std::string report_json(const std::vector<CheckResult>& results);

struct DoublingResult {
  double value;
  double defect;
  /// The cap was reached before successive defects settled.
  bool warning;
};

/// Doubles x from start until defect(x) and defect(2x) differ by less than tol / 10,
/// returning that x; returns the cap with a warning when it never settles.
DoublingResult doubling_rule(const std::function<double(double)>& defect_fn, double start, double cap, double tol);

}  // namespace abspec
