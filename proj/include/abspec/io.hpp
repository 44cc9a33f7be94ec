#pragma once

#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "abspec/ab3d.hpp"
#include "abspec/errors.hpp"
#include "abspec/measures.hpp"
#include "abspec/theta_spec.hpp"
#include "abspec/transform1d.hpp"
#include "abspec/verify.hpp"

namespace abspec {

/// Malformed CSV input; line() is 1-based.
class CsvError : public ConfigError {
 public:
  CsvError(const std::string& source, std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Shortest round-trip decimal form, independent of the C locale.
std::string format_real(double x);

/// Locale-independent real: a plain decimal number or [coef]pi[/den] ("pi/2", "-0.25pi", "3pi/4").
double parse_real(const std::string& text);

/// start:stop:count with count >= 1 (count 1 gives just start); equally spaced and inclusive.
std::vector<double> parse_range(const std::string& text);

/// Writes through a temporary file in the same directory and renames it into place.
/// The path "-" writes to standard output.
void write_text_atomic(const std::string& path, const std::string& content);

/// r,u,du_dr for a sampled eigenfunction.
std::string eigenfunction_csv(const std::vector<double>& r, const std::vector<ValueWithDerivative>& values);

/// E,density on the given energies, then "# atom,energy,weight" lines.
std::string measure_csv(const SpectralMeasure& measure, const std::vector<double>& energies);

/// r,re,im.
std::string radial_csv(const RadialFunction& f);

/// E,re,im on the quadrature nodes, then "# atom,energy,weight,re,im" lines.
std::string coefficients_csv(const TransformCoefficients& c);

/// m,p,E,re,im for channels whose norm exceeds rel_cutoff times the largest one,
/// then "# atom,m,p,energy,weight,re,im" lines for the same channels.
std::string coefficients3d_csv(const Coefficients3D& c, double rel_cutoff = 1e-10);

/// m,kappa,E_b,weight,theta.
std::string bound_states_csv(const std::vector<BoundStateRow>& rows);

/// Reads r,re,im (header required, '#' lines skipped). Nodes must be positive and
/// strictly increasing. Gauss-Legendre node sets (as written by this library) get
/// their exact weights back; anything else is integrated with the trapezoid rule.
RadialFunction read_radial_csv(std::istream& in, const std::string& source = "input");
RadialFunction read_radial_csv_file(const std::string& path);

/// Flat key = value file with sections:
///   phi = 0.5
///   [channel.-1]  theta = pi/2                 (constant angle)
///   [channel.0]   breakpoints = 0  values = 0, pi/2   (piecewise in p)
///   [grid]        m_max, p_max, p_nodes, e_max, node_budget, radial_nodes, angle_nodes, axial_nodes
///   [verify]      kappas, thetas, phis, e_max_start, e_max_cap, e_max_3d, negative_controls, tol_<name>
///   [output]      path
struct RunConfig {
  std::optional<double> phi;
  std::map<int, ThetaEntry> channels;
  int m_max = 3;
  double p_max = 10.0;
  std::size_t p_nodes = 64;
  ForwardOptions forward;
  SuiteConfig suite;
  std::string output;

  /// Validates the channel set against phi; throws ConfigError.
  ThetaSpec theta_spec() const;
  ModeGrid mode_grid() const { return ModeGrid::gauss(m_max, p_max, p_nodes); }
};

RunConfig parse_run_config(std::istream& in, const std::string& source = "config");
RunConfig load_run_config(const std::string& path);

}  // namespace abspec
