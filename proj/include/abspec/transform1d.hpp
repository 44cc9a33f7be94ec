#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "abspec/measures.hpp"
#include "abspec/special_fns.hpp"

namespace abspec {

using Complex = std::complex<double>;
using RadialProfile = std::function<Complex(double)>;

enum class Endpoint { limit_point, limit_circle };

/// Weyl classification of l_q with q = (kappa^2 - 1/4)/r^2.
struct ProblemClass {
  Endpoint endpoint_0;
  Endpoint endpoint_inf;
};

/// limit_circle at 0 iff |kappa| < 1; always limit_point at infinity.
ProblemClass classify(double kappa);

/// Gauss-Legendre nodes and weights on a compact [a, b] with a > 0.
struct RadialGrid {
  std::vector<double> nodes;
  std::vector<double> weights;

  static RadialGrid gauss(double a, double b, std::size_t n);
  std::size_t size() const { return nodes.size(); }
};

/// Samples of a complex function on a RadialGrid. second_derivative, when set,
/// evaluates psi'' analytically (needed by apply_l_q).
struct RadialFunction {
  RadialGrid grid;
  std::vector<Complex> values;
  RadialProfile second_derivative;

  static RadialFunction sample(const RadialGrid& grid, const RadialProfile& f,
                               RadialProfile second_derivative = {});
  double norm_squared() const;
};

struct TransformCoefficients {
  MeasureQuadrature quad;
  std::vector<Complex> continuum;
  std::vector<Complex> atom_values;

  /// sum_i w_i |c_i|^2 + sum_atoms weight |c_atom|^2 (atoms only if include_atoms).
  double norm_squared(bool include_atoms = true) const;
};

struct TransformOptions {
  /// Negative control switch: dropping atoms breaks Parseval on bound-state branches.
  bool include_atoms = true;
};

/// u^{|kappa|}(E) for |kappa| >= 1, u^kappa_theta(E) otherwise.
ValueWithDerivative transform_kernel(const ExtensionParams& params, double energy, double r);

/// Kernel matrix of one radial problem on a fixed (E quadrature, r grid) pair.
/// forward is c = K (w * psi); inverse is its adjoint with the measure weights.
class RadialTransform {
 public:
  RadialTransform(const ExtensionParams& params, MeasureQuadrature quad, RadialGrid grid);

  const ExtensionParams& params() const { return params_; }
  const MeasureQuadrature& quad() const { return quad_; }
  const RadialGrid& grid() const { return grid_; }

  /// Requires values sampled on grid().
  TransformCoefficients forward(const std::vector<Complex>& values) const;
  TransformCoefficients forward(const RadialFunction& psi) const;
  RadialFunction inverse(const TransformCoefficients& coeffs, const TransformOptions& options = {}) const;

 private:
  double kernel(std::size_t row, std::size_t col) const { return kernel_[row * grid_.size() + col]; }
  double atom_kernel(std::size_t atom, std::size_t col) const {
    return atom_kernel_[atom * grid_.size() + col];
  }

  ExtensionParams params_;
  MeasureQuadrature quad_;
  RadialGrid grid_;
  std::vector<double> kernel_;
  std::vector<double> atom_kernel_;
};

TransformCoefficients forward(const ExtensionParams& params, const RadialFunction& psi,
                              const MeasureQuadrature& quad);

/// Synthesis on the nodes of grid: continuum integral plus atom terms weighted by atom_weight.
RadialFunction inverse(const ExtensionParams& params, const TransformCoefficients& coeffs,
                       const RadialGrid& grid, const TransformOptions& options = {});

/// -psi'' + (kappa^2 - 1/4)/r^2 psi at the nodes of psi; throws ContractError
/// when psi carries no analytic second derivative.
RadialFunction apply_l_q(double kappa, const RadialFunction& psi);

/// W_r(u^kappa_theta(0), u^kappa_theta(E)) at each probe radius; |kappa| < 1.
std::vector<double> boundary_defect(const ExtensionParams& params, double energy,
                                    const std::vector<double>& r_probe);

/// Coefficients multiplied by E (continuum nodes and atom energies): U h psi.
TransformCoefficients multiply_by_energy(const TransformCoefficients& coeffs);

/// | ||psi||^2 - ||U psi||^2 | / ||psi||^2.
double parseval_defect(const RadialFunction& psi, const TransformCoefficients& coeffs,
                       bool include_atoms = true);

/// ||a - b|| in L^2(measure) for coefficients on the same quadrature.
double coefficient_distance(const TransformCoefficients& a, const TransformCoefficients& b,
                            bool include_atoms = true);

/// ||a - b|| / ||b|| over the grid quadrature.
double relative_l2_distance(const RadialFunction& a, const RadialFunction& b);

/// Truncated Gaussian centred in [a, b] with sigma = (b - a) / 12.5, zero outside.
/// The edges sit 6.25 sigma out, where the profile is about 3.3e-9 of its peak.
/// Used for radial profiles (a > 0) and for axial profiles (any a < b).
class GaussianBump {
 public:
  static constexpr double kWidthsPerSupport = 12.5;

  GaussianBump(double a, double b);

  double a() const { return a_; }
  double b() const { return b_; }
  double center() const { return center_; }
  double sigma() const { return sigma_; }

  double value(double r) const;
  double second_derivative(double r) const;
  /// Exact integral of value^2 over [a, b].
  double norm_squared() const;

  RadialFunction sample(std::size_t n) const;

 private:
  double a_;
  double b_;
  double center_;
  double sigma_;
};

}  // namespace abspec
