#include "abspec/transform1d.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "abspec/errors.hpp"
#include "abspec/parallel.hpp"
#include "abspec/quadrature.hpp"

namespace abspec {
namespace {

void require_grid(const RadialGrid& grid, std::size_t values, const char* who) {
  if (grid.nodes.size() != grid.weights.size() || grid.nodes.size() != values) {
    std::ostringstream msg;
    msg << who << ": grid has " << grid.nodes.size() << " nodes and " << grid.weights.size()
        << " weights for " << values << " values";
    throw ContractError(msg.str());
  }
}

}  // namespace

ProblemClass classify(double kappa) {
  return {std::fabs(kappa) < 1.0 ? Endpoint::limit_circle : Endpoint::limit_point, Endpoint::limit_point};
}

RadialGrid RadialGrid::gauss(double a, double b, std::size_t n) {
  if (!(a > 0.0) || !(b > a)) {
    std::ostringstream msg;
    msg << "radial support [" << a << ", " << b << "] must satisfy 0 < a < b";
    throw DomainError(msg.str());
  }
  const QuadratureRule q = gauss_legendre(n, a, b);
  return {q.nodes, q.weights};
}

RadialFunction RadialFunction::sample(const RadialGrid& grid, const RadialProfile& f,
                                      RadialProfile second_derivative) {
  RadialFunction out{grid, {}, std::move(second_derivative)};
  out.values.reserve(grid.size());
  for (double r : grid.nodes) out.values.push_back(f(r));
  return out;
}

double RadialFunction::norm_squared() const {
  require_grid(grid, values.size(), "RadialFunction::norm_squared");
  double s = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) s += grid.weights[j] * std::norm(values[j]);
  return s;
}

double TransformCoefficients::norm_squared(bool include_atoms) const {
  double s = 0.0;
  for (std::size_t i = 0; i < continuum.size(); ++i) s += quad.weights[i] * std::norm(continuum[i]);
  if (include_atoms) {
    for (std::size_t a = 0; a < atom_values.size(); ++a) s += quad.atoms[a].weight * std::norm(atom_values[a]);
  }
  return s;
}

ValueWithDerivative transform_kernel(const ExtensionParams& params, double energy, double r) {
  if (!params.extension_family()) return u_eigen(Order(std::fabs(params.kappa())), {energy, r});
  return u_theta_eigen_canonical(Order(params.kappa()), params.theta_mod_pi(), params.pi_shift(), {energy, r});
}

RadialTransform::RadialTransform(const ExtensionParams& params, MeasureQuadrature quad, RadialGrid grid)
    : params_(params), quad_(std::move(quad)), grid_(std::move(grid)) {
  require_grid(grid_, grid_.nodes.size(), "RadialTransform");
  const std::size_t n_r = grid_.size();
  const std::size_t n_e = quad_.nodes.size();
  kernel_.resize(n_e * n_r);
  parallel_for(n_e, [&](std::size_t i) {
    for (std::size_t j = 0; j < n_r; ++j) {
      kernel_[i * n_r + j] = transform_kernel(params_, quad_.nodes[i], grid_.nodes[j]).value;
    }
  });
  atom_kernel_.resize(quad_.atoms.size() * n_r);
  for (std::size_t a = 0; a < quad_.atoms.size(); ++a) {
    for (std::size_t j = 0; j < n_r; ++j) {
      atom_kernel_[a * n_r + j] = transform_kernel(params_, quad_.atoms[a].energy, grid_.nodes[j]).value;
    }
  }
}

TransformCoefficients RadialTransform::forward(const std::vector<Complex>& values) const {
  require_grid(grid_, values.size(), "RadialTransform::forward");
  const std::size_t n_r = grid_.size();
  std::vector<Complex> weighted(n_r);
  for (std::size_t j = 0; j < n_r; ++j) weighted[j] = grid_.weights[j] * values[j];

  TransformCoefficients out{quad_, std::vector<Complex>(quad_.nodes.size()),
                            std::vector<Complex>(quad_.atoms.size())};
  parallel_for(quad_.nodes.size(), [&](std::size_t i) {
    Complex s = 0.0;
    for (std::size_t j = 0; j < n_r; ++j) s += kernel(i, j) * weighted[j];
    out.continuum[i] = s;
  });
  for (std::size_t a = 0; a < quad_.atoms.size(); ++a) {
    Complex s = 0.0;
    for (std::size_t j = 0; j < n_r; ++j) s += atom_kernel(a, j) * weighted[j];
    out.atom_values[a] = s;
  }
  return out;
}

TransformCoefficients RadialTransform::forward(const RadialFunction& psi) const {
  if (psi.grid.nodes != grid_.nodes) throw ContractError("RadialTransform::forward: psi is sampled on another grid");
  return forward(psi.values);
}

RadialFunction RadialTransform::inverse(const TransformCoefficients& coeffs, const TransformOptions& options) const {
  if (coeffs.continuum.size() != quad_.nodes.size() || coeffs.atom_values.size() != quad_.atoms.size()) {
    throw ContractError("RadialTransform::inverse: coefficients do not match the quadrature");
  }
  const std::size_t n_e = quad_.nodes.size();
  std::vector<Complex> weighted(n_e);
  for (std::size_t i = 0; i < n_e; ++i) weighted[i] = quad_.weights[i] * coeffs.continuum[i];

  RadialFunction out{grid_, std::vector<Complex>(grid_.size()), {}};
  parallel_for(grid_.size(), [&](std::size_t j) {
    Complex s = 0.0;
    for (std::size_t i = 0; i < n_e; ++i) s += kernel(i, j) * weighted[i];
    if (options.include_atoms) {
      for (std::size_t a = 0; a < quad_.atoms.size(); ++a) {
        s += quad_.atoms[a].weight * atom_kernel(a, j) * coeffs.atom_values[a];
      }
    }
    out.values[j] = s;
  });
  return out;
}

TransformCoefficients forward(const ExtensionParams& params, const RadialFunction& psi,
                              const MeasureQuadrature& quad) {
  return RadialTransform(params, quad, psi.grid).forward(psi);
}

RadialFunction inverse(const ExtensionParams& params, const TransformCoefficients& coeffs,
                       const RadialGrid& grid, const TransformOptions& options) {
  return RadialTransform(params, coeffs.quad, grid).inverse(coeffs, options);
}

RadialFunction apply_l_q(double kappa, const RadialFunction& psi) {
  if (!psi.second_derivative) {
    throw ContractError("apply_l_q: psi has no analytic second derivative (finite differences are not used)");
  }
  require_grid(psi.grid, psi.values.size(), "apply_l_q");
  const double c = kappa * kappa - 0.25;
  RadialFunction out{psi.grid, std::vector<Complex>(psi.values.size()), {}};
  for (std::size_t j = 0; j < psi.values.size(); ++j) {
    const double r = psi.grid.nodes[j];
    out.values[j] = -psi.second_derivative(r) + c / (r * r) * psi.values[j];
  }
  return out;
}

std::vector<double> boundary_defect(const ExtensionParams& params, double energy,
                                    const std::vector<double>& r_probe) {
  if (!params.extension_family()) {
    std::ostringstream msg;
    msg << "boundary_defect: |kappa| = " << std::fabs(params.kappa()) << " >= 1 needs no boundary condition";
    throw DomainError(msg.str());
  }
  std::vector<double> out;
  out.reserve(r_probe.size());
  for (double r : r_probe) {
    out.push_back(wronskian(transform_kernel(params, 0.0, r), transform_kernel(params, energy, r)));
  }
  return out;
}

TransformCoefficients multiply_by_energy(const TransformCoefficients& coeffs) {
  TransformCoefficients out = coeffs;
  for (std::size_t i = 0; i < out.continuum.size(); ++i) out.continuum[i] *= out.quad.nodes[i];
  for (std::size_t a = 0; a < out.atom_values.size(); ++a) out.atom_values[a] *= out.quad.atoms[a].energy;
  return out;
}

double parseval_defect(const RadialFunction& psi, const TransformCoefficients& coeffs, bool include_atoms) {
  const double n = psi.norm_squared();
  return std::fabs(n - coeffs.norm_squared(include_atoms)) / n;
}

double coefficient_distance(const TransformCoefficients& a, const TransformCoefficients& b, bool include_atoms) {
  if (a.continuum.size() != b.continuum.size() || a.atom_values.size() != b.atom_values.size() ||
      a.quad.weights.size() != a.continuum.size()) {
    throw ContractError("coefficient_distance: coefficients live on different quadratures");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.continuum.size(); ++i) s += a.quad.weights[i] * std::norm(a.continuum[i] - b.continuum[i]);
  if (include_atoms) {
    for (std::size_t i = 0; i < a.atom_values.size(); ++i) {
      s += a.quad.atoms[i].weight * std::norm(a.atom_values[i] - b.atom_values[i]);
    }
  }
  return std::sqrt(s);
}

double relative_l2_distance(const RadialFunction& a, const RadialFunction& b) {
  require_grid(b.grid, a.values.size(), "relative_l2_distance");
  double diff = 0.0;
  for (std::size_t j = 0; j < a.values.size(); ++j) diff += b.grid.weights[j] * std::norm(a.values[j] - b.values[j]);
  return std::sqrt(diff / b.norm_squared());
}

GaussianBump::GaussianBump(double a, double b)
    : a_(a), b_(b), center_(0.5 * (a + b)), sigma_((b - a) / kWidthsPerSupport) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(b > a)) {
    std::ostringstream msg;
    msg << "gaussian bump support [" << a << ", " << b << "] must satisfy a < b";
    throw DomainError(msg.str());
  }
}

double GaussianBump::value(double r) const {
  if (r < a_ || r > b_) return 0.0;
  const double x = (r - center_) / sigma_;
  return std::exp(-0.5 * x * x);
}

double GaussianBump::second_derivative(double r) const {
  if (r < a_ || r > b_) return 0.0;
  const double x = (r - center_) / sigma_;
  return (x * x - 1.0) / (sigma_ * sigma_) * std::exp(-0.5 * x * x);
}

double GaussianBump::norm_squared() const {
  // integral of exp(-x^2) sigma dx over |x| <= half-width / sigma
  const double h = 0.5 * (b_ - a_) / sigma_;
  return sigma_ * std::sqrt(std::numbers::pi) * std::erf(h);
}

RadialFunction GaussianBump::sample(std::size_t n) const {
  const GaussianBump self = *this;
  return RadialFunction::sample(
      RadialGrid::gauss(a_, b_, n), [self](double r) { return Complex(self.value(r)); },
      [self](double r) { return Complex(self.second_derivative(r)); });
}

}  // namespace abspec
