#include "abspec/ab3d.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <utility>

#include "abspec/errors.hpp"
#include "abspec/parallel.hpp"
#include "abspec/quadrature.hpp"

namespace abspec {
namespace {

constexpr double kPi = std::numbers::pi;

QuadratureRule axial_rule(const CylSupport& s, const ReductionOptions& o) {
  return gauss_legendre(o.axial_nodes, s.z_min, s.z_max);
}

void require_support(const CylSupport& s) {
  if (!(s.r_min > 0.0) || !(s.r_max > s.r_min) || !(s.z_max > s.z_min)) {
    std::ostringstream msg;
    msg << "field support r in [" << s.r_min << ", " << s.r_max << "], x3 in [" << s.z_min << ", " << s.z_max
        << "] must be a box with r_min > 0";
    throw DomainError(msg.str());
  }
}

std::size_t mode_count(const ModeGrid& g) { return static_cast<std::size_t>(2 * g.m_max + 1); }

}  // namespace

std::vector<ChannelInfo> channel_set(double phi, int m_max) {
  std::vector<ChannelInfo> out;
  for (int m = -m_max; m <= m_max; ++m) out.push_back({m, m + phi, std::fabs(m + phi) < 1.0});
  return out;
}

ModeGrid ModeGrid::gauss(int m_max, double p_max, std::size_t n_p) {
  if (m_max < 0 || !(p_max > 0.0) || n_p == 0) {
    throw DomainError("ModeGrid: need m_max >= 0, p_max > 0 and at least one p node");
  }
  const QuadratureRule q = gauss_legendre(n_p, -p_max, p_max);
  return {m_max, q.nodes, q.weights};
}

SeparableField::SeparableField(GaussianBump psi, GaussianBump chi, int m) : psi_(psi), chi_(chi), m_(m) {
  if (!(psi_.a() > 0.0)) throw DomainError("SeparableField: radial bump must be supported in r > 0");
}

Complex SeparableField::operator()(double r, double angle, double x3) const {
  const double amp = psi_.value(r) * chi_.value(x3) / std::sqrt(r);
  if (amp == 0.0) return 0.0;
  return std::polar(amp, m_ * angle);
}

CylSupport SeparableField::support() const { return {psi_.a(), psi_.b(), chi_.a(), chi_.b()}; }

double SeparableField::chi(double x3) const { return chi_.value(x3); }

double SeparableField::chi_second_derivative(double x3) const { return chi_.second_derivative(x3); }

Complex SeparableField::chi_hat(double p) const {
  const double s = chi_.sigma();
  return std::polar(s * std::sqrt(2.0 * kPi) * std::exp(-0.5 * s * s * p * p), -p * chi_.center());
}

double SeparableField::norm_squared() const { return 2.0 * kPi * psi_.norm_squared() * chi_.norm_squared(); }

Complex SeparableHamiltonianField::operator()(double r, double angle, double x3) const {
  const GaussianBump& psi = base_.psi();
  const double kappa = base_.m() + phi_;
  const double radial = -psi.second_derivative(r) + (kappa * kappa - 0.25) / (r * r) * psi.value(r);
  const double amp =
      (radial * base_.chi(x3) - psi.value(r) * base_.chi_second_derivative(x3)) / std::sqrt(r);
  if (amp == 0.0) return 0.0;
  return std::polar(1.0, base_.m() * angle) * amp;
}

CylSupport TransformedField::support() const {
  CylSupport s = base_->support();
  s.z_min += beta_;
  s.z_max += beta_;
  return s;
}

std::vector<RadialFunction> radial_reduce_all(const CylSampledField& field, const ModeGrid& grid,
                                              const RadialGrid& r_grid, const ReductionOptions& options) {
  const CylSupport sup = field.support();
  require_support(sup);
  const QuadratureRule angle = periodic_trapezoid(options.angle_nodes);
  const QuadratureRule axial = axial_rule(sup, options);
  const std::size_t n_m = mode_count(grid);
  const std::size_t n_p = grid.p_nodes.size();
  const std::size_t n_a = angle.size();
  const std::size_t n_z = axial.size();
  const std::size_t n_r = r_grid.size();

  // e^{-i m angle_k} and w_l e^{-i p z_l}
  std::vector<Complex> angle_phase(n_m * n_a);
  for (std::size_t mi = 0; mi < n_m; ++mi) {
    const int m = static_cast<int>(mi) - grid.m_max;
    for (std::size_t k = 0; k < n_a; ++k) angle_phase[mi * n_a + k] = std::polar(angle.weights[k], -m * angle.nodes[k]);
  }
  std::vector<Complex> axial_phase(n_p * n_z);
  for (std::size_t pi = 0; pi < n_p; ++pi) {
    for (std::size_t l = 0; l < n_z; ++l) {
      axial_phase[pi * n_z + l] = std::polar(axial.weights[l], -grid.p_nodes[pi] * axial.nodes[l]);
    }
  }

  std::vector<RadialFunction> out(n_m * n_p, RadialFunction{r_grid, std::vector<Complex>(n_r), {}});
  parallel_for(n_r, [&](std::size_t j) {
    const double r = r_grid.nodes[j];
    std::vector<Complex> samples(n_a * n_z);
    for (std::size_t k = 0; k < n_a; ++k) {
      for (std::size_t l = 0; l < n_z; ++l) samples[k * n_z + l] = field(r, angle.nodes[k], axial.nodes[l]);
    }
    std::vector<Complex> fourier(n_z);
    const double scale = std::sqrt(r) / (2.0 * kPi);
    for (std::size_t mi = 0; mi < n_m; ++mi) {
      for (std::size_t l = 0; l < n_z; ++l) {
        Complex s = 0.0;
        for (std::size_t k = 0; k < n_a; ++k) s += angle_phase[mi * n_a + k] * samples[k * n_z + l];
        fourier[l] = s;
      }
      for (std::size_t pi = 0; pi < n_p; ++pi) {
        Complex s = 0.0;
        for (std::size_t l = 0; l < n_z; ++l) s += axial_phase[pi * n_z + l] * fourier[l];
        out[mi * n_p + pi].values[j] = scale * s;
      }
    }
  });
  return out;
}

RadialFunction radial_reduce(const CylSampledField& field, const ChannelIndex& channel, const RadialGrid& r_grid,
                             const ReductionOptions& options) {
  // A one-mode grid centred on the requested m; only its own entry is used.
  ModeGrid single{0, {channel.p}, {1.0}};
  const QuadratureRule angle = periodic_trapezoid(options.angle_nodes);
  struct Shifted : CylSampledField {
    const CylSampledField& base;
    int m;
    Shifted(const CylSampledField& b, int mm) : base(b), m(mm) {}
    Complex operator()(double r, double a, double z) const override { return base(r, a, z) * std::polar(1.0, -m * a); }
    CylSupport support() const override { return base.support(); }
  } shifted(field, channel.m);
  return radial_reduce_all(shifted, single, r_grid, options).front();
}

Complex eigenfunction_3d(const ThetaSpec& spec, const ChannelIndex& channel, double energy,
                         const std::array<double, 3>& x) {
  const double r = std::hypot(x[0], x[1]);
  if (!(r > 0.0)) throw DomainError("eigenfunction_3d: x lies on the x3-axis");
  const ExtensionParams params = channel_params(spec, channel.m, channel.p);
  const double j = transform_kernel(params, energy, r).value;
  const double phase = channel.p * x[2] + channel.m * std::atan2(x[1], x[0]);
  return std::polar(j / (2.0 * kPi * std::sqrt(r)), phase);
}

double Coefficients3D::norm_squared(bool include_atoms) const {
  double s = 0.0;
  for (const ChannelCoefficients& c : channels) s += c.p_weight * c.coeffs.norm_squared(include_atoms);
  return s;
}

double Coefficients3D::channel_norm_squared(int m, bool include_atoms) const {
  double s = 0.0;
  for (const ChannelCoefficients& c : channels) {
    if (c.m == m) s += c.p_weight * c.coeffs.norm_squared(include_atoms);
  }
  return s;
}

Coefficients3D full_forward(const ThetaSpec& spec, const CylSampledField& field, const ModeGrid& grid,
                            const ForwardOptions& options) {
  const CylSupport sup = field.support();
  require_support(sup);
  const RadialGrid r_grid = RadialGrid::gauss(sup.r_min, sup.r_max, options.reduction.radial_nodes);
  const std::vector<RadialFunction> reduced = radial_reduce_all(field, grid, r_grid, options.reduction);
  const std::size_t n_p = grid.p_nodes.size();

  Coefficients3D out{grid, {}};
  out.channels.reserve(reduced.size());
  for (int m = -grid.m_max; m <= grid.m_max; ++m) {
    // Kernel matrices depend on p only through the theta-table piece.
    std::map<std::size_t, RadialTransform> transforms;
    for (std::size_t k = 0; k < n_p; ++k) {
      const double p = grid.p_nodes[k];
      const std::size_t piece = spec.in_a_phi(m) ? spec.entry(m).piece_index(p) : 0;
      auto it = transforms.find(piece);
      if (it == transforms.end()) {
        const ExtensionParams params = channel_params(spec, m, p);
        it = transforms
                 .emplace(piece, RadialTransform(params, discretize(spectral_measure(params), options.e_max,
                                                                    options.node_budget),
                                                 r_grid))
                 .first;
      }
      const RadialTransform& t = it->second;
      const std::size_t idx = static_cast<std::size_t>(m + grid.m_max) * n_p + k;
      out.channels.push_back({m, p, grid.p_weights[k], m + spec.phi(),
                              spec.in_a_phi(m) ? t.params().theta() : 0.0, t.forward(reduced[idx].values)});
    }
  }
  return out;
}

double coefficient_distance(const Coefficients3D& a, const Coefficients3D& b, bool include_atoms) {
  if (a.channels.size() != b.channels.size()) {
    throw ContractError("coefficient_distance: coefficient sets have different channel lists");
  }
  double s = 0.0;
  for (std::size_t c = 0; c < a.channels.size(); ++c) {
    const double d = coefficient_distance(a.channels[c].coeffs, b.channels[c].coeffs, include_atoms);
    s += a.channels[c].p_weight * d * d;
  }
  return std::sqrt(s);
}

Coefficients3D apply_H(const ThetaSpec& spec, const Coefficients3D& coeffs) {
  (void)spec;  // the symbol p^2 + E needs no extension data
  Coefficients3D out = coeffs;
  for (ChannelCoefficients& c : out.channels) {
    const double p2 = c.p * c.p;
    for (std::size_t i = 0; i < c.coeffs.continuum.size(); ++i) c.coeffs.continuum[i] *= p2 + c.coeffs.quad.nodes[i];
    for (std::size_t a = 0; a < c.coeffs.atom_values.size(); ++a) {
      c.coeffs.atom_values[a] *= p2 + c.coeffs.quad.atoms[a].energy;
    }
  }
  return out;
}

double symmetry_defect(const Coefficients3D& base, const Coefficients3D& transformed, double alpha, double beta) {
  if (base.channels.size() != transformed.channels.size()) {
    throw ContractError("symmetry_defect: coefficient sets have different channel lists");
  }
  double worst = 0.0;
  for (std::size_t c = 0; c < base.channels.size(); ++c) {
    const ChannelCoefficients& a = base.channels[c];
    const ChannelCoefficients& b = transformed.channels[c];
    const Complex phase = std::polar(1.0, -a.m * alpha - a.p * beta);
    for (std::size_t i = 0; i < a.coeffs.continuum.size(); ++i) {
      worst = std::max(worst, std::abs(b.coeffs.continuum[i] - phase * a.coeffs.continuum[i]));
    }
    for (std::size_t i = 0; i < a.coeffs.atom_values.size(); ++i) {
      worst = std::max(worst, std::abs(b.coeffs.atom_values[i] - phase * a.coeffs.atom_values[i]));
    }
  }
  return worst;
}

double symmetry_defect(const ThetaSpec& spec, std::shared_ptr<const CylSampledField> field, double alpha,
                       double beta, const ModeGrid& grid, const ForwardOptions& options) {
  const Coefficients3D base = full_forward(spec, *field, grid, options);
  const TransformedField moved(field, alpha, beta);
  return symmetry_defect(base, full_forward(spec, moved, grid, options), alpha, beta);
}

double field_norm_squared(const CylSampledField& field, const ReductionOptions& options) {
  const CylSupport sup = field.support();
  require_support(sup);
  const QuadratureRule radial = gauss_legendre(options.radial_nodes, sup.r_min, sup.r_max);
  const QuadratureRule angle = periodic_trapezoid(options.angle_nodes);
  const QuadratureRule axial = axial_rule(sup, options);
  double s = 0.0;
  for (std::size_t j = 0; j < radial.size(); ++j) {
    double shell = 0.0;
    for (std::size_t k = 0; k < angle.size(); ++k) {
      for (std::size_t l = 0; l < axial.size(); ++l) {
        shell += angle.weights[k] * axial.weights[l] * std::norm(field(radial.nodes[j], angle.nodes[k], axial.nodes[l]));
      }
    }
    s += radial.weights[j] * radial.nodes[j] * shell;
  }
  return s;
}

std::vector<BoundStateRow> bound_state_table(const ThetaSpec& spec, int m_max) {
  std::vector<BoundStateRow> rows;
  for (const auto& [m, entry] : spec.entries()) {
    if (std::abs(m) > m_max) continue;
    const double kappa = m + spec.phi();
    for (std::size_t i = 0; i < entry.piece_count(); ++i) {
      const ExtensionParams params(kappa, entry.piece_value(i), spec.pi_shift(m));
      if (!has_bound_state(params)) continue;
      rows.push_back({m, kappa, *bound_state_energy(params), *atom_weight(params), params.theta()});
    }
  }
  return rows;
}

}  // namespace abspec
