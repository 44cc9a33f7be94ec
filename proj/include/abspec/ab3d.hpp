#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "abspec/measures.hpp"
#include "abspec/theta_spec.hpp"
#include "abspec/transform1d.hpp"

namespace abspec {

struct ChannelInfo {
  int m;
  double kappa;
  bool in_a_phi;
};

/// Channels m in [-m_max, m_max] with kappa_m = m + phi and the A^phi flag.
std::vector<ChannelInfo> channel_set(double phi, int m_max);

/// s = (m, p): angular and axial quantum numbers.
struct ChannelIndex {
  int m;
  double p;

  double kappa(double phi) const { return m + phi; }
};

/// Truncation of S: |m| <= m_max and a Gauss-Legendre rule in p on [-p_max, p_max].
struct ModeGrid {
  int m_max = 0;
  std::vector<double> p_nodes;
  std::vector<double> p_weights;

  static ModeGrid gauss(int m_max, double p_max, std::size_t n_p);
};

/// Cylindrical box [r_min, r_max] x [z_min, z_max] outside of which a field vanishes.
struct CylSupport {
  double r_min;
  double r_max;
  double z_min;
  double z_max;
};

/// A compactly supported field on the complement of the x3-axis, evaluated in
/// cylindrical coordinates (r, angle, x3).
class CylSampledField {
 public:
  virtual ~CylSampledField() = default;
  virtual Complex operator()(double r, double angle, double x3) const = 0;
  virtual CylSupport support() const = 0;
};

using CylFunction = std::function<Complex(double, double, double)>;

/// Field given by an arbitrary callable.
class FunctionField : public CylSampledField {
 public:
  FunctionField(CylFunction f, CylSupport support) : f_(std::move(f)), support_(support) {}
  Complex operator()(double r, double angle, double x3) const override { return f_(r, angle, x3); }
  CylSupport support() const override { return support_; }

 private:
  CylFunction f_;
  CylSupport support_;
};

/// Phi(r, angle, x3) = r^{-1/2} psi(r) chi(x3) e^{i m angle} with Gaussian bumps
/// psi on [a, b] and chi on [z0, z1]. Its channel reduction is exactly
/// delta_{km} chi_hat(p) psi(r).
class SeparableField : public CylSampledField {
 public:
  /// psi must be supported in (0, infinity).
  SeparableField(GaussianBump psi, GaussianBump chi, int m);

  Complex operator()(double r, double angle, double x3) const override;
  CylSupport support() const override;

  int m() const { return m_; }
  const GaussianBump& psi() const { return psi_; }
  double chi(double x3) const;
  double chi_second_derivative(double x3) const;
  /// chi_hat(p) = int chi(x) e^{-ipx} dx, Gaussian integral over the whole line
  /// (the truncated tails change it by under 1e-9 of its peak).
  Complex chi_hat(double p) const;
  /// int |Phi|^2 d^3x = 2 pi ||psi||^2 ||chi||^2, exact for the truncated bumps.
  double norm_squared() const;

 private:
  GaussianBump psi_;
  GaussianBump chi_;
  int m_;
};

/// H^phi applied to a separable field, in closed form:
/// r^{-1/2} e^{i m angle} [(-psi'' + q_{m+phi} psi) chi - psi chi''].
class SeparableHamiltonianField : public CylSampledField {
 public:
  SeparableHamiltonianField(SeparableField base, double phi) : base_(std::move(base)), phi_(phi) {}
  Complex operator()(double r, double angle, double x3) const override;
  CylSupport support() const override { return base_.support(); }

 private:
  SeparableField base_;
  double phi_;
};

/// Phi o G_{alpha beta}^{-1}: rotated by alpha about the x3-axis and shifted by beta along it.
class TransformedField : public CylSampledField {
 public:
  TransformedField(std::shared_ptr<const CylSampledField> base, double alpha, double beta)
      : base_(std::move(base)), alpha_(alpha), beta_(beta) {}
  Complex operator()(double r, double angle, double x3) const override {
    return (*base_)(r, angle - alpha_, x3 - beta_);
  }
  CylSupport support() const override;

 private:
  std::shared_ptr<const CylSampledField> base_;
  double alpha_;
  double beta_;
};

inline constexpr std::size_t kDefaultAngleNodes = 128;
inline constexpr std::size_t kDefaultAxialNodes = 96;
inline constexpr std::size_t kDefaultRadialNodes = 96;

/// Quadrature used for the (angle, x3) integrals of the channel reduction and
/// the radial grid shared by all channels.
struct ReductionOptions {
  std::size_t angle_nodes = kDefaultAngleNodes;
  std::size_t axial_nodes = kDefaultAxialNodes;
  std::size_t radial_nodes = kDefaultRadialNodes;
};

/// Phi~(m, p | r) = sqrt(r)/(2 pi) int dx3 int dangle Phi e^{-i p x3 - i m angle}
/// at the nodes of r_grid (periodic trapezoid in angle, Gauss-Legendre in x3).
RadialFunction radial_reduce(const CylSampledField& field, const ChannelIndex& channel, const RadialGrid& r_grid,
                             const ReductionOptions& options = {});

/// Reductions for every (m, p) of a ModeGrid, sharing one pass over the field samples.
/// Entry [(m + m_max) * n_p + k] holds channel (m, p_k).
std::vector<RadialFunction> radial_reduce_all(const CylSampledField& field, const ModeGrid& grid,
                                              const RadialGrid& r_grid, const ReductionOptions& options = {});

/// W(s, E | x) = e^{i p x3} / (2 pi sqrt(r)) ((x1 + i x2)/r)^m J(s, E | r); x off the x3-axis.
Complex eigenfunction_3d(const ThetaSpec& spec, const ChannelIndex& channel, double energy,
                         const std::array<double, 3>& x);

struct ChannelCoefficients {
  int m;
  double p;
  double p_weight;
  double kappa;
  /// Extension angle used (user representative); zero off A^phi.
  double theta;
  TransformCoefficients coeffs;
};

struct Coefficients3D {
  ModeGrid grid;
  std::vector<ChannelCoefficients> channels;

  /// sum_m int dp ||c(m, p)||^2 with the per-channel measures (Fubini assembly).
  double norm_squared(bool include_atoms = true) const;
  /// Same sum restricted to one angular index.
  double channel_norm_squared(int m, bool include_atoms = true) const;
};

struct ForwardOptions {
  double e_max = 800.0;
  std::size_t node_budget = kDefaultNodeBudget;
  ReductionOptions reduction;
};

/// c(m, p, E) = forward(params(m, p), Phi~(m, p)) over every channel of the grid.
/// Kernel matrices are shared between p nodes with the same extension angle.
Coefficients3D full_forward(const ThetaSpec& spec, const CylSampledField& field, const ModeGrid& grid,
                            const ForwardOptions& options = {});

/// sqrt(sum_m int dp ||a(m, p) - b(m, p)||^2) for coefficient sets on the same grid and measures.
double coefficient_distance(const Coefficients3D& a, const Coefficients3D& b, bool include_atoms = true);

/// Multiplies each (m, p, E) entry by p^2 + E and each atom by p^2 + E_b.
Coefficients3D apply_H(const ThetaSpec& spec, const Coefficients3D& coeffs);

/// sup over (m, p, E) of |c_transformed - e^{-i m alpha - i p beta} c|.
double symmetry_defect(const ThetaSpec& spec, std::shared_ptr<const CylSampledField> field, double alpha,
                       double beta, const ModeGrid& grid, const ForwardOptions& options = {});

/// Same, reusing already computed coefficients of the untransformed field.
double symmetry_defect(const Coefficients3D& base, const Coefficients3D& transformed, double alpha, double beta);

/// int |Phi|^2 d^3x by tensor quadrature on the support box.
double field_norm_squared(const CylSampledField& field, const ReductionOptions& options = {});

struct BoundStateRow {
  int m;
  double kappa;
  double energy;
  double weight;
  double theta;
};

/// One row per A^phi channel with |m| <= m_max (and per theta-table piece) that has a bound state.
std::vector<BoundStateRow> bound_state_table(const ThetaSpec& spec, int m_max);

}  // namespace abspec
