#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "abspec/theta_spec.hpp"

namespace abspec {

/// One radial problem: order kappa and extension angle theta. The angle is kept
/// both as the caller's representative and as (theta mod pi, shift) so that
/// theta and theta + n pi give bit-identical measures and exactly negated kernels.
class ExtensionParams {
 public:
  explicit ExtensionParams(double kappa, double theta = 0.0, long long pi_shift = 0);

  double kappa() const { return kappa_; }
  /// Representative supplied by the caller (base + pi * shift).
  double theta() const;
  double theta_mod_pi() const { return theta_mod_pi_; }
  long long pi_shift() const { return shift_; }
  bool extension_family() const { return kappa_ > -1.0 && kappa_ < 1.0; }

  ExtensionParams shifted_by_pi(long long n) const;

 private:
  double kappa_;
  double base_theta_;
  long long user_shift_;
  double theta_mod_pi_;
  long long shift_;
};

struct Atom {
  double energy;
  double weight;
};

/// theta_kappa = pi kappa / 2.
double theta_kappa(double kappa);

/// True iff theta mod pi lies strictly inside (|theta_kappa|, pi - |theta_kappa|).
/// Throws DomainError for |kappa| >= 1.
bool has_bound_state(const ExtensionParams& params);

/// E_{kappa,theta} (or E_{0,theta}) when a bound state exists.
std::optional<double> bound_state_energy(const ExtensionParams& params);

/// Mass of the Dirac atom at the bound-state energy.
std::optional<double> atom_weight(const ExtensionParams& params);

/// Density of the absolutely continuous part; zero for E < 0, +inf at E = 0 when
/// the density has an integrable singularity there.
double ac_density(const ExtensionParams& params, double energy);

class SpectralMeasure {
 public:
  explicit SpectralMeasure(const ExtensionParams& params);

  const ExtensionParams& params() const { return params_; }
  double density(double energy) const { return ac_density(params_, energy); }
  const std::vector<Atom>& atoms() const { return atoms_; }

 private:
  ExtensionParams params_;
  std::vector<Atom> atoms_;
};

/// V_kappa for |kappa| >= 1, V_{kappa,theta} (density plus at most one atom) otherwise.
SpectralMeasure spectral_measure(const ExtensionParams& params);

inline constexpr std::size_t kPanelPoints = 16;
inline constexpr int kGradingLevels = 12;
inline constexpr std::size_t kDefaultNodeBudget = 512;

/// Discretized measure: continuum nodes with weights density(E) * dE, plus atoms.
struct MeasureQuadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<Atom> atoms;
  double e_max = 0.0;

  double continuum_mass() const;
};

/// Composite 16-point Gauss-Legendre in k = sqrt(E) on [0, sqrt(e_max)].
/// The first k-panel is graded geometrically toward 0 (E ratio 4, 12 levels) and
/// the innermost piece uses k = k1 s^beta, beta = 1/(1-|kappa|), to absorb E^{-|kappa|};
/// the rest are uniform, their count chosen so the total is about node_budget.
MeasureQuadrature discretize(const SpectralMeasure& measure, double e_max,
                             std::size_t node_budget = kDefaultNodeBudget);

/// Parameters of the radial problem in channel (m, p): kappa = m + phi and,
/// inside A^phi, the channel's theta(p).
ExtensionParams channel_params(const ThetaSpec& spec, int m, double p);

/// mu^phi_theta(m, p): V_{|m+phi|} off A^phi, V_{m+phi, theta(m,p)} on A^phi.
SpectralMeasure channel_measure(double phi, const ThetaSpec& spec, int m, double p);

}  // namespace abspec
