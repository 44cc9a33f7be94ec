#include "abspec/measures.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "abspec/errors.hpp"
#include "abspec/quadrature.hpp"
#include "abspec/special_fns.hpp"

namespace abspec {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAngleSnap = 1e-14;

void require_extension(const ExtensionParams& p, const char* who) {
  if (!p.extension_family()) {
    std::ostringstream msg;
    msg << who << ": |kappa| = " << std::fabs(p.kappa())
        << " >= 1 has no extension angle (measure V_kappa, no atoms)";
    throw DomainError(msg.str());
  }
}

double density_limit_circle(double kappa, double theta, double energy) {
  if (kappa == 0.0) {
    const double s = std::sin(theta);
    if (energy == 0.0) return s == 0.0 ? 0.5 : 0.0;
    const double g = std::cos(theta) - std::log(energy) * s / kPi;
    return 0.5 / (g * g + s * s);
  }
  const double a = theta_kappa(kappa);
  // sin(theta -+ theta_kappa) below rounding level is taken as an exact zero: the
  // E^{-|kappa|} branch is so sensitive that a 1e-16 residue moves O(0.1) of mass.
  const auto snap = [](double v) { return std::fabs(v) < kAngleSnap ? 0.0 : v; };
  const double sp = snap(std::sin(theta + a));
  const double sm = snap(std::sin(theta - a));
  if (energy == 0.0) {
    // E^{-kappa} sin^2(theta + a) dominates for kappa > 0, E^{kappa} sin^2(theta - a) otherwise.
    const double lead = kappa > 0.0 ? sp : sm;
    return lead == 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  // The textbook denominator E^-k A^2 - 2 cos(pi k) A B + E^k B^2 cancels to O(k^2)
  // for small k; rewritten as 4 sin^2(a) (G^2 + A B) with every factor O(1).
  // G = (E^{-k/2} A - E^{k/2} B) / (2 sin a). The cosh/sinh form keeps small k
  // accurate, the A/B form avoids cancellation once E^{+-k/2} are far apart.
  const double h = 0.5 * kappa * std::log(energy);
  const double ca = std::cos(a);
  const double sa = std::sin(a);
  const double g = std::fabs(h) <= 1.0 && sp != 0.0 && sm != 0.0
                       ? std::cos(theta) * std::cosh(h) - std::sin(theta) * ca * std::sinh(h) / sa
                       : (std::exp(-h) * sp - std::exp(h) * sm) / (2.0 * sa);
  const double ab = sp * sm;
  return 0.5 * ca * ca / (g * g + ab);
}

}  // namespace

ExtensionParams::ExtensionParams(double kappa, double theta, long long pi_shift)
    : kappa_(kappa), base_theta_(theta), user_shift_(pi_shift) {
  if (!std::isfinite(kappa)) throw DomainError("ExtensionParams: kappa must be finite");
  const CanonicalAngle c = canonical_angle(theta);
  theta_mod_pi_ = c.mod_pi;
  shift_ = c.shift + pi_shift;
}

double ExtensionParams::theta() const {
  return base_theta_ + kPi * static_cast<double>(user_shift_);
}

ExtensionParams ExtensionParams::shifted_by_pi(long long n) const {
  return ExtensionParams(kappa_, base_theta_, user_shift_ + n);
}

double theta_kappa(double kappa) { return kPi * kappa / 2.0; }

bool has_bound_state(const ExtensionParams& params) {
  require_extension(params, "has_bound_state");
  const double a = std::fabs(theta_kappa(params.kappa()));
  const double t = params.theta_mod_pi();
  return t > a && t < kPi - a;
}

std::optional<double> bound_state_energy(const ExtensionParams& params) {
  if (!has_bound_state(params)) return std::nullopt;
  const double t = params.theta_mod_pi();
  const double kappa = params.kappa();
  if (kappa == 0.0) return -std::exp(kPi / std::tan(t));
  const double a = theta_kappa(kappa);
  // log(sin(t + a) / sin(t - a)) without cancellation near kappa = 0.
  const double log_ratio = std::log1p(2.0 * std::cos(t) * std::sin(a) / std::sin(t - a));
  return -std::exp(log_ratio / kappa);
}

std::optional<double> atom_weight(const ExtensionParams& params) {
  const std::optional<double> e = bound_state_energy(params);
  if (!e) return std::nullopt;
  const double t = params.theta_mod_pi();
  const double kappa = params.kappa();
  const double st = std::sin(t);
  if (kappa == 0.0) return kPi * kPi * std::fabs(*e) / (2.0 * st * st);
  const double sa = std::sin(theta_kappa(kappa));
  const double ab = st * st - sa * sa;  // sin(t + a) sin(t - a)
  return kPi * std::sin(kPi * kappa) * std::fabs(*e) / (2.0 * kappa * ab);
}

double ac_density(const ExtensionParams& params, double energy) {
  if (std::isnan(energy)) throw DomainError("ac_density: energy is NaN");
  if (energy < 0.0) return 0.0;
  const double kappa = params.kappa();
  if (!params.extension_family()) return 0.5 * std::pow(energy, std::fabs(kappa));
  return density_limit_circle(kappa, params.theta_mod_pi(), energy);
}

SpectralMeasure::SpectralMeasure(const ExtensionParams& params) : params_(params) {
  if (params_.extension_family()) {
    if (auto e = bound_state_energy(params_)) atoms_.push_back({*e, *atom_weight(params_)});
  }
}

SpectralMeasure spectral_measure(const ExtensionParams& params) { return SpectralMeasure(params); }

double MeasureQuadrature::continuum_mass() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

MeasureQuadrature discretize(const SpectralMeasure& measure, double e_max, std::size_t node_budget) {
  if (!(e_max >= 0.0) || !std::isfinite(e_max)) {
    throw DomainError("discretize: e_max must be finite and >= 0");
  }
  if (node_budget < kPanelPoints) {
    std::ostringstream msg;
    msg << "discretize: node_budget " << node_budget << " < " << kPanelPoints;
    throw DomainError(msg.str());
  }
  MeasureQuadrature q;
  q.atoms = measure.atoms();
  q.e_max = e_max;
  if (e_max == 0.0) return q;

  const double k_max = std::sqrt(e_max);
  const long long budget_panels = static_cast<long long>(node_budget / kPanelPoints);
  const long long uniform = std::max<long long>(1, budget_panels - kGradingLevels);
  const double dk = k_max / static_cast<double>(uniform);

  // k-panels in increasing order: [0, dk 2^-J], ..., [dk/2, dk], then uniform ones.
  std::vector<std::pair<double, double>> panels;
  panels.emplace_back(0.0, std::ldexp(dk, -kGradingLevels));
  for (int j = kGradingLevels; j >= 1; --j) panels.emplace_back(std::ldexp(dk, -j), std::ldexp(dk, 1 - j));
  for (long long i = 1; i < uniform; ++i) {
    panels.emplace_back(dk * static_cast<double>(i),
                        i + 1 == uniform ? k_max : dk * static_cast<double>(i + 1));
  }
  // On the innermost panel k = k1 s^beta: density ~ E^{-|kappa|} gives an
  // integrand ~ s^{2 beta (1 - |kappa|) - 1}, which is regular for this beta.
  const double kappa = measure.params().kappa();
  const double beta = measure.params().extension_family() ? 1.0 / (1.0 - std::fabs(kappa)) : 1.0;
  {
    const double k1 = panels.front().second;
    const QuadratureRule rule = gauss_legendre(kPanelPoints, 0.0, 1.0);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double s = rule.nodes[i];
      const double k = k1 * std::pow(s, beta);
      const double e = k * k;
      const double dk = k1 * beta * std::pow(s, beta - 1.0) * rule.weights[i];
      q.nodes.push_back(e);
      q.weights.push_back(e > 0.0 ? measure.density(e) * 2.0 * k * dk : 0.0);
    }
  }
  for (std::size_t p = 1; p < panels.size(); ++p) {
    const QuadratureRule rule = gauss_legendre(kPanelPoints, panels[p].first, panels[p].second);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double k = rule.nodes[i];
      const double e = k * k;
      q.nodes.push_back(e);
      q.weights.push_back(measure.density(e) * 2.0 * k * rule.weights[i]);
    }
  }
  return q;
}

ExtensionParams channel_params(const ThetaSpec& spec, int m, double p) {
  const double kappa = m + spec.phi();
  if (!spec.in_a_phi(m)) return ExtensionParams(std::fabs(kappa));
  return ExtensionParams(kappa, spec.entry(m).at(p), spec.pi_shift(m));
}

SpectralMeasure channel_measure(double phi, const ThetaSpec& spec, int m, double p) {
  if (phi != spec.phi()) {
    std::ostringstream msg;
    msg << "channel_measure: flux " << phi << " does not match theta spec flux " << spec.phi();
    throw ConfigError(msg.str());
  }
  return spectral_measure(channel_params(spec, m, p));
}

}  // namespace abspec
