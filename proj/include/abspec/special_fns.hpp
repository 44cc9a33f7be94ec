#pragma once

#include <numbers>

namespace abspec {

/// Largest |zeta| = r^2 |E| accepted by the series evaluators (r sqrt|E| <= 100).
inline constexpr double kSeriesDomainBound = 1.0e4;

/// Below this |kappa| the second solution w^kappa switches to the logarithmic
/// kappa = 0 formula.
inline constexpr double kSmallKappa = 1.0e-6;

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

/// Bessel-type order kappa of a radial problem.
class Order {
 public:
  explicit Order(double kappa);

  double kappa() const { return kappa_; }
  /// theta_kappa = pi kappa / 2, the angle at which u^kappa_theta = u^kappa.
  double theta_kappa() const { return std::numbers::pi * kappa_ / 2.0; }
  /// |kappa| < 1: limit-circle case, the family u^kappa_theta is defined.
  bool extension_family() const { return kappa_ > -1.0 && kappa_ < 1.0; }

 private:
  double kappa_;
};

/// Spectral parameter and radius; r must be strictly positive.
struct EvalPoint {
  double energy;
  double r;
};

struct ValueWithDerivative {
  double value;
  double d_dr;
};

/// Euler gamma function (Lanczos, g = 7, 9 coefficients, reflection below 1/2).
/// Throws DomainError at the poles 0, -1, -2, ...
double gamma_fn(double x);

/// X_kappa(zeta) = 2^-kappa sum_n (-zeta)^n / (Gamma(kappa+n+1) n! 4^n).
/// Requires kappa > -1 and |zeta| <= kSeriesDomainBound.
double chi_kappa(const Order& order, double zeta);

/// Y(zeta) = sum_{n>=1} (-1)^n c_n zeta^n / ((n!)^2 4^n), c_n the harmonic numbers.
double script_y(double zeta);

/// u^kappa(E|r) = r^{1/2+kappa} X_kappa(r^2 E) and its radial derivative.
ValueWithDerivative u_eigen(const Order& order, const EvalPoint& point);

/// Second solution w^kappa(E) = u^kappa_{pi/2 + theta_kappa}(E), |kappa| < 1.
ValueWithDerivative w_eigen(const Order& order, const EvalPoint& point);

/// u^kappa_theta(E) = u^kappa(E) cos(theta - theta_kappa) + w^kappa(E) sin(theta - theta_kappa).
ValueWithDerivative u_theta_eigen(const Order& order, double theta, const EvalPoint& point);

/// Same as u_theta_eigen but with the angle already split as
/// theta = theta_mod_pi + pi * shift; the sign (-1)^shift is applied exactly.
ValueWithDerivative u_theta_eigen_canonical(const Order& order, double theta_mod_pi, long long shift,
                                            const EvalPoint& point);

/// theta = mod_pi + pi * shift with mod_pi in [0, pi).
struct CanonicalAngle {
  double mod_pi;
  long long shift;
};

CanonicalAngle canonical_angle(double theta);

/// Wronskian W_r(f, g) = f g' - f' g at one radius.
inline double wronskian(const ValueWithDerivative& f, const ValueWithDerivative& g) {
  return f.value * g.d_dr - f.d_dr * g.value;
}

}  // namespace abspec
