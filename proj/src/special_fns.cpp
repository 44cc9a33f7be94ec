#include "abspec/special_fns.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "abspec/errors.hpp"
#include "series.hpp"

namespace abspec {
namespace {

constexpr double kPi = std::numbers::pi;

void check_zeta(double zeta, const char* who) {
  if (!std::isfinite(zeta) || std::fabs(zeta) > kSeriesDomainBound) {
    std::ostringstream msg;
    msg << who << ": |zeta| = " << std::fabs(zeta) << " exceeds the series domain bound "
        << kSeriesDomainBound << " (r*sqrt|E| <= 100)";
    throw DomainError(msg.str());
  }
}

void check_point(const EvalPoint& p, const char* who) {
  if (!(p.r > 0.0) || !std::isfinite(p.r) || !std::isfinite(p.energy)) {
    std::ostringstream msg;
    msg << who << ": radius must be finite and > 0 (got r = " << p.r << ", E = " << p.energy << ")";
    throw DomainError(msg.str());
  }
}

void check_series_order(double kappa, const char* who) {
  if (!(kappa > -1.0)) {
    std::ostringstream msg;
    msg << who << ": series order kappa = " << kappa << " must exceed -1";
    throw DomainError(msg.str());
  }
}

void check_extension(const Order& order, const char* who) {
  if (!order.extension_family()) {
    std::ostringstream msg;
    msg << who << ": |kappa| = " << std::fabs(order.kappa())
        << " >= 1, the extension family is only defined for |kappa| < 1";
    throw DomainError(msg.str());
  }
}

// X_kappa and zeta X_kappa' at zeta.
struct ChiWithDerivative {
  double chi;
  double zeta_dchi;
};

ChiWithDerivative chi_with_derivative(double kappa, double zeta) {
  const detail::SeriesSums s = detail::chi_series(kappa, zeta);
  const double prefactor = std::pow(2.0, -kappa) / gamma_fn(kappa + 1.0);
  return {prefactor * s.value, prefactor * s.scaled_derivative};
}

ValueWithDerivative u_unchecked(double kappa, const EvalPoint& p) {
  const double zeta = p.r * p.r * p.energy;
  const ChiWithDerivative c = chi_with_derivative(kappa, zeta);
  const double r_pow = std::pow(p.r, kappa - 0.5);
  return {r_pow * p.r * c.chi, r_pow * ((0.5 + kappa) * c.chi + 2.0 * c.zeta_dchi)};
}

struct UWPair {
  ValueWithDerivative u;
  ValueWithDerivative w;
};

UWPair uw_unchecked(double kappa, const EvalPoint& p) {
  if (std::fabs(kappa) < kSmallKappa) {
    const ValueWithDerivative u0 = u_unchecked(0.0, p);
    const detail::SeriesSums y = detail::y_series(p.r * p.r * p.energy);
    const double sr = std::sqrt(p.r);
    const double log_term = std::log(p.r / 2.0) + kEulerGamma;
    const double c = 2.0 / kPi;
    ValueWithDerivative w{c * (log_term * u0.value - sr * y.value),
                          c * (u0.value / p.r + log_term * u0.d_dr -
                               (0.5 * y.value + 2.0 * y.scaled_derivative) / sr)};
    return {u0, w};
  }
  const ValueWithDerivative up = u_unchecked(kappa, p);
  const ValueWithDerivative um = u_unchecked(-kappa, p);
  const double c = std::cos(kPi * kappa);
  const double s = std::sin(kPi * kappa);
  return {up, {(up.value * c - um.value) / s, (up.d_dr * c - um.d_dr) / s}};
}

}  // namespace

Order::Order(double kappa) : kappa_(kappa) {
  if (!std::isfinite(kappa)) throw DomainError("Order: kappa must be finite");
}

double gamma_fn(double x) {
  static constexpr double kG = 7.0;
  static constexpr std::array<double, 9> kCoef = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

  if (!std::isfinite(x)) throw DomainError("gamma_fn: argument must be finite");
  if (x <= 0.0 && x == std::floor(x)) {
    std::ostringstream msg;
    msg << "gamma_fn: pole at x = " << x;
    throw DomainError(msg.str());
  }
  if (x == std::floor(x) && x <= 25.0) {
    double f = 1.0;
    for (int i = 2; i < static_cast<int>(x); ++i) f *= i;
    return f;
  }
  if (x < 0.5) {
    return kPi / (std::sin(kPi * x) * gamma_fn(1.0 - x));
  }
  const double z = x - 1.0;
  double a = kCoef[0];
  const double t = z + kG + 0.5;
  for (int i = 1; i < 9; ++i) a += kCoef[i] / (z + i);
  // t^(z+1/2) split in two halves keeps the power finite up to x ~ 170.
  const double half = std::pow(t, 0.5 * (z + 0.5));
  return std::sqrt(2.0 * kPi) * half * (half * std::exp(-t)) * a;
}

double chi_kappa(const Order& order, double zeta) {
  check_series_order(order.kappa(), "chi_kappa");
  check_zeta(zeta, "chi_kappa");
  return chi_with_derivative(order.kappa(), zeta).chi;
}

double script_y(double zeta) {
  check_zeta(zeta, "script_y");
  return detail::y_series(zeta).value;
}

ValueWithDerivative u_eigen(const Order& order, const EvalPoint& point) {
  check_point(point, "u_eigen");
  check_series_order(order.kappa(), "u_eigen");
  check_zeta(point.r * point.r * point.energy, "u_eigen");
  return u_unchecked(order.kappa(), point);
}

ValueWithDerivative w_eigen(const Order& order, const EvalPoint& point) {
  check_point(point, "w_eigen");
  check_extension(order, "w_eigen");
  check_zeta(point.r * point.r * point.energy, "w_eigen");
  return uw_unchecked(order.kappa(), point).w;
}

ValueWithDerivative u_theta_eigen_canonical(const Order& order, double theta_mod_pi,
                                            long long shift, const EvalPoint& point) {
  check_point(point, "u_theta_eigen");
  check_extension(order, "u_theta_eigen");
  check_zeta(point.r * point.r * point.energy, "u_theta_eigen");
  const UWPair uw = uw_unchecked(order.kappa(), point);
  const double delta = theta_mod_pi - order.theta_kappa();
  const double c = std::cos(delta);
  const double s = std::sin(delta);
  const double sign = (shift % 2 == 0) ? 1.0 : -1.0;
  return {sign * (c * uw.u.value + s * uw.w.value), sign * (c * uw.u.d_dr + s * uw.w.d_dr)};
}

ValueWithDerivative u_theta_eigen(const Order& order, double theta, const EvalPoint& point) {
  const CanonicalAngle a = canonical_angle(theta);
  return u_theta_eigen_canonical(order, a.mod_pi, a.shift, point);
}

CanonicalAngle canonical_angle(double theta) {
  if (!std::isfinite(theta)) throw DomainError("extension angle theta must be finite");
  double reduced = std::fmod(theta, kPi);
  if (reduced < 0.0) reduced += kPi;
  if (reduced >= kPi) reduced = 0.0;
  return {reduced, std::llround((theta - reduced) / kPi)};
}

}  // namespace abspec
