#pragma once

// Reference evaluations that share no code with the library.

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <numbers>

namespace oracle {

using Big = boost::multiprecision::cpp_bin_float_100;

// Direct summation of X_kappa in 100 digits. Enough for r sqrt(E) <= 100,
// where the largest term is about e^100 ~ 1e43.
inline double chi(double kappa, double zeta, int terms = 400) {
  const Big z(zeta);
  const Big k(kappa);
  Big term = boost::math::tgamma(k + 1);
  term = 1 / term;
  Big sum = term;
  for (int n = 1; n < terms; ++n) {
    term *= -z / (4 * n * (k + n));
    sum += term;
  }
  sum *= boost::multiprecision::pow(Big(2), -k);
  return static_cast<double>(sum);
}

inline double script_y(double zeta, int terms = 400) {
  const Big z(zeta);
  Big term = 1;
  Big harmonic = 0;
  Big sum = 0;
  for (int n = 1; n < terms; ++n) {
    term *= -z / (4 * Big(n) * n);
    harmonic += Big(1) / n;
    sum += harmonic * term;
  }
  return static_cast<double>(sum);
}

// J_{1/2}(x) = sqrt(2/(pi x)) sin x and J_{-1/2}(x) = sqrt(2/(pi x)) cos x.
inline double chi_half(double zeta) {
  const double x = std::sqrt(zeta);
  return std::sqrt(2.0 / std::numbers::pi) * std::sin(x) / x;
}

inline double chi_minus_half(double zeta) {
  return std::sqrt(2.0 / std::numbers::pi) * std::cos(std::sqrt(zeta));
}

inline double chi_bessel(double kappa, double zeta) {
  const double x = std::sqrt(zeta);
  return std::pow(zeta, -kappa / 2.0) * boost::math::cyl_bessel_j(kappa, x);
}

// u^kappa(E|r) for E > 0 through Bessel J.
inline double u_bessel(double kappa, double energy, double r) {
  const double k = std::sqrt(energy);
  return std::sqrt(r) * std::pow(k, -kappa) * boost::math::cyl_bessel_j(kappa, k * r);
}

// w^kappa(E|r) for E > 0. For kappa != 0 the combination (J_k cos - J_-k)/sin
// is -Y_kappa up to the E-dependent normalization of u^{+-kappa}.
inline double w_bessel(double kappa, double energy, double r) {
  const double k = std::sqrt(energy);
  const double pi = std::numbers::pi;
  if (kappa == 0.0) {
    return std::sqrt(r) * (boost::math::cyl_neumann(0.0, k * r) - (2.0 / pi) * std::log(k) *
                                                                    boost::math::cyl_bessel_j(0.0, k * r));
  }
  const double up = u_bessel(kappa, energy, r);
  const double um = u_bessel(-kappa, energy, r);
  return (up * std::cos(pi * kappa) - um) / std::sin(pi * kappa);
}

}  // namespace oracle
