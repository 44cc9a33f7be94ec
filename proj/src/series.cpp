#include "series.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "abspec/special_fns.hpp"
#include "double_double.hpp"

namespace abspec::detail {
namespace {

using DD = DoubleDouble;

bool converged(double term, int n, double value, double scaled_derivative) {
  const double scale = std::max(std::fabs(value), std::fabs(scaled_derivative));
  return std::fabs(term) * (n + 1) <= kTermCutoff * scale;
}

// Terms grow until |zeta/4| ~ n (n + kappa); convergence is only tested past the peak.
bool past_peak(double z4, int n, double kappa) {
  return std::fabs(z4) < n * std::fabs(kappa + n);
}

SeriesSums chi_series_dd(double kappa, double zeta) {
  const double z4 = -zeta / 4.0;
  DD t(1.0);
  DD sum(1.0);
  DD dsum(0.0);
  for (int n = 1; n <= kMaxTerms; ++n) {
    t = t * z4;
    t = t / static_cast<double>(n);
    t = t / two_sum(kappa, static_cast<double>(n));
    sum += t;
    dsum += t * static_cast<double>(n);
    if (t.hi == 0.0 ||
        (past_peak(z4, n, kappa) && converged(t.hi, n, sum.hi, dsum.hi))) {
      break;
    }
  }
  return {sum.to_double(), dsum.to_double()};
}

SeriesSums y_series_dd(double zeta) {
  const double z4 = -zeta / 4.0;
  DD t(1.0);
  DD harmonic(0.0);
  DD sum(0.0);
  DD dsum(0.0);
  for (int n = 1; n <= kMaxTerms; ++n) {
    const double nd = static_cast<double>(n);
    t = t * z4;
    t = t / (nd * nd);
    harmonic += DD(1.0) / nd;
    const DD term = t * harmonic;
    sum += term;
    dsum += term * nd;
    if (t.hi == 0.0 || (past_peak(z4, n, 0.0) && converged(term.hi, n, sum.hi, dsum.hi))) {
      break;
    }
  }
  return {sum.to_double(), dsum.to_double()};
}

// Miller's algorithm: f_n proportional to J_{nu+n}(x), filled by backward
// recurrence from a start index well past x where J_{nu+n} is negligible, then
// normalized with (x/2)^nu = sum_k (nu+2k) Gamma(nu+k)/k! J_{nu+2k}(x).
// Returns the normalized values J_{nu+n}(x) * (x/2)^-nu * Gamma(nu+1), so that
// entry 0 is the bare chi sum at zeta = x^2. Stable for the minimal solution,
// and no digits are lost to cancellation for large x.
std::vector<double> miller_scaled(double nu, double x) {
  int top = static_cast<int>(x + 40.0 + 12.0 * std::cbrt(x));
  top += top % 2;
  std::vector<double> f(static_cast<std::size_t>(top) + 2, 0.0);
  f[top] = 1.0e-280;
  for (int n = top; n >= 1; --n) {
    f[n - 1] = 2.0 * (nu + n) / x * f[n] - f[n + 1];
    if (std::fabs(f[n - 1]) > 1.0e250) {
      for (int j = n - 1; j <= top + 1; ++j) f[j] *= 1.0e-250;
    }
  }
  const double g1 = gamma_fn(nu + 1.0);
  double norm = g1 * f[0];
  double g = g1;  // Gamma(nu+k)/k!, starting at k = 1
  for (int k = 1; 2 * k <= top; ++k) {
    if (k > 1) g *= (nu + k - 1) / k;
    norm += (nu + 2 * k) * g * f[2 * k];
  }
  const double scale = g1 / norm;
  for (double& v : f) v *= scale;
  return f;
}

SeriesSums chi_series_miller(double kappa, double zeta) {
  const double x = std::sqrt(zeta);
  const std::vector<double> f = miller_scaled(kappa, x);
  // zeta d/dzeta [zeta^{-nu/2} J_nu(sqrt zeta)] = -(x/2) zeta^{-nu/2} J_{nu+1}(x)
  return {f[0], -0.5 * x * f[1]};
}

// Y(x^2) = 2 sum_{k>=1} (-1)^k J_{2k}(x) / k, from the expansion of Y_0.
SeriesSums y_series_miller(double zeta) {
  const double x = std::sqrt(zeta);
  const std::vector<double> j = miller_scaled(0.0, x);
  double value = 0.0;
  double slope = 0.0;
  const std::size_t top = j.size() - 2;
  for (std::size_t k = top / 2; k >= 1; --k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    value += sign * j[2 * k] / static_cast<double>(k);
    slope += sign * (j[2 * k - 1] - j[2 * k + 1]) / static_cast<double>(k);
  }
  return {2.0 * value, 0.5 * x * slope};
}

}  // namespace

SeriesSums chi_series(double kappa, double zeta) {
  if (zeta > kDoubleDoubleLimit) return chi_series_miller(kappa, zeta);
  return chi_series_dd(kappa, zeta);
}

SeriesSums y_series(double zeta) {
  if (zeta > kDoubleDoubleLimit) return y_series_miller(zeta);
  return y_series_dd(zeta);
}

}  // namespace abspec::detail
