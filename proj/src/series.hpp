#pragma once

// Power series behind X_kappa and Y. Both return the bare sums; callers apply
// the 2^-kappa / Gamma(kappa+1) prefactor.

namespace abspec::detail {

// value = sum_n t_n, scaled_derivative = sum_n n t_n (= zeta d/dzeta of value).
struct SeriesSums {
  double value;
  double scaled_derivative;
};

// t_n = (-zeta/4)^n / (n! (kappa+1)_n), kappa > -1.
SeriesSums chi_series(double kappa, double zeta);

// t_n = c_n (-zeta/4)^n / (n!)^2 for n >= 1, c_n = 1 + 1/2 + ... + 1/n.
SeriesSums y_series(double zeta);

// Positive zeta above this use Miller's backward recurrence instead of the
// double-double series, whose cancellation grows like e^{sqrt zeta}.
inline constexpr double kDoubleDoubleLimit = 36.0 * 36.0;

inline constexpr double kTermCutoff = 1.0e-17;
inline constexpr int kMaxTerms = 400;

}  // namespace abspec::detail
