#include "abspec/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "abspec/errors.hpp"

namespace abspec {
namespace {

// Newton iteration on P_n from the Chebyshev-like initial guess.
QuadratureRule reference_rule(std::size_t n) {
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / static_cast<double>(j);
      }
      dp = static_cast<double>(n) * (z * p1 - p2) / (z * z - 1.0);
      const double step = p1 / dp;
      z -= step;
      if (std::fabs(step) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

const QuadratureRule& cached_reference(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, QuadratureRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, reference_rule(n)).first;
  return it->second;
}

}  // namespace

QuadratureRule gauss_legendre(std::size_t n, double a, double b) {
  if (n == 0) throw DomainError("gauss_legendre: need at least one node");
  const QuadratureRule& ref = cached_reference(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    rule.nodes[i] = mid + half * ref.nodes[i];
    rule.weights[i] = half * ref.weights[i];
  }
  return rule;
}

QuadratureRule periodic_trapezoid(std::size_t n) {
  if (n == 0) throw DomainError("periodic_trapezoid: need at least one node");
  QuadratureRule rule;
  const double h = 2.0 * std::numbers::pi / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    rule.nodes.push_back(h * static_cast<double>(k));
    rule.weights.push_back(h);
  }
  return rule;
}

}  // namespace abspec
