#include <cmath>
#include <numbers>

#include "abspec/errors.hpp"
#include "abspec/quadrature.hpp"
#include "abspec/transform1d.hpp"
#include "doctest.h"

using namespace abspec;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEmax = 800.0;

// Sine transform of the Gaussian exp(-(r-c)^2/(2 s^2)) taken over the whole line:
// Im int e^{ikr} g dr = s sqrt(2 pi) e^{-s^2 k^2 / 2} sin(k c). Truncating to
// [c - 6.25 s, c + 6.25 s] changes it by less than 1e-9.
double gaussian_sine_transform(const GaussianBump& g, double k) {
  const double s = g.sigma();
  return s * std::sqrt(2.0 * kPi) * std::exp(-0.5 * s * s * k * k) * std::sin(k * g.center());
}

}  // namespace

TEST_CASE("classify") {
  CHECK(classify(1.0).endpoint_0 == Endpoint::limit_point);
  CHECK(classify(0.99).endpoint_0 == Endpoint::limit_circle);
  CHECK(classify(-2.5).endpoint_0 == Endpoint::limit_point);
  CHECK(classify(0.0).endpoint_inf == Endpoint::limit_point);
}

TEST_CASE("zero input gives zero output") {
  const ExtensionParams p(0.3, 1.0);
  const RadialGrid grid = RadialGrid::gauss(0.5, 3.0, 32);
  const RadialFunction zero = RadialFunction::sample(grid, [](double) { return Complex(0.0); });
  const MeasureQuadrature q = discretize(spectral_measure(p), 50.0, 64);
  const TransformCoefficients c = forward(p, zero, q);
  for (const Complex& v : c.continuum) CHECK(v == Complex(0.0));
  for (const Complex& v : c.atom_values) CHECK(v == Complex(0.0));
  const RadialFunction back = inverse(p, c, grid);
  for (const Complex& v : back.values) CHECK(v == Complex(0.0));
}

TEST_CASE("half-order transform is the sine transform") {
  const GaussianBump g(0.5, 3.0);
  const RadialFunction psi = g.sample(96);
  const ExtensionParams p(0.5, theta_kappa(0.5));
  const TransformCoefficients c = forward(p, psi, discretize(spectral_measure(p), kEmax));
  double worst = 0.0;
  for (std::size_t i = 0; i < c.continuum.size(); ++i) {
    const double k = std::sqrt(c.quad.nodes[i]);
    if (k == 0.0) continue;
    const double expect = std::sqrt(2.0 / kPi) * gaussian_sine_transform(g, k) / k;
    worst = std::max(worst, std::abs(c.continuum[i] - expect));
  }
  CHECK(worst < 1e-8);
  CHECK(c.atom_values.empty());
}

TEST_CASE("Parseval, roundtrip and diagonalization on a bound-state branch") {
  const GaussianBump g(0.5, 3.0);
  const RadialFunction psi = g.sample(96);
  for (const ExtensionParams& p : {ExtensionParams(0.3, kPi / 2), ExtensionParams(0.0, 1.0), ExtensionParams(3.0)}) {
    const RadialTransform t(p, discretize(spectral_measure(p), kEmax), psi.grid);
    const TransformCoefficients c = t.forward(psi);
    CHECK(parseval_defect(psi, c) < 1e-6);
    CHECK(relative_l2_distance(t.inverse(c), psi) < 1e-6);
    const TransformCoefficients lc = t.forward(apply_l_q(p.kappa(), psi));
    CHECK(coefficient_distance(lc, multiply_by_energy(c)) / std::sqrt(psi.norm_squared()) < 1e-5);
    if (p.extension_family() && has_bound_state(p)) {
      // Dropping the atom leaves exactly its share missing.
      const double share = c.quad.atoms[0].weight * std::norm(c.atom_values[0]) / psi.norm_squared();
      CHECK(parseval_defect(psi, c, false) == doctest::Approx(share).epsilon(1e-6));
      if (p.kappa() == 0.3) {
        CHECK(share > 1e-2);
        CHECK(relative_l2_distance(t.inverse(c, {false}), psi) > 1e-2);
      }
    }
  }
}

TEST_CASE("coefficients negate exactly under theta -> theta + pi") {
  const RadialFunction psi = GaussianBump(0.5, 3.0).sample(48);
  const ExtensionParams p(-0.7, 1.0);
  const ExtensionParams q = p.shifted_by_pi(1);
  const TransformCoefficients a = forward(p, psi, discretize(spectral_measure(p), 200.0, 128));
  const TransformCoefficients b = forward(q, psi, discretize(spectral_measure(q), 200.0, 128));
  REQUIRE(a.continuum.size() == b.continuum.size());
  for (std::size_t i = 0; i < a.continuum.size(); ++i) {
    CHECK(a.quad.weights[i] == b.quad.weights[i]);
    CHECK(b.continuum[i] == -a.continuum[i]);
  }
  CHECK(a.norm_squared() == b.norm_squared());
}

TEST_CASE("single-atom synthesis is a decaying bound state") {
  const ExtensionParams p(0.3, kPi / 2);
  const MeasureQuadrature q = discretize(spectral_measure(p), 10.0, 64);
  REQUIRE(q.atoms.size() == 1);
  TransformCoefficients c{q, std::vector<Complex>(q.nodes.size()), {Complex(1.0)}};
  double previous = INFINITY;
  for (double r0 : {2.0, 4.0, 8.0}) {
    const RadialGrid grid = RadialGrid::gauss(r0, 2 * r0, 48);
    const RadialFunction f = inverse(p, c, grid);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double expect = q.atoms[0].weight * transform_kernel(p, q.atoms[0].energy, grid.nodes[j]).value;
      CHECK(std::abs(f.values[j] - expect) <= 1e-14 * std::abs(expect));
    }
    const double mass = f.norm_squared();
    CHECK(mass < 0.2 * previous);
    previous = mass;
  }
}

TEST_CASE("apply_l_q") {
  const RadialGrid grid = RadialGrid::gauss(0.5, 3.0, 16);
  const RadialFunction s = RadialFunction::sample(
      grid, [](double r) { return Complex(std::sin(r)); }, [](double r) { return Complex(-std::sin(r)); });
  const RadialFunction ls = apply_l_q(0.5, s);
  for (std::size_t j = 0; j < grid.size(); ++j) CHECK(std::abs(ls.values[j] - s.values[j]) < 1e-15);

  // u^kappa(0) = c r^{1/2+kappa} solves l_q u = 0.
  for (double k : {0.3, -0.6, 2.0}) {
    const double e = 0.5 + k;
    const RadialFunction u = RadialFunction::sample(
        grid, [e](double r) { return Complex(std::pow(r, e)); },
        [e](double r) { return Complex(e * (e - 1.0) * std::pow(r, e - 2.0)); });
    for (const Complex& v : apply_l_q(k, u).values) CHECK(std::abs(v) < 1e-13);
  }
  const RadialFunction bare = RadialFunction::sample(grid, [](double r) { return Complex(r); });
  CHECK_THROWS_AS(apply_l_q(0.3, bare), ContractError);
}

TEST_CASE("boundary defect") {
  const std::vector<double> probes{1e-1, 1e-2, 1e-3};
  for (double d : boundary_defect(ExtensionParams(0.3, 1.0), 0.0, probes)) CHECK(std::fabs(d) < 1e-15);

  // kappa = 1/2, theta = 0: W ~ -E r / pi to leading order.
  const std::vector<double> d = boundary_defect(ExtensionParams(0.5, 0.0), 1.0, {1e-2, 1e-3});
  CHECK(d[0] / d[1] == doctest::Approx(10.0).epsilon(0.02));
  CHECK(d[1] / (-1e-3 / kPi) == doctest::Approx(1.0).epsilon(0.01));

  // Mismatched angles: W(u_t1(0), u_t2(E)) -> (2/pi) sin(t2 - t1).
  const Order o(0.3);
  const double t1 = 0.4;
  const double t2 = 1.3;
  const double r = 1e-6;
  const double w = wronskian(u_theta_eigen(o, t1, {0.0, r}), u_theta_eigen(o, t2, {2.0, r}));
  CHECK(w == doctest::Approx(2.0 / kPi * std::sin(t2 - t1)).epsilon(1e-3));

  CHECK_THROWS_AS(boundary_defect(ExtensionParams(1.5), 1.0, probes), DomainError);
}

TEST_CASE("forward propagates domain errors") {
  const ExtensionParams p(0.3, 1.0);
  const RadialFunction psi = GaussianBump(0.5, 3.0).sample(16);
  CHECK_THROWS_AS(forward(p, psi, discretize(spectral_measure(p), 2.0e4, 32)), DomainError);
}

TEST_CASE("bump norm is exact") {
  const GaussianBump g(0.5, 3.0);
  CHECK(g.sample(96).norm_squared() == doctest::Approx(g.norm_squared()).epsilon(1e-14));
  CHECK(g.value(0.4) == 0.0);
  CHECK(g.value(g.center()) == 1.0);
}
