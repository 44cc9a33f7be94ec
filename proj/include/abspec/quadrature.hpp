#pragma once

#include <cstddef>
#include <vector>

namespace abspec {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// n-point Gauss-Legendre rule on [a, b], nodes increasing.
QuadratureRule gauss_legendre(std::size_t n, double a, double b);

/// n-point periodic trapezoid rule on [0, 2 pi): nodes 2 pi k / n, weights 2 pi / n.
QuadratureRule periodic_trapezoid(std::size_t n);

}  // namespace abspec
