#pragma once

#include <vector>

namespace fqfi {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss–Legendre rule on [-1, 1], exact for polynomials of degree 2*order - 1.
/// Rules are cached; the returned reference stays valid for the program lifetime.
const QuadratureRule& gauss_legendre(int order);

/// Gauss–Hermite rule for weight exp(-x^2) on the real line.
/// Nodes come from the Jacobi matrix eigenvalues and are polished by Newton
/// steps; weights use the derivative formula so the tail weights keep their
/// relative accuracy.
const QuadratureRule& gauss_hermite(int order);

}  // namespace fqfi
