#pragma once

#include <vector>

namespace polar_iga {

/// Gauss-Legendre rule on [-1, 1]. Exact for polynomials of degree 2n-1.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  int size() const { return static_cast<int>(nodes.size()); }
};

/// Nodes/weights for the n-point rule, computed by Newton iteration on the
/// Legendre polynomial and cached per n. Supports 1 <= n <= 64.
const GaussRule& gauss_legendre(int n);

/// The same rule mapped to [a, b] (weights scaled by (b-a)/2).
GaussRule gauss_legendre_on(int n, double a, double b);

}  // namespace polar_iga
