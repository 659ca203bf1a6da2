#pragma once

#include <vector>

#include "polytoep/types.hpp"

namespace polytoep {

/// Nodes/weights of a rule integrating f against a fixed weight on the line.
struct QuadratureRule {
  std::vector<double> nodes;    // strictly increasing
  std::vector<double> weights;  // all positive

  int size() const { return static_cast<int>(nodes.size()); }

  template <typename F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

/// Gauss-Hermite rule for weight e^{-x^2}: Golub-Welsch on the Jacobi matrix.
/// Exact for polynomials of degree <= 2n-1. 1 <= n <= 512.
QuadratureRule gauss_hermite(int n);

}  // namespace polytoep
