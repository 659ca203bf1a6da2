#include "polytoep/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

namespace polytoep {

QuadratureRule gauss_hermite(int n) {
  if (n < 1 || n > 512)
    throw std::invalid_argument("gauss_hermite: n must be in [1, 512]");

  if (n == 1) return QuadratureRule{{0.0}, {std::sqrt(kPi)}};

  // Jacobi matrix of the (monic) Hermite recurrence: zero diagonal,
  // off-diagonal beta_j = sqrt(j/2).
  Eigen::VectorXd subdiag(n - 1);
  for (int j = 1; j < n; ++j) subdiag(j - 1) = std::sqrt(0.5 * j);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(Eigen::VectorXd::Zero(n), subdiag, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("gauss_hermite: eigensolver failed");

  // Evaluate the weighted orthonormal recurrence h_k(x) = p_k(x) e^{-x^2/2}
  // up to k = n; all iterates are O(1). Returns h_n, h_n' and the
  // Christoffel sum S = sum_{k<n} h_k(x)^2.
  auto weighted_recurrence = [n](double x, double& hn, double& dhn, double& S) {
    double hm1 = 0.0;
    double h = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
    S = 0.0;
    for (int k = 0; k < n; ++k) {
      S += h * h;
      double hp1 = x * std::sqrt(2.0 / (k + 1)) * h - std::sqrt(double(k) / (k + 1)) * hm1;
      hm1 = h;
      h = hp1;
    }
    hn = h;
    // p_n' = sqrt(2n) p_{n-1}  =>  h_n' = sqrt(2n) h_{n-1} - x h_n
    dhn = std::sqrt(2.0 * n) * hm1 - x * h;
  };

  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = solver.eigenvalues()(i);
    double hn, dhn, S;
    // two Newton polish steps on h_n(x) = 0
    for (int it = 0; it < 2; ++it) {
      weighted_recurrence(x, hn, dhn, S);
      if (dhn != 0.0) x -= hn / dhn;
    }
    weighted_recurrence(x, hn, dhn, S);
    rule.nodes[i] = x;
    // w_i = e^{-x^2} / sum_{k<n} p_k(x)^2 = 1/S up to the folded Gaussian
    double w = std::exp(-x * x) / S;
    // Extreme-node weights underflow for n around 380+; clamp to the
    // smallest positive double to keep the positivity contract.
    if (w <= 0.0) w = std::numeric_limits<double>::denorm_min();
    rule.weights[i] = w;
  }
  return rule;
}

}  // namespace polytoep
