#pragma once

#include <span>
#include <vector>

#include "polytoep/quadrature.hpp"
#include "polytoep/types.hpp"

namespace polytoep {

// -------------------------------------------------------------------------
// Small combinatorial helpers shared across the closed-form evaluations.
// -------------------------------------------------------------------------

double factorial(int n);
double log_factorial(int n);
double binomial(int n, int k);

// -------------------------------------------------------------------------
// Special functions
// -------------------------------------------------------------------------

/// hbar-scaled harmonic oscillator eigenfunction, 1-d factor:
///   phi_k(x) = (pi hbar)^{-1/4} (2^k k!)^{-1/2} H_k(x/sqrt(hbar)) e^{-x^2/2 hbar}.
/// Evaluated by the normalized recurrence on H_k(t) e^{-t^2/2}, which stays
/// O(1) for all k, so no overflow guard is needed.
double hermite_fn_1d(int k, Hbar hbar, double x);

/// Tensor product over dimensions: dim(x) must equal len(k).
double hermite_fn(const MultiIndex& k, Hbar hbar, std::span<const double> x);

/// Generalized Laguerre polynomial L_n^{(m)}(x) by the three-term recurrence
/// in n. m may be any integer with n + m >= 0.
double laguerre(int n, int m, double x);

/// Terminating Gauss hypergeometric series
///   2F1(a, -k; c; x) = sum_{j=0}^{k} (a)_j (-k)_j / ((c)_j j!) x^j.
/// c must not be a non-positive integer hit before the series terminates.
double hyp2f1_terminating(double a, int k, double c, double x);

/// Closed-form Wigner function of the Hermite state phi_k at z in R^{2d},
/// packed as (q_1, p_1, ..., q_d, p_d):
///   W_{phi_k}(z) = (pi hbar)^{-d} e^{-|z|^2/hbar} (-1)^{|k|}
///                  prod_j L_{k_j}(2 |z_j|^2 / hbar).
double hermite_wigner_closed(const MultiIndex& k, Hbar hbar, std::span<const double> z);

/// d=1 convenience overload at z = (q, p).
double hermite_wigner_closed(int k, Hbar hbar, double q, double p);

}  // namespace polytoep
