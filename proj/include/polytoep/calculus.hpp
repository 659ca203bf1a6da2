#pragma once

#include <span>
#include <vector>

#include "polytoep/bargmann.hpp"
#include "polytoep/phasespace.hpp"
#include "polytoep/quantize.hpp"
#include "polytoep/types.hpp"

namespace polytoep {

/// Spectrogram-expansion coefficients (C_{N-1,0}, ..., C_{N-1,N-1}).
struct ExpansionCoeffs {
  int N = 1;
  int d = 1;
  std::vector<double> values;
};

/// C_{k,j} = sum_{m=j}^{k} 2^{-m} binom(d-1+m, d-1+j), k = N-1.
ExpansionCoeffs spec_coefficients(int N, int d);

/// Signed spectrogram combination
///   mu_psi^N = sum_{j<N} (-1)^j C_{N-1,j} S_psi^{phi_j}   (d = 1).
PhaseField mu_density(const SignalGrid& psi, int N, const PhaseGrid& grid);

/// Off-diagonal variant built from V_{phi_j} psi conj(V_{phi_j} phi).
PhaseField mu_density_offdiag(const SignalGrid& psi, const SignalGrid& phi, int N,
                              const PhaseGrid& grid);

/// Closed-form even moment of the Hermite Wigner function:
///   int x^{2a} xi^{2b} W_{phi_k} = 2F1(a+b+1,-k;1;2) (-1)^k hbar^{a+b}
///                                  (2a)!(2b)! / (4^{a+b} a! b!).
double hermite_moment(int alpha, int beta, int k, Hbar hbar);

/// The same moment by tensor Gauss-Hermite quadrature of the closed-form
/// Wigner function (the independent oracle the identity is tested against).
double hermite_moment_bruteforce(int alpha, int beta, int k, Hbar hbar);

/// Expansion coefficient c^{(k)}_alpha = (1/alpha!) prod_j
/// 2F1(alpha_j + alpha_{j+d} + 1, -k_j; 1; 2); len(alpha) = 2 len(k).
double c_alpha(const MultiIndex& k, const MultiIndex& alpha);

/// D_m a = (-1)^{|k|} m! sum_{|alpha|=m} c^{(k)}_alpha d^{2 alpha} a
/// on the grid (m <= 3; stencil depth grows with m).
PhaseField apply_D(int m, const MultiIndex& k, const PhaseField& a);

/// Moyal bidifferential operators (n <= 2):
///   alpha_0 = a b, alpha_1 = (1/2){a,b},
///   alpha_2 = (1/4)(d_q^2 a d_p^2 b - 2 d_q d_p a d_q d_p b + d_p^2 a d_q^2 b),
/// normalized so op(a) op(b) = op(sum_n (i hbar)^n alpha_n(a,b)/1 + ...)
/// reproduces op(q) op(p) = op(q p + i hbar/2).
PhaseField moyal_bidiff(int n, const PhaseField& a, const PhaseField& b, Hbar hbar);

/// Second-order corrected symbol of a localization-operator product:
///   a b + (i hbar/2) {a,b} - (hbar/2) <grad_{(k)} a, grad_{(k)} b>.
PhaseField composition_symbol_2nd(const PhaseField& a, const PhaseField& b,
                                  const MultiIndex& k, Hbar hbar);

/// Weyl symbol of op_aw^{phi_k}(a) to order N: sum_{m<N} hbar^m D_m a/(4^m m!).
PhaseField weyl_corrected_symbol(const PhaseField& a, const MultiIndex& k, int N, Hbar hbar);

/// Second-order inverse: a - (hbar/4) Delta_{(k)} a.
PhaseField aw_inverse_2nd(const PhaseField& a, const MultiIndex& k, Hbar hbar);

/// Corrected complex symbol of a Toeplitz product,
///   m mu - hbar ((2k+2) dm dbar(mu) + 2k dbar(m) dmu),
/// sampled on the grid with Wirtinger stencils (k = 0 reduces to
/// m mu - 2 hbar dm dbar(mu)).
FockField toeplitz_composition_symbol(const ComplexSymbol& m, const ComplexSymbol& mu,
                                      const MultiIndex& k, Hbar hbar, const FockGrid& grid);

/// Coefficient-weighted sum over windows:
///   sum_{j<N} (-1)^j C_{N-1,j} op_aw^{phi_j}(a)   (d = 1).
OperatorMatrix weyl_via_antiwick_matrix(const RealSymbol& a, int N, int basis_size, Hbar hbar,
                                        const PhaseGrid* grid = nullptr);

/// Log-log least-squares fit of an O(hbar^N) error ladder.
struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rsquared = 0.0;
};

/// Fits log(error) vs log(hbar); pairs with error <= 1e-12 are dropped
/// (quadrature floor), at least 3 must survive.
RateFit fit_rate(std::span<const double> hbars, std::span<const double> errors);

}  // namespace polytoep
