#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "polytoep/phasespace.hpp"
#include "polytoep/types.hpp"

namespace polytoep {

/// Symbol on phase space R^2, evaluated at (q, p). Stateless evaluator;
/// `degree` declares the polynomial growth used to size quadrature grids
/// (<= 6 by default policy, 0 for decaying symbols).
struct RealSymbol {
  std::function<complexd(double, double)> eval;
  int degree = 0;

  complexd operator()(double q, double p) const { return eval(q, p); }
};

/// Symbol on the complex plane, evaluated at z = q + i p.
struct ComplexSymbol {
  std::function<complexd(complexd)> eval;
  int degree = 0;

  complexd operator()(complexd z) const { return eval(z); }
};

/// breve: f(q,p) := m(q - i p)  (complex-plane symbol to phase space).
RealSymbol breve(const ComplexSymbol& m);
/// hat: u(z) := u(q, -p) with z = q + i p  (phase space to complex plane).
ComplexSymbol hat(const RealSymbol& u);

/// Pullback by the complex symplectic identification: a given on the
/// Lagrangian parameter zeta, with kappa(q,p) carrying (q,p) to zeta = -q + i p.
RealSymbol kappa_pullback(const ComplexSymbol& a_lambda);
/// Inverse parametrization (push-forward): u(zeta) = a(-Re zeta, Im zeta).
ComplexSymbol lambda_pushforward(const RealSymbol& a);

enum class OperatorKind { weyl, localization, toeplitz, projected_toeplitz, complex_weyl };

std::string to_string(OperatorKind k);
OperatorKind operator_kind_from_string(const std::string& s);

/// Operator truncated to the first n Hermite-type basis elements.
/// entries(row, col) = <Op basis_col, basis_row> (left-linear inner product).
struct OperatorMatrix {
  Eigen::MatrixXcd entries;
  OperatorKind kind = OperatorKind::weyl;
  MultiIndex window_k;  // empty for weyl / complex_weyl
  Hbar hbar;

  OperatorMatrix() = default;
  OperatorMatrix(Eigen::MatrixXcd e, OperatorKind kd, MultiIndex wk, Hbar h);

  int basis_size() const { return static_cast<int>(entries.rows()); }

  /// max |entry| difference over the truncation-stable block (drops the
  /// trailing `edge` rows and columns).
  static double block_max_diff(const OperatorMatrix& a, const OperatorMatrix& b, int edge = 4);
};

/// Quadrature layout used by the matrix builders: symbols and closed-form
/// densities are sampled on this uniform phase-space grid.
PhaseGrid quantize_grid(int basis_size, Hbar hbar, int points_per_axis = 193,
                        double margin = 6.0, int symbol_degree = 0);

// -------------------------------------------------------------------------
// Matrix builders (d = 1).
// -------------------------------------------------------------------------

/// Weyl matrix M[n][m] = int a(z) W(phi_m, phi_n)(z) dz with the closed-form
/// cross-Wigner of Hermite pairs.
OperatorMatrix weyl_matrix(const RealSymbol& a, int basis_size, Hbar hbar,
                           const PhaseGrid* grid = nullptr);

/// Hermite-window localization (anti-Wick) matrix:
/// M[n][m] = int a(z) V_{phi_k} phi_m(z) conj(V_{phi_k} phi_n(z)) dz.
OperatorMatrix localization_matrix(const RealSymbol& a, const MultiIndex& k, int basis_size,
                                   Hbar hbar, const PhaseGrid* grid = nullptr);

/// Same builders with the symbol already sampled on the quadrature grid
/// (used by the composition experiments where symbols are grid fields).
OperatorMatrix weyl_matrix(const PhaseField& a, int basis_size);
OperatorMatrix localization_matrix(const PhaseField& a, const MultiIndex& k, int basis_size);

/// True polyanalytic Toeplitz matrix in the basis {B_k phi_m}: entries equal
/// localization_matrix(breve(m), k) (positive orientation convention).
OperatorMatrix toeplitz_matrix(const ComplexSymbol& m, const MultiIndex& k, int basis_size,
                               Hbar hbar, const PhaseGrid* grid = nullptr);
OperatorMatrix toeplitz_matrix(const PhaseField& breve_m, const MultiIndex& k, int basis_size);

/// k-projected Toeplitz matrix in the analytic basis {B phi_m}; numerically
/// identical entries, different basis tag.
OperatorMatrix projected_toeplitz_matrix(const ComplexSymbol& m, const MultiIndex& k,
                                         int basis_size, Hbar hbar,
                                         const PhaseGrid* grid = nullptr);

/// Complex Weyl matrix of a Lagrangian-parametrized symbol in {B phi_m}:
/// defined through the conjugation identity as weyl_matrix(kappa_pullback(a)).
OperatorMatrix complex_weyl_matrix(const ComplexSymbol& a_lambda, int basis_size, Hbar hbar,
                                   const PhaseGrid* grid = nullptr);

/// Residual of the antiholomorphic-polynomial representation:
/// || weyl(breve p) - sum_j (-1)^j C_{N-1,j} T_j(p) ||_max over the stable
/// block, for p(z) = sum coeffs[j] z^j of degree <= N-1.
double antiholo_weyl_check(const std::vector<complexd>& poly_coeffs, int N, int basis_size,
                           Hbar hbar);

/// Closed-form Hermite-pair phase-space densities (exposed for
/// cross-validation against the gridded transforms).
complexd hermite_cross_wigner_closed(int m, int n, Hbar hbar, double q, double p);
complexd hermite_stft_closed(int window_k, int m, Hbar hbar, double q, double p);

}  // namespace polytoep
