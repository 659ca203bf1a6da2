#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <vector>

#include "polytoep/signal.hpp"
#include "polytoep/types.hpp"

namespace polytoep {

/// Rectangular sampling layout in the complex plane.
struct FockGrid {
  GridAxis re;
  GridAxis im;
};

/// Complex samples of F(z) on a rectangular grid in C. Row index runs over
/// Re z, column index over Im z. `weight_applied` states whether the stored
/// values already include the factor e^{-|z|^2/4 hbar}; every producer in
/// this module stores unweighted values.
struct FockField {
  Eigen::MatrixXcd values;
  FockGrid grid;
  Hbar hbar;
  bool weight_applied = false;

  int nre() const { return grid.re.count; }
  int nim() const { return grid.im.count; }
  complexd z(int i, int j) const { return complexd(grid.re[i], grid.im[j]); }
  double cell() const { return grid.re.step * grid.im.step; }
};

bool same_grid(const FockGrid& a, const FockGrid& b, double tol = 1e-12);

/// Symmetric square grid sized like the phase-space default.
FockGrid default_fock_grid(int n_max, Hbar hbar, int points_per_axis = 129,
                           double margin = 6.0);

template <typename F>
FockField sample_fock_field(const FockGrid& g, Hbar hbar, F&& f) {
  FockField out;
  out.grid = g;
  out.hbar = hbar;
  out.values.resize(g.re.count, g.im.count);
  for (int i = 0; i < g.re.count; ++i)
    for (int j = 0; j < g.im.count; ++j) out.values(i, j) = f(complexd(g.re[i], g.im[j]));
  return out;
}

/// L^2_Phi inner product <F, G> = int F conj(G) e^{-|z|^2/2 hbar} dA by grid
/// quadrature (the weight is applied according to each field's flag).
complexd fock_inner(const FockField& F, const FockField& G);
double fock_norm(const FockField& F);

// -------------------------------------------------------------------------
// Transforms
// -------------------------------------------------------------------------

/// Bargmann transform
///   B psi(z) = (2 pi hbar)^{-1/2} (pi hbar)^{-1/4}
///              int psi(x) e^{(x z - z^2/4 - x^2/2)/hbar} dx
/// by trapezoid quadrature on psi's grid; unweighted output.
FockField bargmann(const SignalGrid& psi, const FockGrid& zs);

/// Adjoint transform
///   B* F(x) = (2 pi hbar)^{-1/2} (pi hbar)^{-1/4}
///             int F(w) e^{-(conj(w)-x)^2/2 hbar + conj(w)^2/4 hbar} e^{-|w|^2/2 hbar} dA
/// evaluated on the layout grid's sample positions.
SignalGrid bargmann_adjoint(const FockField& F, const SignalGrid& layout);

/// True polyanalytic Bargmann transform of degree k, computed from the
/// Hermite-window STFT:  B_k f(z) = e^{-i p q/2 hbar + |z|^2/4 hbar}
/// V_{phi_k} f(q, -p) with z = q + i p.
FockField poly_bargmann(const MultiIndex& k, const SignalGrid& psi, const FockGrid& zs);

// -------------------------------------------------------------------------
// Special Hermite basis B_ell phi_m
// -------------------------------------------------------------------------

/// Signed normalization constant c with
///   B_ell phi_m(z) = c z^{m-ell}       L_ell^{(m-ell)}(|z|^2/2 hbar)   (m >= ell)
///   B_ell phi_m(z) = c conj(z)^{ell-m} L_m^{(ell-m)}(|z|^2/2 hbar)    (m <  ell).
/// |c| makes the field unit-norm in L^2_Phi; the sign is pinned against
/// poly_bargmann applied to phi_m at a real reference point (cached).
double special_hermite_constant(int ell, int m, Hbar hbar);

complexd special_hermite_basis_1d(int ell, int m, Hbar hbar, complexd z);

/// Tensor product over dimensions; len(z) = len(ell) = len(m).
complexd special_hermite_basis(const MultiIndex& ell, const MultiIndex& m, Hbar hbar,
                               std::span<const complexd> z);

// -------------------------------------------------------------------------
// Kernels and projections
// -------------------------------------------------------------------------

/// rho^k(z,w) = (2 pi hbar)^{-d} prod_j L_{k_j}(|z_j-w_j|^2/2 hbar) e^{<conj z, w>/2 hbar}.
complexd reproducing_kernel(const MultiIndex& k, std::span<const complexd> z,
                            std::span<const complexd> w, Hbar hbar);
complexd reproducing_kernel_1d(int k, complexd z, complexd w, Hbar hbar);

/// Bergman projection P_k F(z) = <F, rho^k(z, .)>_{L^2_Phi} by kernel
/// quadrature on F's grid; `refine` subdivides each source cell per axis.
FockField bergman_project(const FockField& F, const MultiIndex& k, int refine = 1);

/// Fock translation Theta_{z0} F(w) = e^{(i p0 q0/2 - |z0|^2/4 + z0 w/2)/hbar}
/// F(w - conj(z0)); exact index shift when conj(z0) lies on the lattice,
/// bilinear interpolation of the weighted field otherwise.
FockField fock_translate(complexd z0, const FockField& F);

/// Weighted mixed norm: inner L^p over Re z with weight m e^{-|z|^2/4 hbar},
/// outer L^q over Im z. p, q in [1, inf]; pass INFINITY for sup norms.
double mixed_norm(const FockField& F, double p, double q,
                  const std::function<double(complexd)>& weight);

// -------------------------------------------------------------------------
// Multiplexing codec (d = 1: total degree j is the scalar degree)
// -------------------------------------------------------------------------

/// F = sum_j B_j psi_j over j = 0..n-1. Signals must share grid and hbar.
FockField multiplex(const std::vector<SignalGrid>& signals, const FockGrid& zs);

/// Recover n channels by psi_j = B_j* F (adjoint STFT route); reports
/// crosstalk against `reference` when provided.
std::vector<SignalGrid> demultiplex(const FockField& F, int n, const SignalGrid& layout,
                                    const std::vector<SignalGrid>* reference = nullptr);

// -------------------------------------------------------------------------
// Diagnostics
// -------------------------------------------------------------------------

/// Scaled L^2 residue of the weighted field under `order` applications of
/// dbar (generalized Cauchy-Riemann check: ~0 for polyanalytic degree < order).
double dbar_residue(const FockField& F, int order);

}  // namespace polytoep
