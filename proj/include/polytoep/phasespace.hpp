#pragma once

#include <Eigen/Dense>

#include "polytoep/signal.hpp"
#include "polytoep/types.hpp"

namespace polytoep {

/// Rectangular phase-space sampling layout, q axis then p axis.
struct PhaseGrid {
  GridAxis q;
  GridAxis p;
};

/// Complex samples on a uniform (q, p) grid. Row index runs over q,
/// column index over p.
struct PhaseField {
  Eigen::MatrixXcd values;
  PhaseGrid grid;
  Hbar hbar;

  int nq() const { return grid.q.count; }
  int np() const { return grid.p.count; }
  double q(int i) const { return grid.q[i]; }
  double p(int j) const { return grid.p[j]; }
  double cell() const { return grid.q.step * grid.p.step; }

  complexd integral() const { return values.sum() * cell(); }
  double max_abs() const { return values.cwiseAbs().maxCoeff(); }
};

bool same_grid(const PhaseGrid& a, const PhaseGrid& b, double tol = 1e-12);

/// Symmetric square grid sized for Hermite content up to n_max:
/// halfwidth sqrt(2 hbar (2 n_max + 1)) + margin sqrt(hbar).
PhaseGrid default_phase_grid(int n_max, Hbar hbar, int points_per_axis = 193,
                             double margin = 6.0);

/// Phase grid whose q axis lies on the signal's sample lattice (stride
/// chosen so ~points q-samples cover [-qmax, qmax]); p axis symmetric.
PhaseGrid aligned_phase_grid(const SignalGrid& psi, double qmax, double pmax, int points);

/// Sample an evaluator f(q,p) on a grid.
template <typename F>
PhaseField sample_phase_field(const PhaseGrid& g, Hbar hbar, F&& f) {
  PhaseField out;
  out.grid = g;
  out.hbar = hbar;
  out.values.resize(g.q.count, g.p.count);
  for (int i = 0; i < g.q.count; ++i)
    for (int j = 0; j < g.p.count; ++j) out.values(i, j) = f(g.q[i], g.p[j]);
  return out;
}

// -------------------------------------------------------------------------
// Transforms
// -------------------------------------------------------------------------

/// Short-time Fourier transform
///   V_u psi(q,p) = (2 pi hbar)^{-1/2} int psi(x) conj(u(x-q)) e^{-i p x / hbar} dx
/// by trapezoid quadrature on psi's grid. Every q must land on the shared
/// sample lattice (grid-mismatch error otherwise); p is unconstrained.
PhaseField stft(const SignalGrid& psi, const SignalGrid& window, const PhaseGrid& grid);

/// Cross-Wigner transform
///   W(psi,phi)(q,p) = (2 pi hbar)^{-1} int e^{i p y/hbar} psi(q-y/2) conj(phi(q+y/2)) dy
/// with y on the doubled sample lattice, evaluated per q-row as a
/// zero-padded discrete transform at the requested p values. Warns when the
/// p-range exceeds the alias-free width pi hbar / dx.
PhaseField cross_wigner(const SignalGrid& psi, const SignalGrid& phi, const PhaseGrid& grid);

/// Spectrogram S^window_psi = |V_window psi|^2 (real, non-negative).
PhaseField spectrogram(const SignalGrid& psi, const SignalGrid& window, const PhaseGrid& grid);

/// Husimi function: spectrogram with the Gaussian window g_0 = phi_0.
PhaseField husimi(const SignalGrid& psi, const PhaseGrid& grid);

// -------------------------------------------------------------------------
// Grid calculus (4th-order finite differences, one-sided at the edges)
// -------------------------------------------------------------------------

PhaseField derivative_q(const PhaseField& a, int order);
PhaseField derivative_p(const PhaseField& a, int order);

/// {a,b} = d_q a d_p b - d_p a d_q b.
PhaseField poisson_bracket(const PhaseField& a, const PhaseField& b);

/// Delta_{(k)} a = (2k+1) (d_q^2 + d_p^2) a in d = 1.
PhaseField weighted_laplacian(const PhaseField& a, const MultiIndex& k);

/// <grad_{(k)} a, grad_{(k)} b> = (2k+1) (d_q a d_q b + d_p a d_p b) in d = 1.
PhaseField weighted_gradient_pair(const PhaseField& a, const PhaseField& b,
                                  const MultiIndex& k);

/// Linear (non-circular) convolution (a * b)(z) = int a(w) b(z - w) dw by
/// zero-padded FFT, restricted back to a's grid. b must share the grid
/// spacings and have a symmetric lattice around 0.
PhaseField fft_convolve(const PhaseField& a, const PhaseField& b);

// Elementwise helpers used by the symbol calculus.
PhaseField operator*(const PhaseField& a, const PhaseField& b);
PhaseField operator+(const PhaseField& a, const PhaseField& b);
PhaseField operator-(const PhaseField& a, const PhaseField& b);
PhaseField operator*(complexd c, const PhaseField& a);

}  // namespace polytoep
