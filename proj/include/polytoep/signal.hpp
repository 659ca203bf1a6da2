#pragma once

#include <Eigen/Dense>
#include <random>

#include "polytoep/types.hpp"

namespace polytoep {

/// Complex samples of a wavefunction on a uniform real grid.
struct SignalGrid {
  Eigen::VectorXcd samples;
  double x0 = 0.0;
  double dx = 1.0;
  Hbar hbar;

  SignalGrid() = default;
  SignalGrid(Eigen::VectorXcd s, double origin, double spacing, Hbar h);

  int size() const { return static_cast<int>(samples.size()); }
  double x(int i) const { return x0 + dx * i; }

  /// L^2 norm by grid quadrature.
  double norm() const { return std::sqrt(norm_sq()); }
  double norm_sq() const { return samples.squaredNorm() * dx; }

  complexd inner(const SignalGrid& other) const;  // <this, other> = int this * conj(other)

  /// Warn when the samples do not decay at the grid ends.
  void check_decay() const;
};

/// Symmetric grid wide enough for Hermite content up to n_max: halfwidth
/// sqrt(2 hbar (2 n_max + 1)) + margin sqrt(hbar).
SignalGrid empty_signal_grid(int n_max, Hbar hbar, int n_points = 512, double margin = 6.0);

/// phi_k sampled on the default grid (or a caller-provided layout).
SignalGrid hermite_state(int k, Hbar hbar, int n_points = 512, double margin = 6.0,
                         int n_max_hint = -1);
SignalGrid hermite_state_on(const SignalGrid& layout, int k);

/// Normalized random combination of phi_0..phi_{n_modes-1} with
/// seed-determined complex coefficients.
SignalGrid random_hermite_combo(int n_modes, unsigned seed, Hbar hbar, int n_points = 512,
                                double margin = 6.0);

/// Exact sample roll by an integer number of grid steps (translation by
/// shift*dx); vacated samples are zero-filled.
SignalGrid translate_samples(const SignalGrid& psi, int shift);

/// d^2/dx^2 by Fourier differentiation (signal must decay at the ends).
SignalGrid spectral_second_derivative(const SignalGrid& psi);

}  // namespace polytoep
