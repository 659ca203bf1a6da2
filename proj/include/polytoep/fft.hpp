#pragma once

#include <Eigen/Dense>
#include <vector>

#include "polytoep/types.hpp"

namespace polytoep {

/// In-place complex FFT wrappers around FFTW (forward: e^{-i 2 pi j k / n}).
void fft_1d(std::vector<complexd>& data, bool inverse);
void fft_2d(Eigen::MatrixXcd& data, bool inverse);

/// Finite-difference weights for the m-th derivative at point x0 from
/// arbitrary nodes (Fornberg's recursion).
std::vector<double> fornberg_weights(double x0, const std::vector<double>& nodes, int m);

/// order-th derivative along one index of a matrix-sampled field on a
/// uniform lattice. Window of order+4 points, shifted one-sided at the
/// edges (4th-order accuracy). along_rows: differentiate in the row index.
Eigen::MatrixXcd matrix_axis_derivative(const Eigen::MatrixXcd& vals, double step, int order,
                                        bool along_rows);

}  // namespace polytoep
