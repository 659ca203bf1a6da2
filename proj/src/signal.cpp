#include "polytoep/signal.hpp"

#include <cmath>

#include "polytoep/fft.hpp"
#include "polytoep/hermite.hpp"

namespace polytoep {

SignalGrid::SignalGrid(Eigen::VectorXcd s, double origin, double spacing, Hbar h)
    : samples(std::move(s)), x0(origin), dx(spacing), hbar(h) {
  if (samples.size() < 2) throw std::invalid_argument("SignalGrid: need at least 2 samples");
  if (!(dx > 0.0)) throw std::invalid_argument("SignalGrid: dx must be positive");
}

complexd SignalGrid::inner(const SignalGrid& other) const {
  if (other.size() != size() || std::abs(other.dx - dx) > 1e-14 * dx)
    throw std::invalid_argument("SignalGrid::inner: grid mismatch");
  return (samples.array() * other.samples.array().conjugate()).sum() * dx;
}

void SignalGrid::check_decay() const {
  double peak = samples.cwiseAbs().maxCoeff();
  if (peak == 0.0) return;
  double edge = std::max(std::abs(samples(0)), std::abs(samples(size() - 1)));
  if (edge > 1e-12 * peak)
    warn("SignalGrid: samples do not decay at the grid ends (edge/peak = " +
         std::to_string(edge / peak) + ")");
}

SignalGrid empty_signal_grid(int n_max, Hbar hbar, int n_points, double margin) {
  double halfwidth =
      std::sqrt(2.0 * hbar.value * (2.0 * n_max + 1.0)) + margin * std::sqrt(hbar.value);
  double dx = 2.0 * halfwidth / n_points;
  // FFT-style lattice: x_i = -halfwidth + i dx, contains 0 for even n_points.
  return SignalGrid(Eigen::VectorXcd::Zero(n_points), -halfwidth, dx, hbar);
}

SignalGrid hermite_state_on(const SignalGrid& layout, int k) {
  SignalGrid out = layout;
  for (int i = 0; i < out.size(); ++i)
    out.samples(i) = hermite_fn_1d(k, out.hbar, out.x(i));
  return out;
}

SignalGrid hermite_state(int k, Hbar hbar, int n_points, double margin, int n_max_hint) {
  int n_max = n_max_hint > 0 ? n_max_hint : k;
  return hermite_state_on(empty_signal_grid(n_max, hbar, n_points, margin), k);
}

SignalGrid random_hermite_combo(int n_modes, unsigned seed, Hbar hbar, int n_points,
                                double margin) {
  if (n_modes < 1) throw std::invalid_argument("random_hermite_combo: n_modes >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<complexd> coeff(n_modes);
  double nrm = 0.0;
  for (auto& c : coeff) {
    c = complexd(gauss(rng), gauss(rng));
    nrm += std::norm(c);
  }
  nrm = std::sqrt(nrm);

  SignalGrid out = empty_signal_grid(n_modes - 1, hbar, n_points, margin);
  for (int i = 0; i < out.size(); ++i) {
    complexd v = 0.0;
    for (int m = 0; m < n_modes; ++m)
      v += coeff[m] / nrm * hermite_fn_1d(m, hbar, out.x(i));
    out.samples(i) = v;
  }
  return out;
}

SignalGrid translate_samples(const SignalGrid& psi, int shift) {
  SignalGrid out = psi;
  out.samples.setZero();
  for (int i = 0; i < psi.size(); ++i) {
    int j = i + shift;
    if (j >= 0 && j < psi.size()) out.samples(j) = psi.samples(i);
  }
  return out;
}

SignalGrid spectral_second_derivative(const SignalGrid& psi) {
  const int n = psi.size();
  std::vector<complexd> buf(psi.samples.data(), psi.samples.data() + n);
  fft_1d(buf, false);
  const double dk = 2.0 * kPi / (n * psi.dx);
  for (int j = 0; j < n; ++j) {
    int js = (j <= n / 2) ? j : j - n;
    double kappa = dk * js;
    buf[j] *= -kappa * kappa;
  }
  fft_1d(buf, true);
  SignalGrid out = psi;
  for (int i = 0; i < n; ++i) out.samples(i) = buf[i];
  return out;
}

}  // namespace polytoep
