#include "polytoep/phasespace.hpp"

#include <cmath>

#include "polytoep/fft.hpp"

namespace polytoep {

namespace {

void require_same_grid(const PhaseField& a, const PhaseField& b, const char* who) {
  if (!same_grid(a.grid, b.grid))
    throw std::invalid_argument(std::string(who) + ": grid mismatch");
}

/// Index of `x` on the lattice origin + i*step; throws when off-lattice.
int lattice_index(double x, double origin, double step, const char* who) {
  double raw = (x - origin) / step;
  double rounded = std::round(raw);
  if (std::abs(raw - rounded) > 1e-9)
    throw std::invalid_argument(std::string(who) +
                                ": requested point is off the sample lattice");
  return static_cast<int>(rounded);
}

}  // namespace

bool same_grid(const PhaseGrid& a, const PhaseGrid& b, double tol) {
  auto close = [tol](double x, double y) { return std::abs(x - y) <= tol * (1.0 + std::abs(x)); };
  return a.q.count == b.q.count && a.p.count == b.p.count && close(a.q.origin, b.q.origin) &&
         close(a.p.origin, b.p.origin) && close(a.q.step, b.q.step) && close(a.p.step, b.p.step);
}

PhaseGrid default_phase_grid(int n_max, Hbar hbar, int points_per_axis, double margin) {
  if (points_per_axis < 32)
    throw std::invalid_argument("default_phase_grid: need at least 32 points per axis");
  double radius =
      std::sqrt(2.0 * hbar.value * (2.0 * n_max + 1.0)) + margin * std::sqrt(hbar.value);
  GridAxis ax = symmetric_axis(radius, points_per_axis);
  return PhaseGrid{ax, ax};
}

PhaseGrid aligned_phase_grid(const SignalGrid& psi, double qmax, double pmax, int points) {
  int stride = std::max(1, static_cast<int>(std::floor(2.0 * qmax / psi.dx / (points - 1))));
  int half = std::min((points - 1) / 2 * stride, psi.size() / 2 - 1);
  half = (half / stride) * stride;
  int center = lattice_index(0.0, psi.x0, psi.dx, "aligned_phase_grid");
  GridAxis qax{psi.x(center - half), stride * psi.dx, 2 * (half / stride) + 1};
  GridAxis pax = symmetric_axis(pmax, qax.count);
  return PhaseGrid{qax, pax};
}

PhaseField stft(const SignalGrid& psi, const SignalGrid& window, const PhaseGrid& grid) {
  if (std::abs(psi.dx - window.dx) > 1e-14 * psi.dx)
    throw std::invalid_argument("stft: psi and window sampling steps differ");
  if (std::abs(psi.hbar.value - window.hbar.value) > 1e-15)
    throw std::invalid_argument("stft: psi and window must share hbar");
  double wnorm = window.norm();
  if (std::abs(wnorm - 1.0) > 1e-6)
    warn("stft: window norm " + std::to_string(wnorm) + " is not 1");

  const int n = psi.size();
  const double h = psi.hbar.value;
  const double pref = std::pow(2.0 * kPi * h, -0.5) * psi.dx;

  PhaseField out;
  out.grid = grid;
  out.hbar = psi.hbar;
  out.values.resize(grid.q.count, grid.p.count);

  std::vector<complexd> prod(n);
  for (int iq = 0; iq < grid.q.count; ++iq) {
    double q = grid.q[iq];
    // offset such that window sample j corresponds to psi sample j + off
    int off = lattice_index(psi.x0 - q, window.x0, window.dx, "stft");
    int lo = std::max(0, -off);
    int hi = std::min(n, window.size() - off);
    std::fill(prod.begin(), prod.end(), complexd(0.0));
    for (int i = lo; i < hi; ++i)
      prod[i] = psi.samples(i) * std::conj(window.samples(i + off));

    for (int jp = 0; jp < grid.p.count; ++jp) {
      double p = grid.p[jp];
      // e^{-i p x_i / hbar} accumulated by phase recurrence over the lattice
      complexd rot = std::exp(complexd(0.0, -p * psi.dx / h));
      complexd phase = std::exp(complexd(0.0, -p * psi.x(lo) / h));
      complexd acc = 0.0;
      for (int i = lo; i < hi; ++i) {
        acc += prod[i] * phase;
        phase *= rot;
      }
      out.values(iq, jp) = pref * acc;
    }
  }
  return out;
}

PhaseField cross_wigner(const SignalGrid& psi, const SignalGrid& phi, const PhaseGrid& grid) {
  if (psi.size() != phi.size() || std::abs(psi.dx - phi.dx) > 1e-14 * psi.dx ||
      std::abs(psi.x0 - phi.x0) > 1e-9 * psi.dx)
    throw std::invalid_argument("cross_wigner: psi and phi must share the grid");
  if (std::abs(psi.hbar.value - phi.hbar.value) > 1e-15)
    throw std::invalid_argument("cross_wigner: psi and phi must share hbar");

  const int n = psi.size();
  const double h = psi.hbar.value;
  double prange = grid.p.last() - grid.p.origin;
  if (prange > kPi * h / psi.dx * (1.0 + 1e-12))
    warn("cross_wigner: p-range exceeds the alias-free width pi*hbar/dx");

  const double pref = std::pow(2.0 * kPi * h, -1.0) * 2.0 * psi.dx;  // dy = 2 dx

  PhaseField out;
  out.grid = grid;
  out.hbar = psi.hbar;
  out.values.resize(grid.q.count, grid.p.count);

  std::vector<complexd> diag;
  for (int iq = 0; iq < grid.q.count; ++iq) {
    int j = lattice_index(grid.q[iq], psi.x0, psi.dx, "cross_wigner");
    if (j < 0 || j >= n) throw std::invalid_argument("cross_wigner: q outside signal grid");
    int kmax = std::min(j, n - 1 - j);
    diag.assign(2 * kmax + 1, complexd(0.0));
    for (int k = -kmax; k <= kmax; ++k)
      diag[k + kmax] = psi.samples(j - k) * std::conj(phi.samples(j + k));

    for (int jp = 0; jp < grid.p.count; ++jp) {
      double p = grid.p[jp];
      complexd rot = std::exp(complexd(0.0, p * 2.0 * psi.dx / h));
      complexd phase = std::exp(complexd(0.0, -p * 2.0 * kmax * psi.dx / h));
      complexd acc = 0.0;
      for (int k = 0; k < 2 * kmax + 1; ++k) {
        acc += diag[k] * phase;
        phase *= rot;
      }
      out.values(iq, jp) = pref * acc;
    }
  }
  return out;
}

PhaseField spectrogram(const SignalGrid& psi, const SignalGrid& window, const PhaseGrid& grid) {
  PhaseField v = stft(psi, window, grid);
  v.values = v.values.cwiseAbs2().cast<complexd>();
  return v;
}

PhaseField husimi(const SignalGrid& psi, const PhaseGrid& grid) {
  SignalGrid g0 = psi;
  for (int i = 0; i < g0.size(); ++i) {
    double t = g0.x(i);
    g0.samples(i) = std::pow(kPi * g0.hbar.value, -0.25) *
                    std::exp(-t * t / (2.0 * g0.hbar.value));
  }
  return spectrogram(psi, g0, grid);
}

PhaseField derivative_q(const PhaseField& a, int order) {
  PhaseField out = a;
  out.values = matrix_axis_derivative(a.values, a.grid.q.step, order, true);
  return out;
}

PhaseField derivative_p(const PhaseField& a, int order) {
  PhaseField out = a;
  out.values = matrix_axis_derivative(a.values, a.grid.p.step, order, false);
  return out;
}

PhaseField poisson_bracket(const PhaseField& a, const PhaseField& b) {
  require_same_grid(a, b, "poisson_bracket");
  PhaseField out = a;
  out.values = derivative_q(a, 1).values.cwiseProduct(derivative_p(b, 1).values) -
               derivative_p(a, 1).values.cwiseProduct(derivative_q(b, 1).values);
  return out;
}

PhaseField weighted_laplacian(const PhaseField& a, const MultiIndex& k) {
  if (k.dim() != 1) throw std::invalid_argument("weighted_laplacian: d = 1 grids only");
  double wk = 2.0 * k[0] + 1.0;
  PhaseField out = a;
  out.values = wk * (derivative_q(a, 2).values + derivative_p(a, 2).values);
  return out;
}

PhaseField weighted_gradient_pair(const PhaseField& a, const PhaseField& b,
                                  const MultiIndex& k) {
  require_same_grid(a, b, "weighted_gradient_pair");
  if (k.dim() != 1) throw std::invalid_argument("weighted_gradient_pair: d = 1 grids only");
  double wk = 2.0 * k[0] + 1.0;
  PhaseField out = a;
  out.values = wk * (derivative_q(a, 1).values.cwiseProduct(derivative_q(b, 1).values) +
                     derivative_p(a, 1).values.cwiseProduct(derivative_p(b, 1).values));
  return out;
}

PhaseField fft_convolve(const PhaseField& a, const PhaseField& b) {
  if (std::abs(a.grid.q.step - b.grid.q.step) > 1e-12 ||
      std::abs(a.grid.p.step - b.grid.p.step) > 1e-12)
    throw std::invalid_argument("fft_convolve: grid spacings differ");
  int b0q = lattice_index(0.0, b.grid.q.origin, b.grid.q.step, "fft_convolve");
  int b0p = lattice_index(0.0, b.grid.p.origin, b.grid.p.step, "fft_convolve");

  const int pq = a.nq() + b.nq();
  const int pp = a.np() + b.np();
  Eigen::MatrixXcd fa = Eigen::MatrixXcd::Zero(pq, pp);
  Eigen::MatrixXcd fb = Eigen::MatrixXcd::Zero(pq, pp);
  fa.topLeftCorner(a.nq(), a.np()) = a.values;
  fb.topLeftCorner(b.nq(), b.np()) = b.values;
  fft_2d(fa, false);
  fft_2d(fb, false);
  fa = fa.cwiseProduct(fb);
  fft_2d(fa, true);

  PhaseField out = a;
  for (int i = 0; i < a.nq(); ++i)
    for (int j = 0; j < a.np(); ++j) out.values(i, j) = fa(i + b0q, j + b0p);
  out.values *= a.cell();
  return out;
}

PhaseField operator*(const PhaseField& a, const PhaseField& b) {
  require_same_grid(a, b, "PhaseField product");
  PhaseField out = a;
  out.values = a.values.cwiseProduct(b.values);
  return out;
}

PhaseField operator+(const PhaseField& a, const PhaseField& b) {
  require_same_grid(a, b, "PhaseField sum");
  PhaseField out = a;
  out.values = a.values + b.values;
  return out;
}

PhaseField operator-(const PhaseField& a, const PhaseField& b) {
  require_same_grid(a, b, "PhaseField difference");
  PhaseField out = a;
  out.values = a.values - b.values;
  return out;
}

PhaseField operator*(complexd c, const PhaseField& a) {
  PhaseField out = a;
  out.values = c * a.values;
  return out;
}

}  // namespace polytoep
