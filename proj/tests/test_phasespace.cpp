#include <cmath>

#include "doctest.h"
#include "polytoep/hermite.hpp"
#include "polytoep/phasespace.hpp"
#include "polytoep/signal.hpp"

using namespace polytoep;

namespace {

PhaseGrid test_grid(const SignalGrid& psi, int n_max, int points = 97) {
  double r = std::sqrt(2.0 * psi.hbar.value * (2.0 * n_max + 1.0)) +
             6.0 * std::sqrt(psi.hbar.value);
  return aligned_phase_grid(psi, r, r, points);
}

}  // namespace

TEST_CASE("stft values and Moyal identity") {
  Hbar hb(1.0);
  SignalGrid phi0 = hermite_state(0, hb, 512, 8.0, 6);
  PhaseGrid g = test_grid(phi0, 6);

  PhaseField v = stft(phi0, phi0, g);
  // value at the origin: (2 pi hbar)^{-1/2} <phi_0, phi_0>
  int iq0 = -1, jp0 = -1;
  for (int i = 0; i < g.q.count; ++i)
    if (std::abs(g.q[i]) < 1e-12) iq0 = i;
  for (int j = 0; j < g.p.count; ++j)
    if (std::abs(g.p[j]) < 1e-12) jp0 = j;
  REQUIRE(iq0 >= 0);
  REQUIRE(jp0 >= 0);
  CHECK(std::abs(v.values(iq0, jp0) - std::pow(2.0 * kPi, -0.5)) < 1e-10);

  // |V_{phi_k} phi_k(0,0)| = (2 pi hbar)^{-1/2} for k <= 5
  for (int k = 1; k <= 5; ++k) {
    SignalGrid phik = hermite_state_on(phi0, k);
    PhaseField vk = stft(phik, phik, g);
    CHECK(std::abs(std::abs(vk.values(iq0, jp0)) - std::pow(2.0 * kPi * hb.value, -0.5)) <
          1e-10);
  }

  // Moyal identity for a random combination against Hermite windows
  Hbar hs(0.25);
  SignalGrid psi = random_hermite_combo(5, 7u, hs, 512, 8.0);
  PhaseGrid gs = test_grid(psi, 10, 129);
  for (int k = 0; k <= 4; ++k) {
    SignalGrid w = hermite_state_on(psi, k);
    PhaseField vk = stft(psi, w, gs);
    double mass = vk.values.cwiseAbs2().sum() * vk.cell();
    CHECK(std::abs(mass - 1.0) < 1e-5);
  }
}

TEST_CASE("stft grid mismatch errors") {
  Hbar hb(1.0);
  SignalGrid psi = hermite_state(0, hb, 256, 7.0, 4);
  SignalGrid w = psi;
  w.dx *= 2.0;
  PhaseGrid g = test_grid(psi, 4, 33);
  CHECK_THROWS_AS(stft(psi, w, g), std::invalid_argument);

  // off-lattice q axis
  PhaseGrid bad = g;
  bad.q.origin += 0.37 * psi.dx;
  CHECK_THROWS_AS(stft(psi, psi, bad), std::invalid_argument);

  SignalGrid w2 = psi;
  w2.hbar = Hbar(0.5);
  CHECK_THROWS_AS(stft(psi, w2, g), std::invalid_argument);
}

TEST_CASE("cross-Wigner values, marginals and symmetry") {
  Hbar hb(1.0);
  SignalGrid phi0 = hermite_state(0, hb, 512, 8.0, 8);
  PhaseGrid g = test_grid(phi0, 8, 129);
  PhaseField w0 = cross_wigner(phi0, phi0, g);

  int iq0 = -1, jp0 = -1;
  for (int i = 0; i < g.q.count; ++i)
    if (std::abs(g.q[i]) < 1e-12) iq0 = i;
  for (int j = 0; j < g.p.count; ++j)
    if (std::abs(g.p[j]) < 1e-12) jp0 = j;
  CHECK(std::abs(w0.values(iq0, jp0).real() - 1.0 / kPi) < 1e-8);

  // normalization and q-marginal for a random state
  Hbar hs(0.3);
  SignalGrid psi = random_hermite_combo(4, 3u, hs, 512, 8.0);
  PhaseGrid gs = test_grid(psi, 8, 129);
  PhaseField w = cross_wigner(psi, psi, gs);
  CHECK(std::abs(w.integral().real() - psi.norm_sq()) < 1e-6);
  CHECK(w.values.imag().cwiseAbs().maxCoeff() < 1e-10);

  for (int i = 0; i < gs.q.count; i += 8) {
    complexd marg = 0.0;
    for (int j = 0; j < gs.p.count; ++j) marg += w.values(i, j);
    marg *= gs.p.step;
    // locate psi sample at q_i
    int si = static_cast<int>(std::round((gs.q[i] - psi.x0) / psi.dx));
    CHECK(std::abs(marg.real() - std::norm(psi.samples(si))) < 1e-6);
  }

  // conjugate symmetry of the cross transform
  SignalGrid phi = random_hermite_combo(4, 11u, hs, 512, 8.0);
  PhaseField wab = cross_wigner(psi, phi, gs);
  PhaseField wba = cross_wigner(phi, psi, gs);
  CHECK((wab.values - wba.values.conjugate()).cwiseAbs().maxCoeff() < 1e-10);

  // closed form for Hermite states, pointwise
  for (int k : {0, 1, 2}) {
    SignalGrid phik = hermite_state_on(phi0, k);
    PhaseField wk = cross_wigner(phik, phik, g);
    double worst = 0.0;
    for (int i = 0; i < g.q.count; i += 4)
      for (int j = 0; j < g.p.count; j += 4)
        worst = std::max(worst, std::abs(wk.values(i, j).real() -
                                         hermite_wigner_closed(k, hb, g.q[i], g.p[j])));
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("cross-Wigner covariance under lattice translation") {
  Hbar hb(0.5);
  SignalGrid psi = random_hermite_combo(3, 19u, hb, 512, 9.0);
  PhaseGrid g = test_grid(psi, 8, 97);
  PhaseField w = cross_wigner(psi, psi, g);

  int stride = static_cast<int>(std::round(g.q.step / psi.dx));
  int shift_cells = 3;
  SignalGrid moved = translate_samples(psi, shift_cells * stride);
  PhaseField wm = cross_wigner(moved, moved, g);

  double worst = 0.0;
  for (int i = 0; i + shift_cells < g.q.count; ++i)
    for (int j = 0; j < g.p.count; ++j)
      worst = std::max(worst,
                       std::abs(wm.values(i + shift_cells, j) - w.values(i, j)));
  CHECK(worst < 1e-4);
}

TEST_CASE("spectrogram: closed form, positivity, convolution identity") {
  Hbar hb(0.4);
  SignalGrid phi0 = hermite_state(0, hb, 512, 8.0, 8);
  PhaseGrid g = test_grid(phi0, 8, 97);

  // Hermite spectrograms against the Gaussian-window closed form
  for (int k = 0; k <= 4; ++k) {
    SignalGrid phik = hermite_state_on(phi0, k);
    PhaseField s = spectrogram(phik, phi0, g);
    double worst = 0.0;
    for (int i = 0; i < g.q.count; i += 3)
      for (int j = 0; j < g.p.count; j += 3) {
        double r2 = g.q[i] * g.q[i] + g.p[j] * g.p[j];
        double ref = std::pow(2.0 * kPi * hb.value, -1.0) *
                     std::exp(-0.5 * r2 / hb.value) * std::pow(r2, k) /
                     (std::pow(2.0 * hb.value, k) * factorial(k));
        worst = std::max(worst, std::abs(s.values(i, j).real() - ref));
      }
    CHECK(worst < 1e-6);
    CHECK(s.values.real().minCoeff() > -1e-12);
  }

  // unit mass for a normalized state
  SignalGrid psi = random_hermite_combo(5, 23u, hb, 512, 8.0);
  PhaseGrid gs = test_grid(psi, 10, 129);
  PhaseField s = spectrogram(psi, hermite_state_on(psi, 0), gs);
  CHECK(std::abs(s.integral().real() - 1.0) < 1e-6);

  // S^{phi_k}_psi = W_psi * W_{phi_k} by FFT convolution
  PhaseField w = cross_wigner(psi, psi, gs);
  for (int k = 0; k <= 3; ++k) {
    SignalGrid phik = hermite_state_on(psi, k);
    PhaseField sk = spectrogram(psi, phik, gs);
    PhaseGrid kg{symmetric_axis(gs.q.step * ((gs.q.count - 1) / 2), gs.q.count),
                 symmetric_axis(gs.p.step * ((gs.p.count - 1) / 2), gs.p.count)};
    PhaseField wk = sample_phase_field(kg, hb, [&](double q, double p) {
      return hermite_wigner_closed(k, hb, q, p);
    });
    PhaseField conv = fft_convolve(w, wk);
    CHECK((sk.values - conv.values).cwiseAbs().maxCoeff() < 1e-5);
  }
}

TEST_CASE("husimi: dual route, zeros and peak") {
  Hbar hb(0.6);
  SignalGrid psi = random_hermite_combo(4, 31u, hb, 512, 8.0);
  PhaseGrid g = test_grid(psi, 8, 97);

  PhaseField hus = husimi(psi, g);
  // Gaussian-convolution route: W_psi * W_{phi_0}
  PhaseField w = cross_wigner(psi, psi, g);
  PhaseGrid kg{symmetric_axis(g.q.step * ((g.q.count - 1) / 2), g.q.count),
               symmetric_axis(g.p.step * ((g.p.count - 1) / 2), g.p.count)};
  PhaseField w0 = sample_phase_field(kg, hb, [&](double q, double p) {
    return hermite_wigner_closed(0, hb, q, p);
  });
  PhaseField conv = fft_convolve(w, w0);
  CHECK((hus.values - conv.values).cwiseAbs().maxCoeff() < 1e-6);

  SignalGrid phi1 = hermite_state_on(psi, 1);
  PhaseField h1 = husimi(phi1, g);
  SignalGrid phi0 = hermite_state_on(psi, 0);
  PhaseField h0 = husimi(phi0, g);
  int iq0 = (g.q.count - 1) / 2, jp0 = (g.p.count - 1) / 2;
  REQUIRE(std::abs(g.q[iq0]) < 1e-12);
  CHECK(std::abs(h1.values(iq0, jp0)) < 1e-8);
  CHECK(std::abs(h0.values(iq0, jp0).real() - std::pow(2.0 * kPi * hb.value, -1.0)) < 1e-8);
}

TEST_CASE("grid calculus: Poisson bracket and weighted operators") {
  Hbar hb(1.0);
  PhaseGrid g{symmetric_axis(3.0, 97), symmetric_axis(3.0, 97)};
  PhaseField fq = sample_phase_field(g, hb, [](double q, double) { return q; });
  PhaseField fp = sample_phase_field(g, hb, [](double, double p) { return p; });
  PhaseField fq2 = sample_phase_field(g, hb, [](double q, double) { return q * q; });
  PhaseField fp2 = sample_phase_field(g, hb, [](double, double p) { return p * p; });
  PhaseField ho = fq2 + fp2;

  PhaseField pb = poisson_bracket(fq, fp);
  double worst = 0.0;
  for (int i = 4; i < g.q.count - 4; ++i)
    for (int j = 4; j < g.p.count - 4; ++j)
      worst = std::max(worst, std::abs(pb.values(i, j) - 1.0));
  CHECK(worst < 1e-10);

  PhaseField pb2 = poisson_bracket(fq2, fp2);
  worst = 0.0;
  for (int i = 0; i < g.q.count; ++i)
    for (int j = 0; j < g.p.count; ++j)
      worst = std::max(worst, std::abs(pb2.values(i, j) - 4.0 * g.q[i] * g.p[j]));
  CHECK(worst < 1e-8);

  PhaseField self = poisson_bracket(ho, ho);
  CHECK(self.max_abs() < 1e-12);

  PhaseField lap0 = weighted_laplacian(ho, MultiIndex{0});
  PhaseField lap1 = weighted_laplacian(ho, MultiIndex{1});
  CHECK((lap0.values.array() - 4.0).abs().maxCoeff() < 1e-8);
  CHECK((lap1.values.array() - 12.0).abs().maxCoeff() < 1e-8);

  PhaseField cross = weighted_gradient_pair(fq, fp, MultiIndex{2});
  CHECK(cross.max_abs() < 1e-12);
  PhaseField qq = weighted_gradient_pair(fq, fq, MultiIndex{1});
  CHECK((qq.values.array() - 3.0).abs().maxCoeff() < 1e-8);
}
