#include <cmath>

#include "doctest.h"
#include "polytoep/bargmann.hpp"
#include "polytoep/hermite.hpp"
#include "polytoep/signal.hpp"

using namespace polytoep;

namespace {

/// closed-form Bargmann image of phi_k (d = 1):
/// (pi hbar)^{-1/2} (2^{k+1} k!)^{-1/2} (z/sqrt(hbar))^k
complexd bargmann_monomial(int k, Hbar hb, complexd z) {
  double c = std::pow(kPi * hb.value, -0.5) / std::sqrt(std::pow(2.0, k + 1) * factorial(k));
  return c * std::pow(z / std::sqrt(hb.value), k);
}

FockGrid test_fock_grid(int n_max, Hbar hb, int points = 97) {
  return default_fock_grid(n_max, hb, points, 6.0);
}

}  // namespace

TEST_CASE("bargmann transform against the monomial closed form") {
  Hbar hb(1.0);
  SignalGrid phi0 = hermite_state(0, hb, 512, 8.0, 8);
  FockGrid g = test_fock_grid(8, hb);

  FockField b0 = bargmann(phi0, g);
  int i0 = (g.re.count - 1) / 2, j0 = (g.im.count - 1) / 2;
  REQUIRE(std::abs(g.re[i0]) < 1e-12);
  CHECK(std::abs(b0.values(i0, j0) - std::pow(2.0 * kPi, -0.5)) < 1e-10);

  SignalGrid phi1 = hermite_state_on(phi0, 1);
  FockField b1 = bargmann(phi1, g);
  CHECK(std::abs(b1.values(i0, j0)) < 1e-8);

  // pointwise match on |z| <= 3 sqrt(hbar), unit norms for k <= 5
  for (double hv : {1.0, 0.25}) {
    Hbar h(hv);
    SignalGrid base = hermite_state(0, h, 512, 8.0, 8);
    FockGrid gg = test_fock_grid(8, h);
    for (int k = 0; k <= 5; ++k) {
      SignalGrid phik = hermite_state_on(base, k);
      FockField bk = bargmann(phik, gg);
      double worst = 0.0;
      for (int i = 0; i < gg.re.count; i += 2)
        for (int j = 0; j < gg.im.count; j += 2) {
          complexd z = bk.z(i, j);
          if (std::abs(z) > 3.0 * std::sqrt(hv)) continue;
          worst = std::max(worst, std::abs(bk.values(i, j) - bargmann_monomial(k, h, z)));
        }
      CHECK(worst < 1e-6);
      CHECK(std::abs(fock_norm(bk) - 1.0) < 1e-6);
    }
  }
}

TEST_CASE("bargmann adjoint inverts the transform") {
  Hbar hb(0.5);
  SignalGrid base = hermite_state(0, hb, 384, 8.0, 6);
  FockGrid g = test_fock_grid(6, hb, 97);

  for (int k = 0; k <= 4; ++k) {
    SignalGrid phik = hermite_state_on(base, k);
    FockField bk = bargmann(phik, g);
    SignalGrid back = bargmann_adjoint(bk, base);
    double worst = 0.0;
    for (int i = 0; i < base.size(); ++i)
      worst = std::max(worst, std::abs(back.samples(i) - phik.samples(i)));
    CHECK(worst < 1e-5);
  }

  // closed-form monomial input reproduces phi_0
  FockField mono = sample_fock_field(g, hb, [&](complexd z) {
    return bargmann_monomial(0, hb, z);
  });
  SignalGrid back = bargmann_adjoint(mono, base);
  double worst = 0.0;
  for (int i = 0; i < base.size(); ++i)
    worst = std::max(worst, std::abs(back.samples(i) - hermite_fn_1d(0, hb, base.x(i))));
  CHECK(worst < 1e-6);

  // linearity is exact in the quadrature
  FockField f1 = bargmann(hermite_state_on(base, 1), g);
  FockField f2 = bargmann(hermite_state_on(base, 2), g);
  complexd al(0.3, -1.2), be(-0.7, 0.4);
  FockField combo = f1;
  combo.values = al * f1.values + be * f2.values;
  SignalGrid s1 = bargmann_adjoint(f1, base);
  SignalGrid s2 = bargmann_adjoint(f2, base);
  SignalGrid sc = bargmann_adjoint(combo, base);
  worst = 0.0;
  for (int i = 0; i < base.size(); ++i)
    worst = std::max(worst,
                     std::abs(sc.samples(i) - al * s1.samples(i) - be * s2.samples(i)));
  CHECK(worst < 1e-12);
}

TEST_CASE("poly_bargmann: degree zero, partial isometry, basis closed form") {
  Hbar hb(0.4);
  SignalGrid psi = random_hermite_combo(5, 41u, hb, 512, 8.0);
  FockGrid g = test_fock_grid(10, hb, 129);

  // B_0 agrees with the analytic transform
  FockField via_stft = poly_bargmann(MultiIndex{0}, psi, g);
  FockField direct = bargmann(psi, g);
  double worst = 0.0;
  const double qi = 0.25 / hb.value;
  for (int i = 0; i < g.re.count; ++i)
    for (int j = 0; j < g.im.count; ++j) {
      // compare weighted values (the unweighted ones blow up at the rim)
      double w = std::exp(-std::norm(via_stft.z(i, j)) * qi);
      worst = std::max(worst, std::abs(via_stft.values(i, j) - direct.values(i, j)) * w);
    }
  CHECK(worst < 1e-6);

  // partial isometry for k <= 3
  for (int k = 0; k <= 3; ++k) {
    FockField bk = poly_bargmann(MultiIndex{k}, psi, g);
    CHECK(std::abs(fock_norm(bk) - 1.0) < 1e-5);
  }

  // B_k phi_m equals the normalized special Hermite closed form
  SignalGrid base = hermite_state_on(psi, 0);
  for (int k = 0; k <= 2; ++k)
    for (int m = 0; m <= 3; ++m) {
      SignalGrid phim = hermite_state_on(base, m);
      FockField bk = poly_bargmann(MultiIndex{k}, phim, g);
      double w2 = 0.0;
      for (int i = 0; i < g.re.count; i += 2)
        for (int j = 0; j < g.im.count; j += 2) {
          complexd z = bk.z(i, j);
          double w = std::exp(-std::norm(z) * qi);
          complexd ref = special_hermite_basis_1d(k, m, hb, z);
          w2 = std::max(w2, std::abs(bk.values(i, j) - ref) * w);
        }
      CHECK(w2 < 1e-5);
    }
}

TEST_CASE("special Hermite basis: constants and orthonormality") {
  Hbar hb(0.7);
  // ell = m = 0 reduces to the Gaussian coherent normalization
  CHECK(special_hermite_constant(0, 0, hb) ==
        doctest::Approx(std::pow(2.0 * kPi * hb.value, -0.5)).epsilon(1e-12));

  // diagonal entries stay positive, one-off entries flip sign
  CHECK(special_hermite_constant(3, 3, hb) > 0.0);
  CHECK(special_hermite_constant(1, 0, hb) < 0.0);

  // orthonormality within fixed degree and across degrees via quadrature
  FockGrid g = test_fock_grid(10, hb, 129);
  std::vector<FockField> fields;
  std::vector<std::pair<int, int>> idx;
  for (int k = 0; k <= 3; ++k)
    for (int m = 0; m <= 3; ++m) {
      fields.push_back(sample_fock_field(
          g, hb, [&](complexd z) { return special_hermite_basis_1d(k, m, hb, z); }));
      idx.push_back({k, m});
    }
  for (size_t a = 0; a < fields.size(); ++a)
    for (size_t b = a; b < fields.size(); ++b) {
      complexd ip = fock_inner(fields[a], fields[b]);
      double expect = (a == b) ? 1.0 : 0.0;
      CHECK(std::abs(ip - expect) < 1e-5);
    }

  // tensor product over dimensions
  std::vector<complexd> z2 = {complexd(0.3, -0.1), complexd(-0.2, 0.5)};
  complexd v = special_hermite_basis(MultiIndex{1, 0}, MultiIndex{2, 1}, hb, z2);
  CHECK(v == special_hermite_basis_1d(1, 2, hb, z2[0]) *
                 special_hermite_basis_1d(0, 1, hb, z2[1]));
}

TEST_CASE("reproducing kernel: values, symmetry, evaluation, derivative") {
  Hbar h1(1.0);
  CHECK(std::abs(reproducing_kernel_1d(0, 0.0, 0.0, h1) - 1.0 / (2.0 * kPi)) < 1e-14);

  Hbar hb(0.5);
  complexd z(0.4, -0.3), w(-0.2, 0.6);
  for (int k : {0, 1, 3}) {
    CHECK(std::abs(reproducing_kernel_1d(k, z, z, hb) -
                   std::pow(2.0 * kPi * hb.value, -1.0)) < 1e-12);
    complexd a = reproducing_kernel_1d(k, z, w, hb);
    complexd b = reproducing_kernel_1d(k, w, z, hb);
    CHECK(std::abs(a - std::conj(b)) < 1e-14);
  }

  // pointwise evaluation property for B phi_2 and the B_k phi_m fields
  SignalGrid base = hermite_state(0, hb, 448, 8.0, 8);
  FockGrid g = test_fock_grid(8, hb, 129);
  for (int k = 0; k <= 3; ++k)
    for (int m = 0; m <= 3; ++m) {
      FockField f = sample_fock_field(
          g, hb, [&](complexd zz) { return special_hermite_basis_1d(k, m, hb, zz); });
      for (complexd zz : {complexd(0.2, 0.1), complexd(-0.5, 0.4)}) {
        FockField ker = sample_fock_field(g, hb, [&](complexd ww) {
          return reproducing_kernel_1d(k, zz, ww, hb);
        });
        complexd got = fock_inner(f, ker);
        complexd expect = special_hermite_basis_1d(k, m, hb, zz);
        CHECK(std::abs(got - expect) < 1e-5);
      }
    }

  // derivative formula (k = 1 case): d/dz B psi(z) = (2h)^{-1} <B psi, (.) rho(z, .)>
  SignalGrid psi = random_hermite_combo(4, 51u, hb, 448, 8.0);
  FockField bpsi = bargmann(psi, g);
  complexd z0(0.3, 0.2);
  // oracle: differentiate the Bargmann integral under the integral sign
  complexd deriv = 0.0;
  {
    const double h = hb.value;
    double pref = std::pow(2.0 * kPi * h, -0.5) * std::pow(kPi * h, -0.25) * psi.dx;
    for (int i = 0; i < psi.size(); ++i) {
      double x = psi.x(i);
      deriv += pref * psi.samples(i) * (x - 0.5 * z0) / h *
               std::exp((x * z0 - 0.25 * z0 * z0 - 0.5 * x * x) / h);
    }
  }
  FockField wker = sample_fock_field(g, hb, [&](complexd ww) {
    return ww * reproducing_kernel_1d(0, z0, ww, hb);
  });
  complexd rhs = fock_inner(bpsi, wker) / (2.0 * hb.value);
  CHECK(std::abs(deriv - rhs) < 1e-5);
}

TEST_CASE("bergman projection: fixes range, kills other degrees, analytic output") {
  Hbar hb(0.5);
  FockGrid g = test_fock_grid(6, hb, 81);

  // P_0 fixes B phi_m
  for (int m = 0; m <= 2; ++m) {
    FockField f = sample_fock_field(
        g, hb, [&](complexd z) { return special_hermite_basis_1d(0, m, hb, z); });
    FockField pf = bergman_project(f, MultiIndex{0});
    FockField diff = f;
    diff.values = pf.values - f.values;
    CHECK(fock_norm(diff) < 1e-5);
  }

  // P_k B_l phi_m = 0 for k != l
  for (int k = 0; k <= 2; ++k)
    for (int l = 0; l <= 2; ++l) {
      if (k == l) continue;
      FockField f = sample_fock_field(
          g, hb, [&](complexd z) { return special_hermite_basis_1d(l, 1, hb, z); });
      FockField pf = bergman_project(f, MultiIndex{k});
      CHECK(fock_norm(pf) < 1e-5);
    }

  // idempotence on a mixed field
  FockField mix = sample_fock_field(g, hb, [&](complexd z) {
    return special_hermite_basis_1d(0, 1, hb, z) + 0.5 * special_hermite_basis_1d(1, 2, hb, z);
  });
  FockField p1 = bergman_project(mix, MultiIndex{1});
  FockField p2 = bergman_project(p1, MultiIndex{1});
  FockField diff = p1;
  diff.values = p2.values - p1.values;
  CHECK(fock_norm(diff) < 1e-5);

  // P_0 of conj(z) B phi_0 is analytic (here: the zero field)
  FockField zb = sample_fock_field(g, hb, [&](complexd z) {
    return std::conj(z) * special_hermite_basis_1d(0, 0, hb, z);
  });
  FockField pzb = bergman_project(zb, MultiIndex{0});
  CHECK(dbar_residue(pzb, 1) < 1e-5);
}

TEST_CASE("fock translation") {
  Hbar hb(0.5);
  SignalGrid base = hermite_state(0, hb, 384, 8.0, 6);
  FockGrid g = test_fock_grid(6, hb, 97);
  FockField b0 = bargmann(base, g);

  // z0 = 0 is the identity
  FockField same = fock_translate(complexd(0.0, 0.0), b0);
  CHECK((same.values - b0.values).cwiseAbs().maxCoeff() <
        1e-12 * b0.values.cwiseAbs().maxCoeff());

  // intertwining Theta_z B f = B M_p T_q f on a lattice-aligned z0
  int sq = 8, sp = 6;
  complexd z0(std::conj(complexd(sq * g.re.step, sp * g.im.step)));
  z0 = std::conj(z0);  // z0 with conj(z0) on the lattice
  double q0 = z0.real(), p0 = -z0.imag();
  z0 = complexd(q0, -p0);
  // translate the signal: T_q shifts samples, M_p modulates
  int shift = static_cast<int>(std::round(q0 / base.dx));
  REQUIRE(std::abs(shift * base.dx - q0) < 1e-12);
  SignalGrid moved = translate_samples(base, shift);
  for (int i = 0; i < moved.size(); ++i)
    moved.samples(i) *= std::exp(complexd(0.0, -p0 * moved.x(i) / hb.value));
  // the modulation by e^{i p x / hbar} with p = -p0 matches z0 = q0 - i p0
  FockField lhs = fock_translate(complexd(q0, -p0), b0);
  FockField rhs = bargmann(moved, g);
  double worst = 0.0;
  const double qi = 0.25 / hb.value;
  for (int i = 0; i < g.re.count; ++i)
    for (int j = 0; j < g.im.count; ++j) {
      double w = std::exp(-std::norm(lhs.z(i, j)) * qi);
      worst = std::max(worst, std::abs(lhs.values(i, j) - rhs.values(i, j)) * w);
    }
  CHECK(worst < 1e-5);

  // peak of the weighted modulus relocates to conj(z0)
  double best = -1.0;
  complexd argmax;
  for (int i = 0; i < g.re.count; ++i)
    for (int j = 0; j < g.im.count; ++j) {
      double v = std::abs(lhs.values(i, j)) * std::exp(-std::norm(lhs.z(i, j)) * qi);
      if (v > best) {
        best = v;
        argmax = lhs.z(i, j);
      }
    }
  CHECK(std::abs(argmax - std::conj(complexd(q0, -p0))) < 2.0 * g.re.step);
}

TEST_CASE("mixed norms") {
  Hbar hb(0.5);
  SignalGrid base = hermite_state(0, hb, 384, 8.0, 6);
  FockGrid g = test_fock_grid(6, hb, 97);
  FockField b0 = bargmann(base, g);
  auto one = [](complexd) { return 1.0; };

  CHECK(std::abs(mixed_norm(b0, 2.0, 2.0, one) - 1.0) < 1e-6);

  FockField scaled = b0;
  scaled.values *= complexd(-2.5, 0.0);
  CHECK(std::abs(mixed_norm(scaled, 2.0, 2.0, one) - 2.5) < 1e-6);

  // weight monotonicity on a random field
  FockField rnd = sample_fock_field(g, hb, [&](complexd z) {
    return std::exp(-0.3 * std::norm(z)) * complexd(std::cos(z.real()), std::sin(z.imag()));
  });
  auto m1 = [](complexd z) { return 1.0 + 0.1 * std::abs(z); };
  auto m2 = [](complexd z) { return 2.0 + 0.3 * std::abs(z); };
  CHECK(mixed_norm(rnd, 1.5, 3.0, m1) <= mixed_norm(rnd, 1.5, 3.0, m2));

  // sup norms finite and positive
  CHECK(mixed_norm(b0, INFINITY, INFINITY, one) > 0.0);
  CHECK_THROWS_AS(mixed_norm(b0, 0.5, 2.0, one), std::invalid_argument);
}

TEST_CASE("polyanalyticity degree via dbar residue") {
  Hbar hb(0.5);
  SignalGrid psi = random_hermite_combo(4, 61u, hb, 512, 8.0);
  // small patch, fine stencil resolution
  FockGrid g = default_fock_grid(4, hb, 161, 2.0);
  for (int k = 0; k <= 2; ++k) {
    FockField bk = poly_bargmann(MultiIndex{k}, psi, g);
    // dbar^{k+1} annihilates degree-k fields
    CHECK(dbar_residue(bk, k + 1) < 1e-4);
    // dbar^k does not (scale well above the floor)
    if (k > 0) CHECK(dbar_residue(bk, k) > 1e-2);
  }
}

TEST_CASE("multiplex and demultiplex") {
  Hbar hb(0.25);
  const int modes = 6;

  // n = 1 reduces to the plain round trip
  SignalGrid s0 = random_hermite_combo(modes, 71u, hb, 512, 8.0);
  FockGrid g = default_fock_grid(modes + 3, hb, 161, 7.0);
  FockField f1 = multiplex({s0}, g);
  std::vector<SignalGrid> r1 = demultiplex(f1, 1, s0);
  {
    Eigen::VectorXcd diff = r1[0].samples - s0.samples;
    CHECK(std::sqrt(diff.squaredNorm() * s0.dx) < 1e-5);
  }

  // n = 3 random channels
  std::vector<SignalGrid> sig;
  for (int j = 0; j < 3; ++j)
    sig.push_back(random_hermite_combo(modes, 100u + j, hb, 512, 8.0));
  FockField f = multiplex(sig, g);
  std::vector<SignalGrid> rec = demultiplex(f, 3, sig[0], &sig);
  double esum = 0.0;
  for (int j = 0; j < 3; ++j) {
    Eigen::VectorXcd diff = rec[j].samples - sig[j].samples;
    CHECK(std::sqrt(diff.squaredNorm() * sig[j].dx) < 1e-4);
    esum += sig[j].norm_sq();
  }
  double fn = fock_norm(f);
  CHECK(std::abs(fn * fn - esum) < 1e-5);
}
