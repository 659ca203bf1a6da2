#include <cmath>
#include <vector>

#include "doctest.h"
#include "polytoep/hermite.hpp"
#include "polytoep/quadrature.hpp"
#include "polytoep/signal.hpp"

using namespace polytoep;

namespace {

// brute-force series for the generalized Laguerre polynomial:
// L_n^{(m)}(x) = sum_{i=0}^n (-1)^i binom(n+m, n-i) x^i / i!
// Also reports the summand magnitude (the conditioning of the oracle: at
// large positive x the alternating series cancels many digits).
struct SeriesValue {
  double value;
  double scale;
};

SeriesValue laguerre_series(int n, int m, double x) {
  double acc = 0.0, scale = 0.0;
  for (int i = 0; i <= n; ++i) {
    double binom = 1.0;
    // binom(n+m, n-i) with possibly negative upper entries handled via the
    // falling-factorial product
    for (int t = 0; t < n - i; ++t) binom *= (n + m - t) / double(n - i - t);
    double term = binom * std::pow(x, i) / std::tgamma(i + 1.0);
    acc += (i % 2 == 0) ? term : -term;
    scale += std::abs(term);
  }
  return {acc, scale};
}

}  // namespace

TEST_CASE("hermite_fn pointwise values") {
  Hbar h1(1.0);
  CHECK(hermite_fn_1d(0, h1, 0.0) == doctest::Approx(std::pow(kPi, -0.25)).epsilon(1e-12));
  CHECK(hermite_fn_1d(1, h1, 0.0) == doctest::Approx(0.0).epsilon(1e-14));

  // tensor product matches the 1-d factors
  std::vector<double> x = {0.3, -0.2};
  double v = hermite_fn(MultiIndex{2, 1}, h1, x);
  CHECK(v == doctest::Approx(hermite_fn_1d(2, h1, 0.3) * hermite_fn_1d(1, h1, -0.2)));

  CHECK_THROWS_AS(hermite_fn_1d(0, h1, std::nan("")), std::invalid_argument);
  // deep recurrence stays bounded
  CHECK(std::isfinite(hermite_fn_1d(400, h1, 1.0)));
  CHECK(std::abs(hermite_fn_1d(400, h1, 1.0)) < 1.0);
}

TEST_CASE("hermite orthonormality via rescaled Gauss-Hermite") {
  QuadratureRule rule = gauss_hermite(200);
  for (double hv : {1.0, 0.1, 0.01}) {
    Hbar hb(hv);
    double sh = std::sqrt(hv);
    for (int j = 0; j <= 20; ++j)
      for (int k = j; k <= 20; ++k) {
        double acc = 0.0;
        for (int i = 0; i < rule.size(); ++i) {
          double x = sh * rule.nodes[i];
          acc += rule.weights[i] * std::exp(rule.nodes[i] * rule.nodes[i]) *
                 hermite_fn_1d(j, hb, x) * hermite_fn_1d(k, hb, x);
        }
        acc *= sh;
        double expect = (j == k) ? 1.0 : 0.0;
        CHECK(std::abs(acc - expect) < 1e-10);
      }
  }
}

TEST_CASE("hermite eigenfunction property under spectral differentiation") {
  Hbar hb(0.5);
  for (int k = 0; k <= 10; ++k) {
    SignalGrid phi = hermite_state(k, hb, 512, 8.0, 12);
    SignalGrid d2 = spectral_second_derivative(phi);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < phi.size(); ++i) {
      double x = phi.x(i);
      complexd lhs = -0.5 * hb.value * hb.value * d2.samples(i) +
                     0.5 * x * x * phi.samples(i);
      complexd rhs = hb.value * (k + 0.5) * phi.samples(i);
      num += std::norm(lhs - rhs);
      den += std::norm(phi.samples(i));
    }
    CHECK(std::sqrt(num / den) < 1e-6);
  }
}

TEST_CASE("generalized Laguerre values and recurrence vs series") {
  CHECK(laguerre(0, 0, 3.7) == doctest::Approx(1.0));
  CHECK(laguerre(1, 0, 2.0) == doctest::Approx(-1.0));
  // L_2(2) = 1 - 2x + x^2/2 at x=2: 1 - 4 + 2 = -1
  CHECK(laguerre(2, 0, 2.0) == doctest::Approx(-1.0).epsilon(1e-12));

  for (int n = 0; n <= 30; n += 3)
    for (int m = -10; m <= 10; m += 4) {
      if (n + m < 0) continue;
      for (double x : {-50.0, -3.2, 0.0, 0.7, 12.0, 50.0}) {
        SeriesValue ref = laguerre_series(n, m, x);
        double got = laguerre(n, m, x);
        CHECK(std::abs(got - ref.value) <= 1e-12 * std::max(1.0, ref.scale));
      }
    }

  CHECK_THROWS_AS(laguerre(1, -3, 1.0), std::invalid_argument);
}

TEST_CASE("terminating 2F1") {
  CHECK(hyp2f1_terminating(3.4, 0, 1.7, 2.0) == doctest::Approx(1.0));
  CHECK(hyp2f1_terminating(1.0, 1, 1.0, 2.0) == doctest::Approx(-1.0));
  CHECK(hyp2f1_terminating(3.0, 1, 1.0, 2.0) == doctest::Approx(-5.0));
  CHECK_THROWS_AS(hyp2f1_terminating(1.0, 3, -1.0, 2.0), std::invalid_argument);
}

TEST_CASE("closed-form Hermite Wigner function") {
  Hbar h1(1.0);
  CHECK(hermite_wigner_closed(0, h1, 0.0, 0.0) == doctest::Approx(1.0 / kPi));
  CHECK(hermite_wigner_closed(1, h1, 0.0, 0.0) == doctest::Approx(-1.0 / kPi));

  // unit mass for k <= 5 by tensor quadrature
  Hbar hb(0.3);
  QuadratureRule rule = gauss_hermite(40);
  double sh = std::sqrt(hb.value);
  for (int k = 0; k <= 5; ++k) {
    double acc = 0.0;
    for (int i = 0; i < rule.size(); ++i)
      for (int j = 0; j < rule.size(); ++j) {
        double q = sh * rule.nodes[i], p = sh * rule.nodes[j];
        acc += rule.weights[i] * rule.weights[j] *
               std::exp(rule.nodes[i] * rule.nodes[i] + rule.nodes[j] * rule.nodes[j]) *
               hermite_wigner_closed(k, hb, q, p);
      }
    acc *= hb.value;
    CHECK(acc == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("closed-form Wigner matches the quadrature transform of hermite_fn") {
  // W(q,p) = (2 pi hbar)^{-1} int e^{i p y/hbar} phi_k(q-y/2) phi_k(q+y/2) dy
  Hbar hb(0.4);
  const double sh = std::sqrt(hb.value);
  QuadratureRule rule = gauss_hermite(60);
  for (int k : {0, 1, 3}) {
    double worst = 0.0;
    for (int iq = 0; iq < 8; ++iq)
      for (int ip = 0; ip < 8; ++ip) {
        double q = -2.0 * sh + iq * (4.0 * sh / 7);
        double p = -2.0 * sh + ip * (4.0 * sh / 7);
        // substitute y = 2 sh t: the product of the two Gaussians is
        // e^{-t^2} e^{-q^2/hbar} in the scaled variable
        complexd acc = 0.0;
        for (int i = 0; i < rule.size(); ++i) {
          double t = rule.nodes[i];
          double y = 2.0 * sh * t;
          acc += rule.weights[i] * std::exp(t * t) *
                 hermite_fn_1d(k, hb, q - 0.5 * y) * hermite_fn_1d(k, hb, q + 0.5 * y) *
                 std::exp(complexd(0.0, p * y / hb.value));
        }
        acc *= 2.0 * sh / (2.0 * kPi * hb.value);
        worst = std::max(worst,
                         std::abs(acc.real() - hermite_wigner_closed(k, hb, q, p)));
        worst = std::max(worst, std::abs(acc.imag()));
      }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("gauss_hermite rule") {
  QuadratureRule r1 = gauss_hermite(1);
  CHECK(r1.nodes[0] == doctest::Approx(0.0));
  CHECK(r1.weights[0] == doctest::Approx(std::sqrt(kPi)));

  QuadratureRule r2 = gauss_hermite(2);
  CHECK(r2.nodes[0] == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-13));
  CHECK(r2.nodes[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-13));
  CHECK(r2.weights[0] == doctest::Approx(0.5 * std::sqrt(kPi)).epsilon(1e-13));

  QuadratureRule r3 = gauss_hermite(3);
  double m4 = r3.integrate([](double x) { return x * x * x * x; });
  CHECK(std::abs(m4 - 0.75 * std::sqrt(kPi)) < 1e-12);

  // exactness up to degree 2n-1 against the closed-form Gaussian moments
  for (int n : {5, 20}) {
    QuadratureRule r = gauss_hermite(n);
    for (int i = 1; i < r.size(); ++i) CHECK(r.nodes[i] > r.nodes[i - 1]);
    for (double w : r.weights) CHECK(w > 0.0);
    double dfact = 1.0;  // (2m-1)!!
    for (int m = 0; 2 * m + 1 <= 2 * n - 1; ++m) {
      if (m > 0) dfact *= 2 * m - 1;
      double exact = dfact * std::sqrt(kPi) / std::pow(2.0, m);
      double got = r.integrate([m](double x) { return std::pow(x, 2 * m); });
      CHECK(std::abs(got - exact) <= 1e-12 * std::abs(exact));
      // odd moments vanish by symmetry; measure against the summand scale
      double odd = r.integrate([m](double x) { return std::pow(x, 2 * m + 1); });
      double scale = r.integrate([m](double x) { return std::pow(std::abs(x), 2 * m + 1); });
      CHECK(std::abs(odd) <= 1e-12 * scale);
    }
  }

  CHECK_THROWS_AS(gauss_hermite(0), std::invalid_argument);
  CHECK_THROWS_AS(gauss_hermite(513), std::invalid_argument);
}

TEST_CASE("MultiIndex and Hbar contracts") {
  CHECK_THROWS_AS(MultiIndex({1, -2}), std::invalid_argument);
  CHECK(MultiIndex({1, 2, 3}).order() == 6);
  CHECK_THROWS_AS(Hbar(0.0), std::invalid_argument);
  CHECK_THROWS_AS(Hbar(-1.0), std::invalid_argument);
  CHECK(Hbar(0.5).value == 0.5);
}
