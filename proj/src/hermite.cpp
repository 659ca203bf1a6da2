#include "polytoep/hermite.hpp"

#include <cmath>

namespace polytoep {

double factorial(int n) {
  if (n < 0) throw std::invalid_argument("factorial: negative argument");
  return std::exp(std::lgamma(n + 1.0));
}

double log_factorial(int n) {
  if (n < 0) throw std::invalid_argument("log_factorial: negative argument");
  return std::lgamma(n + 1.0);
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::round(std::exp(log_factorial(n) - log_factorial(k) - log_factorial(n - k)));
}

double hermite_fn_1d(int k, Hbar hbar, double x) {
  if (k < 0) throw std::invalid_argument("hermite_fn: negative index");
  if (std::isnan(x)) throw std::invalid_argument("hermite_fn: NaN input");

  const double sh = std::sqrt(hbar.value);
  const double t = x / sh;
  // Normalized functions h_k(t) = (2^k k! sqrt(pi))^{-1/2} H_k(t) e^{-t^2/2}:
  //   h_{k+1} = t sqrt(2/(k+1)) h_k - sqrt(k/(k+1)) h_{k-1}.
  // All iterates are O(1); the Gaussian is folded in from the start.
  double hm1 = 0.0;
  double h = std::pow(kPi, -0.25) * std::exp(-0.5 * t * t);
  for (int j = 0; j < k; ++j) {
    double hp1 = t * std::sqrt(2.0 / (j + 1)) * h - std::sqrt(double(j) / (j + 1)) * hm1;
    hm1 = h;
    h = hp1;
  }
  return h / std::sqrt(sh);
}

double hermite_fn(const MultiIndex& k, Hbar hbar, std::span<const double> x) {
  if (static_cast<int>(x.size()) != k.dim())
    throw std::invalid_argument("hermite_fn: dim(x) != len(k)");
  double prod = 1.0;
  for (int j = 0; j < k.dim(); ++j) prod *= hermite_fn_1d(k[j], hbar, x[j]);
  return prod;
}

double laguerre(int n, int m, double x) {
  if (n < 0) throw std::invalid_argument("laguerre: n must be >= 0");
  if (n + m < 0) throw std::invalid_argument("laguerre: need n + m >= 0");
  if (n == 0) return 1.0;
  double lm1 = 1.0;           // L_0^{(m)}
  double l = 1.0 + m - x;     // L_1^{(m)}
  for (int j = 1; j < n; ++j) {
    double lp1 = ((2.0 * j + 1.0 + m - x) * l - (j + m) * lm1) / (j + 1.0);
    lm1 = l;
    l = lp1;
  }
  return l;
}

double hyp2f1_terminating(double a, int k, double c, double x) {
  if (k < 0) throw std::invalid_argument("hyp2f1_terminating: k must be >= 0");
  // (c)_j must not vanish for j < k: reject c in {0, -1, ..., -(k-1)}.
  if (c <= 0.0 && c == std::floor(c) && c > -static_cast<double>(k))
    throw std::invalid_argument("hyp2f1_terminating: c hits a pole before termination");
  double sum = 1.0;
  double term = 1.0;
  for (int j = 0; j < k; ++j) {
    term *= (a + j) * (-k + j) / ((c + j) * (j + 1.0)) * x;
    sum += term;
  }
  return sum;
}

double hermite_wigner_closed(const MultiIndex& k, Hbar hbar, std::span<const double> z) {
  const int d = k.dim();
  if (static_cast<int>(z.size()) != 2 * d)
    throw std::invalid_argument("hermite_wigner_closed: z must have 2*len(k) entries");
  const double h = hbar.value;
  double r2 = 0.0;
  double lag = 1.0;
  for (int j = 0; j < d; ++j) {
    double zj2 = z[2 * j] * z[2 * j] + z[2 * j + 1] * z[2 * j + 1];
    r2 += zj2;
    lag *= laguerre(k[j], 0, 2.0 * zj2 / h);
  }
  double sign = (k.order() % 2 == 0) ? 1.0 : -1.0;
  return std::pow(kPi * h, -d) * std::exp(-r2 / h) * sign * lag;
}

double hermite_wigner_closed(int k, Hbar hbar, double q, double p) {
  const double z[2] = {q, p};
  return hermite_wigner_closed(MultiIndex{k}, hbar, z);
}

}  // namespace polytoep
