#include "polytoep/calculus.hpp"

#include <cmath>

#include "polytoep/fft.hpp"
#include "polytoep/hermite.hpp"
#include "polytoep/quadrature.hpp"

namespace polytoep {

ExpansionCoeffs spec_coefficients(int N, int d) {
  if (N < 1 || d < 1) throw std::invalid_argument("spec_coefficients: N, d >= 1");
  ExpansionCoeffs out;
  out.N = N;
  out.d = d;
  out.values.resize(N);
  const int k = N - 1;
  for (int j = 0; j <= k; ++j) {
    double c = 0.0;
    for (int m = j; m <= k; ++m) c += std::pow(2.0, -m) * binomial(d - 1 + m, d - 1 + j);
    out.values[j] = c;
  }
  return out;
}

PhaseField mu_density(const SignalGrid& psi, int N, const PhaseGrid& grid) {
  ExpansionCoeffs c = spec_coefficients(N, 1);
  PhaseField acc;
  for (int j = 0; j < N; ++j) {
    SignalGrid window = hermite_state_on(psi, j);
    PhaseField s = spectrogram(psi, window, grid);
    double w = (j % 2 == 0 ? 1.0 : -1.0) * c.values[j];
    if (j == 0)
      acc = w * s;
    else
      acc.values += w * s.values;
  }
  return acc;
}

PhaseField mu_density_offdiag(const SignalGrid& psi, const SignalGrid& phi, int N,
                              const PhaseGrid& grid) {
  ExpansionCoeffs c = spec_coefficients(N, 1);
  PhaseField acc;
  for (int j = 0; j < N; ++j) {
    SignalGrid window = hermite_state_on(psi, j);
    PhaseField vpsi = stft(psi, window, grid);
    PhaseField vphi = stft(phi, window, grid);
    double w = (j % 2 == 0 ? 1.0 : -1.0) * c.values[j];
    PhaseField term = vpsi;
    term.values = vpsi.values.cwiseProduct(vphi.values.conjugate());
    if (j == 0)
      acc = w * term;
    else
      acc.values += w * term.values;
  }
  return acc;
}

double hermite_moment(int alpha, int beta, int k, Hbar hbar) {
  if (alpha < 0 || beta < 0 || k < 0)
    throw std::invalid_argument("hermite_moment: indices >= 0");
  double f = hyp2f1_terminating(alpha + beta + 1.0, k, 1.0, 2.0);
  double sign = (k % 2 == 0) ? 1.0 : -1.0;
  double comb = std::exp(log_factorial(2 * alpha) + log_factorial(2 * beta) -
                         log_factorial(alpha) - log_factorial(beta) -
                         (alpha + beta) * std::log(4.0));
  return f * sign * std::pow(hbar.value, alpha + beta) * comb;
}

double hermite_moment_bruteforce(int alpha, int beta, int k, Hbar hbar) {
  if (alpha + beta > 8 || k > 10)
    warn("hermite_moment_bruteforce: quadrature degree budget exceeded");
  QuadratureRule rule = gauss_hermite(alpha + beta + k + 8);
  double sign = (k % 2 == 0) ? 1.0 : -1.0;
  double acc = 0.0;
  for (int i = 0; i < rule.size(); ++i)
    for (int j = 0; j < rule.size(); ++j) {
      double u = rule.nodes[i], v = rule.nodes[j];
      acc += rule.weights[i] * rule.weights[j] * std::pow(u, 2 * alpha) *
             std::pow(v, 2 * beta) * laguerre(k, 0, 2.0 * (u * u + v * v));
    }
  return acc * sign * std::pow(hbar.value, alpha + beta) / kPi;
}

double c_alpha(const MultiIndex& k, const MultiIndex& alpha) {
  const int d = k.dim();
  if (alpha.dim() != 2 * d)
    throw std::invalid_argument("c_alpha: len(alpha) must be 2 len(k)");
  double prod = 1.0;
  double afact = 1.0;
  for (int j = 0; j < 2 * d; ++j) afact *= factorial(alpha[j]);
  for (int j = 0; j < d; ++j)
    prod *= hyp2f1_terminating(alpha[j] + alpha[j + d] + 1.0, k[j], 1.0, 2.0);
  return prod / afact;
}

PhaseField apply_D(int m, const MultiIndex& k, const PhaseField& a) {
  if (k.dim() != 1) throw std::invalid_argument("apply_D: d = 1 grids only");
  if (m < 0 || m > 3) throw std::invalid_argument("apply_D: m <= 3");
  if (m == 0) return a;

  PhaseField out = a;
  out.values.setZero();
  double sign = (k.order() % 2 == 0) ? 1.0 : -1.0;
  for (int a1 = 0; a1 <= m; ++a1) {
    int a2 = m - a1;
    double c = c_alpha(k, MultiIndex{a1, a2});
    Eigen::MatrixXcd term = a.values;
    if (a1 > 0) term = matrix_axis_derivative(term, a.grid.q.step, 2 * a1, true);
    if (a2 > 0) term = matrix_axis_derivative(term, a.grid.p.step, 2 * a2, false);
    out.values += c * term;
  }
  out.values *= sign * factorial(m);
  return out;
}

PhaseField moyal_bidiff(int n, const PhaseField& a, const PhaseField& b, Hbar /*hbar*/) {
  if (!same_grid(a.grid, b.grid)) throw std::invalid_argument("moyal_bidiff: grid mismatch");
  if (n < 0 || n > 2) throw std::invalid_argument("moyal_bidiff: n <= 2");
  if (n == 0) return a * b;
  if (n == 1) {
    PhaseField out = poisson_bracket(a, b);
    out.values *= 0.5;
    return out;
  }
  PhaseField aqq = derivative_q(a, 2), app = derivative_p(a, 2);
  PhaseField bqq = derivative_q(b, 2), bpp = derivative_p(b, 2);
  PhaseField aqp = derivative_p(derivative_q(a, 1), 1);
  PhaseField bqp = derivative_p(derivative_q(b, 1), 1);
  PhaseField out = a;
  out.values = 0.25 * (aqq.values.cwiseProduct(bpp.values) -
                       2.0 * aqp.values.cwiseProduct(bqp.values) +
                       app.values.cwiseProduct(bqq.values));
  return out;
}

PhaseField composition_symbol_2nd(const PhaseField& a, const PhaseField& b,
                                  const MultiIndex& k, Hbar hbar) {
  const double h = hbar.value;
  PhaseField out = a * b;
  out.values += complexd(0.0, 0.5 * h) * poisson_bracket(a, b).values;
  out.values -= 0.5 * h * weighted_gradient_pair(a, b, k).values;
  return out;
}

PhaseField weyl_corrected_symbol(const PhaseField& a, const MultiIndex& k, int N, Hbar hbar) {
  if (N < 1 || N > 3) throw std::invalid_argument("weyl_corrected_symbol: N <= 3");
  PhaseField out = a;
  double hpow = 1.0;
  for (int m = 1; m < N; ++m) {
    hpow *= hbar.value;
    PhaseField dm = apply_D(m, k, a);
    out.values += hpow / (std::pow(4.0, m) * factorial(m)) * dm.values;
  }
  return out;
}

PhaseField aw_inverse_2nd(const PhaseField& a, const MultiIndex& k, Hbar hbar) {
  PhaseField out = a;
  out.values -= 0.25 * hbar.value * weighted_laplacian(a, k).values;
  return out;
}

FockField toeplitz_composition_symbol(const ComplexSymbol& m, const ComplexSymbol& mu,
                                      const MultiIndex& k, Hbar hbar, const FockGrid& grid) {
  if (k.dim() != 1) throw std::invalid_argument("toeplitz_composition_symbol: d = 1 only");
  const double h = hbar.value;
  const double kk = k[0];

  FockField fm = sample_fock_field(grid, hbar, [&](complexd z) { return m(z); });
  FockField fmu = sample_fock_field(grid, hbar, [&](complexd z) { return mu(z); });

  auto wirtinger = [&](const Eigen::MatrixXcd& v, bool bar) {
    Eigen::MatrixXcd dre = matrix_axis_derivative(v, grid.re.step, 1, true);
    Eigen::MatrixXcd dim_ = matrix_axis_derivative(v, grid.im.step, 1, false);
    complexd iunit(0.0, bar ? 1.0 : -1.0);
    return (0.5 * (dre + iunit * dim_)).eval();
  };

  Eigen::MatrixXcd dm = wirtinger(fm.values, false);
  Eigen::MatrixXcd dbar_mu = wirtinger(fmu.values, true);
  Eigen::MatrixXcd dbar_m = wirtinger(fm.values, true);
  Eigen::MatrixXcd dmu = wirtinger(fmu.values, false);

  FockField out = fm;
  out.values = fm.values.cwiseProduct(fmu.values) -
               h * ((2.0 * kk + 2.0) * dm.cwiseProduct(dbar_mu) +
                    2.0 * kk * dbar_m.cwiseProduct(dmu));
  return out;
}

OperatorMatrix weyl_via_antiwick_matrix(const RealSymbol& a, int N, int basis_size, Hbar hbar,
                                        const PhaseGrid* grid) {
  if (N < 1) throw std::invalid_argument("weyl_via_antiwick_matrix: N >= 1");
  ExpansionCoeffs c = spec_coefficients(N, 1);
  PhaseGrid g = grid ? *grid : quantize_grid(basis_size, hbar, 193, 6.0, a.degree);
  PhaseField field = sample_phase_field(g, hbar, [&](double q, double p) { return a(q, p); });

  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(basis_size, basis_size);
  for (int j = 0; j < N; ++j) {
    double w = (j % 2 == 0 ? 1.0 : -1.0) * c.values[j];
    acc += w * localization_matrix(field, MultiIndex{j}, basis_size).entries;
  }
  return OperatorMatrix(std::move(acc), OperatorKind::weyl, MultiIndex{}, hbar);
}

RateFit fit_rate(std::span<const double> hbars, std::span<const double> errors) {
  if (hbars.size() != errors.size())
    throw std::invalid_argument("fit_rate: mismatched input lengths");
  std::vector<double> x, y;
  for (size_t i = 0; i < hbars.size(); ++i) {
    if (errors[i] > 1e-12) {
      if (!(hbars[i] > 0.0)) throw std::invalid_argument("fit_rate: hbar must be positive");
      x.push_back(std::log(hbars[i]));
      y.push_back(std::log(errors[i]));
    }
  }
  if (x.size() < 3)
    throw std::invalid_argument("fit_rate: need >= 3 pairs above the error floor");

  const size_t n = x.size();
  double xm = 0.0, ym = 0.0;
  for (size_t i = 0; i < n; ++i) {
    xm += x[i];
    ym += y[i];
  }
  xm /= n;
  ym /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
    syy += (y[i] - ym) * (y[i] - ym);
  }
  if (sxx < 1e-14) throw std::invalid_argument("fit_rate: zero variance in log(hbar)");

  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = ym - fit.slope * xm;
  double ssres = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ssres += r * r;
  }
  fit.rsquared = (syy < 1e-14) ? 1.0 : std::max(0.0, 1.0 - ssres / syy);
  return fit;
}

}  // namespace polytoep
