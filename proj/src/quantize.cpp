#include "polytoep/quantize.hpp"

#include <cmath>

#include "polytoep/bargmann.hpp"
#include "polytoep/hermite.hpp"

namespace polytoep {

RealSymbol breve(const ComplexSymbol& m) {
  auto f = m.eval;
  return RealSymbol{[f](double q, double p) { return f(complexd(q, -p)); }, m.degree};
}

ComplexSymbol hat(const RealSymbol& u) {
  auto f = u.eval;
  return ComplexSymbol{[f](complexd z) { return f(z.real(), -z.imag()); }, u.degree};
}

RealSymbol kappa_pullback(const ComplexSymbol& a_lambda) {
  auto f = a_lambda.eval;
  return RealSymbol{[f](double q, double p) { return f(complexd(-q, p)); }, a_lambda.degree};
}

ComplexSymbol lambda_pushforward(const RealSymbol& a) {
  auto f = a.eval;
  return ComplexSymbol{[f](complexd zeta) { return f(-zeta.real(), zeta.imag()); }, a.degree};
}

std::string to_string(OperatorKind k) {
  switch (k) {
    case OperatorKind::weyl: return "weyl";
    case OperatorKind::localization: return "localization";
    case OperatorKind::toeplitz: return "toeplitz";
    case OperatorKind::projected_toeplitz: return "projected_toeplitz";
    case OperatorKind::complex_weyl: return "complex_weyl";
  }
  return "unknown";
}

OperatorKind operator_kind_from_string(const std::string& s) {
  if (s == "weyl") return OperatorKind::weyl;
  if (s == "localization") return OperatorKind::localization;
  if (s == "toeplitz") return OperatorKind::toeplitz;
  if (s == "projected_toeplitz") return OperatorKind::projected_toeplitz;
  if (s == "complex_weyl") return OperatorKind::complex_weyl;
  throw std::invalid_argument("unknown operator kind: " + s);
}

OperatorMatrix::OperatorMatrix(Eigen::MatrixXcd e, OperatorKind kd, MultiIndex wk, Hbar h)
    : entries(std::move(e)), kind(kd), window_k(std::move(wk)), hbar(h) {
  if (entries.rows() != entries.cols())
    throw std::invalid_argument("OperatorMatrix: matrix must be square");
  bool windowless = kind == OperatorKind::weyl || kind == OperatorKind::complex_weyl;
  if (windowless && window_k.dim() != 0)
    throw std::invalid_argument("OperatorMatrix: " + to_string(kind) + " carries no window");
  if (!windowless && window_k.dim() == 0)
    throw std::invalid_argument("OperatorMatrix: " + to_string(kind) + " requires a window");
  if (!entries.allFinite()) throw std::invalid_argument("OperatorMatrix: non-finite entries");
}

double OperatorMatrix::block_max_diff(const OperatorMatrix& a, const OperatorMatrix& b,
                                      int edge) {
  int n = std::min(a.basis_size(), b.basis_size()) - edge;
  if (n < 1) throw std::invalid_argument("block_max_diff: matrices too small");
  return (a.entries.topLeftCorner(n, n) - b.entries.topLeftCorner(n, n))
      .cwiseAbs()
      .maxCoeff();
}

PhaseGrid quantize_grid(int basis_size, Hbar hbar, int points_per_axis, double margin,
                        int symbol_degree) {
  // grow the radius with declared polynomial growth: the Gaussian density
  // tail must still beat |z|^degree at the edge
  double extra = 0.5 * symbol_degree;
  return default_phase_grid(basis_size, hbar, points_per_axis, margin + extra);
}

// -------------------------------------------------------------------------
// Closed-form Hermite-pair densities
// -------------------------------------------------------------------------

complexd hermite_cross_wigner_closed(int m, int n, Hbar hbar, double q, double p) {
  const double h = hbar.value;
  complexd z(q, p);
  double sign = (n % 2 == 0) ? 1.0 : -1.0;
  return std::pow(kPi * h, -1.0) * std::sqrt(2.0 * kPi * h) * sign *
         std::exp(-std::norm(z) / h) *
         special_hermite_basis_1d(n, m, hbar, 2.0 * std::conj(z));
}

complexd hermite_stft_closed(int window_k, int m, Hbar hbar, double q, double p) {
  const double h = hbar.value;
  complexd z(q, p);
  return std::exp(complexd(-0.25 * std::norm(z) / h, -0.5 * p * q / h)) *
         special_hermite_basis_1d(window_k, m, hbar, std::conj(z));
}

// -------------------------------------------------------------------------
// Matrix builders
// -------------------------------------------------------------------------

namespace {

PhaseField sample_symbol(const RealSymbol& a, const PhaseGrid& g, Hbar hbar) {
  return sample_phase_field(g, hbar, [&](double q, double p) { return a(q, p); });
}

/// STFT table U(:, m) = V_{phi_k} phi_m on the grid, column-major over
/// flattened grid points (q-major).
Eigen::MatrixXcd stft_table(int k, int basis_size, Hbar hbar, const PhaseGrid& g) {
  const double h = hbar.value;
  const int npts = g.q.count * g.p.count;
  Eigen::MatrixXcd table(npts, basis_size);

  std::vector<double> consts(basis_size);
  for (int m = 0; m < basis_size; ++m) consts[m] = special_hermite_constant(k, m, hbar);

  for (int i = 0; i < g.q.count; ++i) {
    double q = g.q[i];
    for (int j = 0; j < g.p.count; ++j) {
      double p = g.p[j];
      complexd zbar(q, -p);
      double t = 0.5 * std::norm(zbar) / h;
      complexd envelope = std::exp(complexd(-0.5 * t, -0.5 * p * q / h));
      int row = i * g.p.count + j;
      // m < k branch: conj(zbar)^{k-m} L_m^{(k-m)};  m >= k: zbar^{m-k} L_k^{(m-k)}
      complexd zpow = 1.0;
      for (int m = 0; m < std::min(k, basis_size); ++m) {
        complexd cpow = std::pow(std::conj(zbar), k - m);
        table(row, m) = consts[m] * cpow * laguerre(m, k - m, t) * envelope;
      }
      for (int m = k; m < basis_size; ++m) {
        table(row, m) = consts[m] * zpow * laguerre(k, m - k, t) * envelope;
        zpow *= zbar;
      }
    }
  }
  return table;
}

Eigen::VectorXcd flatten_weighted(const PhaseField& a) {
  const double cell = a.cell();
  Eigen::VectorXcd v(a.nq() * a.np());
  for (int i = 0; i < a.nq(); ++i)
    for (int j = 0; j < a.np(); ++j) v(i * a.np() + j) = a.values(i, j) * cell;
  return v;
}

}  // namespace

OperatorMatrix weyl_matrix(const PhaseField& a, int basis_size) {
  const Hbar hbar = a.hbar;
  const double h = hbar.value;
  const PhaseGrid& g = a.grid;
  const int n = basis_size;

  // W(phi_m, phi_n)(z) = pref (-1)^n e^{-|z|^2/h} B_n phi_m(2 conj z):
  // iterate anti-diagonals s = m - n with the Laguerre recurrence in the
  // degree index, vectorized over grid points.
  const int npts = g.q.count * g.p.count;
  Eigen::VectorXcd aw(npts);   // symbol x cell x shared prefactor x Gaussian
  Eigen::VectorXcd w2(npts);   // 2 conj(z) per point
  Eigen::VectorXd t(npts);     // |2z|^2 / 2h
  const double pref = std::pow(kPi * h, -1.0) * std::sqrt(2.0 * kPi * h) * a.cell();
  for (int i = 0; i < g.q.count; ++i)
    for (int j = 0; j < g.p.count; ++j) {
      int row = i * g.p.count + j;
      complexd z(g.q[i], g.p[j]);
      aw(row) = a.values(i, j) * pref * std::exp(-std::norm(z) / h);
      w2(row) = 2.0 * std::conj(z);
      t(row) = 0.5 * std::norm(2.0 * z) / h;
    }

  Eigen::MatrixXcd M(n, n);
  Eigen::VectorXcd pw = Eigen::VectorXcd::Ones(npts);  // w2^s
  Eigen::ArrayXd lag_m1(npts), lag(npts), lag_next(npts);
  for (int s = 0; s < n; ++s) {
    // Laguerre recurrence in the degree nu at fixed alpha = s:
    // L_0 = 1, L_1 = 1 + s - t, (nu+1) L_{nu+1} = (2nu+1+s-t) L_nu - (nu+s) L_{nu-1}
    for (int nu = 0; nu + s < n; ++nu) {
      if (nu == 0) {
        lag.setOnes();
      } else if (nu == 1) {
        lag_m1 = lag;
        lag = (1.0 + s) - t.array();
      } else {
        lag_next =
            ((2.0 * (nu - 1) + 1.0 + s - t.array()) * lag - ((nu - 1.0) + s) * lag_m1) / nu;
        lag_m1 = lag;
        lag = lag_next;
      }
      const int row = nu, col = nu + s;
      // M[row][col] pairs a with W(phi_col, phi_row):
      //   B_row phi_col(w2) = c_{row,col} w2^s L_row^{(s)}(t), sign (-1)^{row}
      double c = special_hermite_constant(row, col, hbar);
      double sign = (row % 2 == 0) ? 1.0 : -1.0;
      M(row, col) = (aw.array() * pw.array() * lag.cast<complexd>()).sum() * (sign * c);
      if (s > 0) {
        // M[col][row] pairs a with W(phi_row, phi_col):
        //   B_col phi_row(w2) = c_{col,row} conj(w2)^s L_row^{(s)}(t), sign (-1)^{col}
        double cm = special_hermite_constant(col, row, hbar);
        double signm = (col % 2 == 0) ? 1.0 : -1.0;
        M(col, row) =
            (aw.array() * pw.array().conjugate() * lag.cast<complexd>()).sum() * (signm * cm);
      }
    }
    pw = (pw.array() * w2.array()).matrix();
  }
  return OperatorMatrix(std::move(M), OperatorKind::weyl, MultiIndex{}, hbar);
}

OperatorMatrix weyl_matrix(const RealSymbol& a, int basis_size, Hbar hbar,
                           const PhaseGrid* grid) {
  PhaseGrid g = grid ? *grid : quantize_grid(basis_size, hbar, 193, 6.0, a.degree);
  return weyl_matrix(sample_symbol(a, g, hbar), basis_size);
}

OperatorMatrix localization_matrix(const PhaseField& a, const MultiIndex& k, int basis_size) {
  if (k.dim() != 1) throw std::invalid_argument("localization_matrix: d = 1 only");
  Eigen::MatrixXcd table = stft_table(k[0], basis_size, a.hbar, a.grid);
  Eigen::VectorXcd av = flatten_weighted(a);
  // M[n][m] = sum_z a(z) U_m(z) conj(U_n(z)) cell = (U^H diag(a cell) U)[n][m]
  Eigen::MatrixXcd M = table.adjoint() * av.asDiagonal() * table;
  return OperatorMatrix(std::move(M), OperatorKind::localization, k, a.hbar);
}

OperatorMatrix localization_matrix(const RealSymbol& a, const MultiIndex& k, int basis_size,
                                   Hbar hbar, const PhaseGrid* grid) {
  PhaseGrid g = grid ? *grid : quantize_grid(basis_size, hbar, 193, 6.0, a.degree);
  return localization_matrix(sample_symbol(a, g, hbar), k, basis_size);
}

OperatorMatrix toeplitz_matrix(const PhaseField& breve_m, const MultiIndex& k,
                               int basis_size) {
  OperatorMatrix loc = localization_matrix(breve_m, k, basis_size);
  return OperatorMatrix(std::move(loc.entries), OperatorKind::toeplitz, k, breve_m.hbar);
}

OperatorMatrix toeplitz_matrix(const ComplexSymbol& m, const MultiIndex& k, int basis_size,
                               Hbar hbar, const PhaseGrid* grid) {
  OperatorMatrix loc = localization_matrix(breve(m), k, basis_size, hbar, grid);
  return OperatorMatrix(std::move(loc.entries), OperatorKind::toeplitz, k, hbar);
}

OperatorMatrix projected_toeplitz_matrix(const ComplexSymbol& m, const MultiIndex& k,
                                         int basis_size, Hbar hbar, const PhaseGrid* grid) {
  OperatorMatrix loc = localization_matrix(breve(m), k, basis_size, hbar, grid);
  return OperatorMatrix(std::move(loc.entries), OperatorKind::projected_toeplitz, k, hbar);
}

OperatorMatrix complex_weyl_matrix(const ComplexSymbol& a_lambda, int basis_size, Hbar hbar,
                                   const PhaseGrid* grid) {
  OperatorMatrix w = weyl_matrix(kappa_pullback(a_lambda), basis_size, hbar, grid);
  return OperatorMatrix(std::move(w.entries), OperatorKind::complex_weyl, MultiIndex{}, hbar);
}

double antiholo_weyl_check(const std::vector<complexd>& poly_coeffs, int N, int basis_size,
                           Hbar hbar) {
  if (N < 1) throw std::invalid_argument("antiholo_weyl_check: N >= 1");
  const int deg = static_cast<int>(poly_coeffs.size()) - 1;
  if (deg > N - 1)
    throw std::invalid_argument("antiholo_weyl_check: polynomial degree must be <= N-1");

  ComplexSymbol p{[poly_coeffs](complexd z) {
                    complexd acc = 0.0, zp = 1.0;
                    for (complexd c : poly_coeffs) {
                      acc += c * zp;
                      zp *= z;
                    }
                    return acc;
                  },
                  std::max(deg, 0)};

  OperatorMatrix lhs = weyl_matrix(breve(p), basis_size, hbar);

  // C_{N-1,j} in d = 1
  Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(basis_size, basis_size);
  for (int j = 0; j < N; ++j) {
    double coeff = 0.0;
    for (int m = j; m <= N - 1; ++m) coeff += std::pow(2.0, -m) * binomial(m, j);
    double sign = (j % 2 == 0) ? 1.0 : -1.0;
    OperatorMatrix tj = toeplitz_matrix(p, MultiIndex{j}, basis_size, hbar);
    rhs += sign * coeff * tj.entries;
  }
  OperatorMatrix rhs_op(std::move(rhs), OperatorKind::weyl, MultiIndex{}, hbar);
  return OperatorMatrix::block_max_diff(lhs, rhs_op);
}

}  // namespace polytoep
