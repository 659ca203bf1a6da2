#include "polytoep/fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace polytoep {

namespace {
// FFTW plan creation is not thread-safe; execution of independent plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

void fft_1d(std::vector<complexd>& data, bool inverse) {
  const int n = static_cast<int>(data.size());
  if (n == 0) return;
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_1d(n, buf, buf, inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                            FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  if (inverse)
    for (auto& v : data) v /= static_cast<double>(n);
}

void fft_2d(Eigen::MatrixXcd& data, bool inverse) {
  const int rows = static_cast<int>(data.rows());
  const int cols = static_cast<int>(data.cols());
  if (rows == 0 || cols == 0) return;
  // Eigen is column-major; FFTW expects row-major, so swap the dimensions.
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_2d(cols, rows, buf, buf, inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                            FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  if (inverse) data /= static_cast<double>(rows) * cols;
}

std::vector<double> fornberg_weights(double x0, const std::vector<double>& nodes, int m) {
  const int n = static_cast<int>(nodes.size()) - 1;
  if (n < m) throw std::invalid_argument("fornberg_weights: too few nodes for order");
  // B. Fornberg, "Generation of finite difference formulas on arbitrarily
  // spaced grids", Math. Comp. 51 (1988).
  std::vector<std::vector<double>> c(n + 1, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    int mn = std::min(i, m);
    double c2 = 1.0;
    double c5 = c4;
    c4 = nodes[i] - x0;
    for (int j = 0; j < i; ++j) {
      double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k)
        c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> out(n + 1);
  for (int i = 0; i <= n; ++i) out[i] = c[i][m];
  return out;
}

Eigen::MatrixXcd matrix_axis_derivative(const Eigen::MatrixXcd& vals, double step, int order,
                                        bool along_rows) {
  const int count = along_rows ? static_cast<int>(vals.rows()) : static_cast<int>(vals.cols());
  const int other_n = along_rows ? static_cast<int>(vals.cols()) : static_cast<int>(vals.rows());
  const int w = std::min(order + 4, count);
  if (w < order + 1)
    throw std::invalid_argument("matrix_axis_derivative: grid too coarse for stencil");
  std::vector<double> nodes(w);
  for (int t = 0; t < w; ++t) nodes[t] = step * t;
  // uniform lattice: weights depend only on the in-window offset
  std::vector<std::vector<double>> wgt(w);
  for (int o = 0; o < w; ++o) wgt[o] = fornberg_weights(step * o, nodes, order);

  Eigen::MatrixXcd out(vals.rows(), vals.cols());
  for (int i = 0; i < count; ++i) {
    int ws = std::clamp(i - w / 2, 0, count - w);
    const auto& coeff = wgt[i - ws];
    for (int j = 0; j < other_n; ++j) {
      complexd acc = 0.0;
      for (int t = 0; t < w; ++t)
        acc += coeff[t] * (along_rows ? vals(ws + t, j) : vals(j, ws + t));
      if (along_rows)
        out(i, j) = acc;
      else
        out(j, i) = acc;
    }
  }
  return out;
}

}  // namespace polytoep
