#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "polytoep/quantize.hpp"

namespace polytoep::cli {

/// Raised for malformed flags, unknown ids and config-file errors; the
/// driver maps it to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ReportFormat { csv, json };

struct ExperimentConfig {
  std::vector<double> hbar_ladder = {0.2, 0.1, 0.05, 0.025};
  int basis_size = 32;
  int grid_points = 193;
  double truncation_margin = 6.0;
  std::string output_dir = ".";
  ReportFormat format = ReportFormat::csv;
  int jobs = 1;

  void validate() const;
};

/// key=value text; '#' starts a comment. Recognized keys: hbar_ladder,
/// basis_size, grid_points, truncation_margin, output_dir, format.
void load_config_file(ExperimentConfig& cfg, const std::string& path);

/// Builtin registries: {gauss, ho, q, p, qp, poly:<s:t:coeff,...>} on phase
/// space and {one, z, zbar, absz2, cgauss} on the complex plane.
RealSymbol real_symbol_from_id(const std::string& id);
ComplexSymbol complex_symbol_from_id(const std::string& id);

/// One row of a rate report; written as CSV/JSON records with columns
/// (experiment, k, N, hbar, error, slope, rsquared).
struct RateRow {
  std::string experiment;
  int k = -1;  // -1 when not applicable
  int N = -1;
  double hbar = 0.0;
  double error = 0.0;
  double slope = 0.0;
  double rsquared = 0.0;
};

void write_report(const ExperimentConfig& cfg, const std::string& name,
                  const std::vector<RateRow>& rows);

int cmd_moments(const ExperimentConfig& cfg, int k_max, int ab_max, double hbar, double tol);
int cmd_coeffs(int N, int d);
int cmd_expansion(const ExperimentConfig& cfg, const std::string& symbol_id, int N);
int cmd_composition(const ExperimentConfig& cfg, const std::string& kind, int k);
int cmd_multiplex(const ExperimentConfig& cfg, int n, unsigned seed, double hbar);

struct ExportParams {
  std::string state = "phi0";   // phi<k> or random:<seed>
  double hbar = 1.0;
  int N = 2;                    // mu order
  std::string kind = "toeplitz";
  std::string symbol = "absz2";
  int k = 0;
  int basis_size = 32;
  double w_re = 0.0, w_im = 0.0;  // kernel second argument
  int points = 97;
};

int cmd_export(const ExperimentConfig& cfg, const std::string& object,
               const ExportParams& params, const std::string& path);

}  // namespace polytoep::cli
