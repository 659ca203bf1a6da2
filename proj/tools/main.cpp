#include <cstdio>
#include <cstdlib>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"

using namespace polytoep::cli;

int main(int argc, char** argv) {
  CLI::App app{"polytoep - polyanalytic Toeplitz quantization toolbox"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string format = "csv";
  int jobs = 1;
  std::string ladder_spec;
  int basis_size = -1;
  int grid_points = -1;
  double margin = -1.0;

  app.add_option("--config", config_path, "key=value config file");
  auto* out_opt = app.add_option("--out", out_dir, "output directory for reports");
  app.add_option("--format", format, "report format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--jobs", jobs, "per-hbar parallelism for ladder experiments");
  app.add_option("--hbar-ladder", ladder_spec, "comma-separated decreasing hbar values");
  app.add_option("--basis-size", basis_size, "Hermite basis truncation");
  app.add_option("--grid-points", grid_points, "quadrature points per axis");
  app.add_option("--margin", margin, "Gaussian-tail margin in units of sqrt(hbar)");

  // moments
  auto* cmoments = app.add_subcommand("moments", "closed-form vs quadrature Wigner moments");
  int k_max = 2, ab_max = 1;
  double m_hbar = 1.0, m_tol = 1e-8;
  cmoments->add_option("--k-max", k_max, "largest Hermite index");
  cmoments->add_option("--ab-max", ab_max, "largest alpha+beta");
  cmoments->add_option("--hbar", m_hbar, "semiclassical parameter");
  cmoments->add_option("--tol", m_tol, "relative tolerance gate");

  // coeffs
  auto* ccoeffs = app.add_subcommand("coeffs", "spectrogram-expansion coefficients");
  int c_N = 2, c_d = 1;
  ccoeffs->add_option("--N", c_N, "expansion order");
  ccoeffs->add_option("--d", c_d, "dimension");

  // expansion
  auto* cexp = app.add_subcommand("expansion", "Weyl-via-anti-Wick rate experiment");
  std::string e_symbol = "gauss";
  int e_N = 2;
  cexp->add_option("--symbol", e_symbol, "symbol id (gauss, ho, q, p, qp, poly:<terms>)");
  cexp->add_option("--N", e_N, "expansion order");

  // composition
  auto* ccomp = app.add_subcommand("composition", "composition/commutator rate experiment");
  std::string comp_kind = "localization";
  int comp_k = 0;
  ccomp->add_option("--kind", comp_kind, "localization, toeplitz or commutator");
  ccomp->add_option("--k", comp_k, "window degree");

  // multiplex
  auto* cmux = app.add_subcommand("multiplex", "multiplex/demultiplex round trip");
  int mux_n = 3;
  unsigned mux_seed = 12345;
  double mux_hbar = 0.1;
  cmux->add_option("--n", mux_n, "number of channels (<= 5)");
  cmux->add_option("--seed", mux_seed, "random seed for the test signals");
  cmux->add_option("--hbar", mux_hbar, "semiclassical parameter");

  // export
  auto* cexport = app.add_subcommand("export", "write fields/matrices to files");
  std::string x_object, x_path;
  ExportParams params;
  cexport->add_option("object", x_object, "kernel | wigner | husimi | mu | opmatrix")
      ->required();
  cexport->add_option("path", x_path, "output file")->required();
  cexport->add_option("--state", params.state, "phi<k> or random:<seed>");
  cexport->add_option("--hbar", params.hbar, "semiclassical parameter");
  cexport->add_option("--N", params.N, "mu expansion order");
  cexport->add_option("--kind", params.kind, "operator kind for opmatrix");
  cexport->add_option("--symbol", params.symbol, "symbol id");
  cexport->add_option("--k", params.k, "window degree");
  cexport->add_option("--basis-size", params.basis_size, "matrix truncation");
  cexport->add_option("--w-re", params.w_re, "kernel anchor Re w");
  cexport->add_option("--w-im", params.w_im, "kernel anchor Im w");
  cexport->add_option("--points", params.points, "grid points per axis");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // help text, exit 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // usage error contract
  }

  try {
    ExperimentConfig cfg;
    if (!config_path.empty()) load_config_file(cfg, config_path);
    // precedence: defaults < config file < POLYTOEP_OUT < flags
    if (const char* env = std::getenv("POLYTOEP_OUT")) cfg.output_dir = env;
    if (out_opt->count() > 0) cfg.output_dir = out_dir;
    cfg.format = (format == "json") ? ReportFormat::json : ReportFormat::csv;
    cfg.jobs = jobs;
    if (!ladder_spec.empty()) {
      cfg.hbar_ladder.clear();
      std::string tok;
      std::stringstream ss(ladder_spec);
      while (std::getline(ss, tok, ',')) cfg.hbar_ladder.push_back(std::stod(tok));
    }
    if (basis_size > 0) cfg.basis_size = basis_size;
    if (grid_points > 0) cfg.grid_points = grid_points;
    if (margin > 0) cfg.truncation_margin = margin;
    cfg.validate();

    if (*cmoments) return cmd_moments(cfg, k_max, ab_max, m_hbar, m_tol);
    if (*ccoeffs) return cmd_coeffs(c_N, c_d);
    if (*cexp) return cmd_expansion(cfg, e_symbol, e_N);
    if (*ccomp) return cmd_composition(cfg, comp_kind, comp_k);
    if (*cmux) return cmd_multiplex(cfg, mux_n, mux_seed, mux_hbar);
    if (*cexport) return cmd_export(cfg, x_object, params, x_path);
    std::fprintf(stderr, "no subcommand given\n");
    return 2;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
