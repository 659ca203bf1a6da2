#include "polytoep/io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "json.hpp"

namespace polytoep {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

using nlohmann::json;

void write_blob(const std::string& path, const char magic[4], const json& header,
                const Eigen::MatrixXcd& payload) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  std::string h = header.dump();
  std::uint32_t len = static_cast<std::uint32_t>(h.size());
  out.write(magic, 4);
  out.write(reinterpret_cast<const char*>(&len), 4);
  out.write(h.data(), h.size());
  // row-major interleaved re/im
  for (Eigen::Index i = 0; i < payload.rows(); ++i)
    for (Eigen::Index j = 0; j < payload.cols(); ++j) {
      double re = payload(i, j).real(), im = payload(i, j).imag();
      out.write(reinterpret_cast<const char*>(&re), 8);
      out.write(reinterpret_cast<const char*>(&im), 8);
    }
  if (!out) throw std::runtime_error("write failed: " + path);
}

json read_blob(const std::string& path, const char magic[4], Eigen::MatrixXcd& payload,
               int rows, int cols, std::string& header_out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  char m[4];
  in.read(m, 4);
  if (!in || std::memcmp(m, magic, 4) != 0)
    throw std::runtime_error("bad magic in " + path);
  std::uint32_t len = 0;
  in.read(reinterpret_cast<char*>(&len), 4);
  header_out.resize(len);
  in.read(header_out.data(), len);
  if (!in) throw std::runtime_error("truncated header in " + path);
  json h = json::parse(header_out);
  payload.resize(rows < 0 ? h.at("rows").get<int>() : rows,
                 cols < 0 ? h.at("cols").get<int>() : cols);
  for (Eigen::Index i = 0; i < payload.rows(); ++i)
    for (Eigen::Index j = 0; j < payload.cols(); ++j) {
      double re, im;
      in.read(reinterpret_cast<char*>(&re), 8);
      in.read(reinterpret_cast<char*>(&im), 8);
      payload(i, j) = complexd(re, im);
    }
  if (!in) throw std::runtime_error("truncated payload in " + path);
  return h;
}

}  // namespace

void write_fock(const std::string& path, const FockField& f) {
  json h = {{"format", "fock"},
            {"version", 1},
            {"rows", f.nre()},
            {"cols", f.nim()},
            {"re0", f.grid.re.origin},
            {"dre", f.grid.re.step},
            {"im0", f.grid.im.origin},
            {"dim", f.grid.im.step},
            {"hbar", f.hbar.value},
            {"weight_applied", f.weight_applied}};
  write_blob(path, "FOCK", h, f.values);
}

FockField read_fock(const std::string& path) {
  FockField f;
  std::string raw;
  nlohmann::json h = read_blob(path, "FOCK", f.values, -1, -1, raw);
  if (h.at("format") != "fock") throw std::runtime_error("not a fock file: " + path);
  f.grid.re = GridAxis{h.at("re0").get<double>(), h.at("dre").get<double>(),
                       h.at("rows").get<int>()};
  f.grid.im = GridAxis{h.at("im0").get<double>(), h.at("dim").get<double>(),
                       h.at("cols").get<int>()};
  f.hbar = Hbar(h.at("hbar").get<double>());
  f.weight_applied = h.at("weight_applied").get<bool>();
  return f;
}

void write_opm(const std::string& path, const OperatorMatrix& m) {
  json h = {{"format", "opm"},
            {"version", 1},
            {"rows", m.basis_size()},
            {"cols", m.basis_size()},
            {"kind", to_string(m.kind)},
            {"window_k", m.window_k.entries},
            {"hbar", m.hbar.value}};
  write_blob(path, "OPM1", h, m.entries);
}

OperatorMatrix read_opm(const std::string& path) {
  Eigen::MatrixXcd entries;
  std::string raw;
  nlohmann::json h = read_blob(path, "OPM1", entries, -1, -1, raw);
  if (h.at("format") != "opm") throw std::runtime_error("not an opm file: " + path);
  MultiIndex wk(h.at("window_k").get<std::vector<int>>());
  return OperatorMatrix(std::move(entries), operator_kind_from_string(h.at("kind")), wk,
                        Hbar(h.at("hbar").get<double>()));
}

void write_matrix_csv(const std::string& path, const OperatorMatrix& m) {
  if (m.basis_size() > 16)
    throw std::invalid_argument("write_matrix_csv: display export limited to 16x16");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "row,col,re,im\n";
  for (int i = 0; i < m.basis_size(); ++i)
    for (int j = 0; j < m.basis_size(); ++j)
      out << i << "," << j << "," << fmt17(m.entries(i, j).real()) << ","
          << fmt17(m.entries(i, j).imag()) << "\n";
}

void write_phase_field_csv(const std::string& path, const PhaseField& f) {
  double peak = f.max_abs();
  double imax = f.values.imag().cwiseAbs().maxCoeff();
  if (peak > 0.0 && imax > 1e-10 * peak)
    throw std::invalid_argument("write_phase_field_csv: field is not real");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "q,p,value\n";
  for (int i = 0; i < f.nq(); ++i)
    for (int j = 0; j < f.np(); ++j)
      out << fmt17(f.q(i)) << "," << fmt17(f.p(j)) << ","
          << fmt17(f.values(i, j).real()) << "\n";
}

}  // namespace polytoep
