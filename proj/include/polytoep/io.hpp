#pragma once

#include <string>

#include "polytoep/bargmann.hpp"
#include "polytoep/phasespace.hpp"
#include "polytoep/quantize.hpp"

namespace polytoep {

/// %.17g formatting used for every CSV number (byte-identical across runs).
std::string fmt17(double v);

// .fock: 'FOCK' magic, u32 LE JSON header length, JSON header (grid spec,
// hbar, weight_applied), then row-major little-endian f64 re/im pairs.
void write_fock(const std::string& path, const FockField& f);
FockField read_fock(const std::string& path);

// .opm: 'OPM1' magic, u32 LE JSON header length, JSON header (n, kind,
// window_k, hbar), then row-major little-endian f64 re/im pairs.
void write_opm(const std::string& path, const OperatorMatrix& m);
OperatorMatrix read_opm(const std::string& path);

/// CSV display export for small matrices (row, col, re, im); n <= 16.
void write_matrix_csv(const std::string& path, const OperatorMatrix& m);

/// Grid CSV with header q,p,value for real fields (imaginary parts below
/// 1e-10 of the peak are dropped; larger ones are an error).
void write_phase_field_csv(const std::string& path, const PhaseField& f);

}  // namespace polytoep
