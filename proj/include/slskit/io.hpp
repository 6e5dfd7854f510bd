#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "slskit/fir.hpp"
#include "slskit/signal.hpp"

namespace slskit::io {

// Spectral-element text format: per block one header line
//   <name> <rows> <cols> <start> <horizon>
// followed by horizon-start+1 matrices, each printed as <rows> lines of
// <cols> values. Values use %.17g so doubles round-trip exactly.
void write_fir_block(std::ostream& os, const std::string& name, const FirTransferMatrix& m);
std::map<std::string, FirTransferMatrix> read_fir_blocks(std::istream& is);

void write_params_file(const std::filesystem::path& path,
                       const std::vector<std::pair<std::string, const FirTransferMatrix*>>& blocks);
std::map<std::string, FirTransferMatrix> read_params_file(const std::filesystem::path& path);

const FirTransferMatrix& require_block(const std::map<std::string, FirTransferMatrix>& blocks,
                                       const std::string& name);

/// Plain-text matrix: rows are lines, entries whitespace-separated decimals.
Matrix read_matrix(std::istream& is, const std::string& source_name = "<stream>");
Matrix read_matrix_file(const std::filesystem::path& path);

/// CSV schema: header "t,0,1,...", one row per step, values in scientific
/// notation with 9 significant digits.
void write_signal_csv(const std::filesystem::path& path, const Signal& s);

/// Portable graymap (P2), one pixel per (entry, step): rows are signal
/// entries, columns time steps, intensity clamp(log10|v|, -8, 1) mapped
/// linearly onto 0..255.
void write_signal_pgm(const std::filesystem::path& path, const Signal& s);

}  // namespace slskit::io
