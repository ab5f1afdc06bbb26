#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lbspec/eigensolver.hpp"
#include "lbspec/types.hpp"

namespace lbspec {

// Full-precision decimal formatting (17 significant digits) so values
// round-trip exactly through text.
std::string format_full(double value);

// Spectrum CSV: header "index,eigenvalue", rows numbered from 1.
void write_spectrum_csv(const Spectrum& spectrum, const std::filesystem::path& path);
VecX read_spectrum_csv(const std::filesystem::path& path);

// Baseline registry CSV: one row of p comma-separated eigenvalues per part;
// an optional header row is auto-detected and skipped.
MatX read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(const MatX& rows, const std::filesystem::path& path,
                      const std::string& header = {});

}  // namespace lbspec
