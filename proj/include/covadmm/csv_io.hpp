#pragma once

#include "covadmm/matrix_core.hpp"

#include <filesystem>
#include <string>

namespace covadmm {

/// Numeric CSV with an optional header row (a first row in which no cell
/// parses as a number). Ragged rows, empty cells and non-numeric cells throw
/// InvalidInput naming the 1-based line.
DataMatrix read_csv_matrix(const std::filesystem::path& path);

// p x p covariance; asymmetry above SymMatrix::kSymmetryTolerance is rejected.
SymMatrix read_covariance_csv(const std::filesystem::path& path);

/// Full matrix, one row per line, 17 significant digits (lossless).
void write_csv_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m);

std::string format_double(double v);

}  // namespace covadmm
