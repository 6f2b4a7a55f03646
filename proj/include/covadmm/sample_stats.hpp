#pragma once

#include "covadmm/matrix_core.hpp"

namespace covadmm {

/// (1/n) sum_i (x_i - xbar)(x_i - xbar)^T. Requires n >= 2.
SymMatrix sample_covariance(const DataMatrix& x);

/// Centers each column and scales it to unit sample variance (divisor n - 1).
/// Throws InvalidInput naming the first zero-variance column.
DataMatrix standardize(const DataMatrix& x);

// D^{-1/2} S D^{-1/2}, skipping variables with zero variance.
SymMatrix to_correlation(const SymMatrix& s);

}  // namespace covadmm
