#pragma once

#include "covadmm/admm_solver.hpp"
#include "covadmm/matrix_core.hpp"
#include "covadmm/parallel.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace covadmm {

/// Strictly increasing positive penalty values.
class LambdaGrid {
 public:
  explicit LambdaGrid(std::vector<double> values);

  /// {0.01, 0.02, ..., 0.99}.
  static LambdaGrid defaults();
  /// "start:step:end", inclusive of end (to within half a step).
  static LambdaGrid parse(std::string_view spec);

  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }

 private:
  std::vector<double> values_;
};

enum class Estimator { SoftThreshold, Constrained };
// Covariance: sample covariance as is. Correlation: rescale to unit diagonal.
enum class Scale { Covariance, Correlation };

struct PathEntry {
  double lambda = 0.0;
  EstimationResult result;
  double objective = 0.0;
  Index nnz_offdiag = 0;
  double min_eig = 0.0;
  double seconds = 0.0;
};

/// One entry per grid value, in grid (ascending) order.
struct PathResult {
  std::vector<PathEntry> entries;
  double total_seconds = 0.0;
};

/// Solves for every lambda in descending order, warm-starting each solve from
/// the previous terminal state. Non-convergence is recorded per entry.
PathResult solution_path(const SymMatrix& s_n, const LambdaGrid& grid, const SolverConfig& cfg);

struct CvReport {
  int fold_count = 5;
  std::vector<double> lambdas;
  std::vector<double> cv_losses;  // mean over folds, aligned with lambdas
  double selected_lambda = 0.0;
  std::uint64_t seed = 0;
  Estimator estimator = Estimator::Constrained;
};

/// Seeded shuffle of 0..n-1 split into `folds` contiguous groups whose sizes
/// differ by at most one.
std::vector<std::vector<Index>> fold_partition(Index n, int folds, std::uint64_t seed);

/// Sample covariance (divisor n), optionally rescaled to unit diagonal.
/// Zero-variance variables are left unscaled.
SymMatrix scaled_covariance(const DataMatrix& x, Scale scale);

/// K-fold cross-validation of lambda. For each fold the estimator is fit to
/// the out-of-fold rows and scored by ||estimate - S_fold||_F^2 against the
/// held-out rows' covariance. The minimizer of the mean loss is selected,
/// preferring the larger lambda on ties.
CvReport cv_select_lambda(const DataMatrix& x, const LambdaGrid& grid, int folds,
                          const SolverConfig& cfg, std::uint64_t seed,
                          Estimator estimator = Estimator::Constrained,
                          Scale scale = Scale::Correlation,
                          Execution exec = Execution::Parallel);

}  // namespace covadmm
