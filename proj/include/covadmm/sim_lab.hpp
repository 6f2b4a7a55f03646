#pragma once

#include "covadmm/admm_solver.hpp"
#include "covadmm/matrix_core.hpp"
#include "covadmm/model_selection.hpp"
#include "covadmm/parallel.hpp"
#include "covadmm/sample_stats.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace covadmm {

/// True covariance with its off-diagonal support size s = #{(j,k): j != k, sigma0_jk != 0}
/// (ordered pairs).
struct GroundTruth {
  SymMatrix sigma0;
  Index active_set_size = 0;
};

/// Checks positive definiteness and counts the active set.
GroundTruth make_ground_truth(SymMatrix sigma0);

// sigma0_ij = max(1 - |i - j| / 10, 0).
GroundTruth model1_cov(Index p);
// Blocks of 20: 1 on the diagonal, 0.4 within a block, and 0.4
// linking each block's last index to every index of the next block.
GroundTruth model2_cov(Index p);

/// n i.i.d. rows from N(0, sigma0): standard normals from a seeded
/// mt19937_64 multiplied by the transposed Cholesky factor of sigma0.
DataMatrix mvn_sample(Index n, const GroundTruth& truth, std::uint64_t seed);

struct MetricsReport {
  double frob_loss = 0.0;
  double spec_loss = 0.0;
  double fpr = 0.0;  // over off-diagonal pairs with sigma0 == 0
  double tpr = 0.0;  // over off-diagonal pairs with sigma0 != 0
  Index n_neg_eigs = 0;
  bool is_pd = false;
};

MetricsReport metrics(const SymMatrix& estimate, const GroundTruth& truth);

/// Child seed for replicate `index`: splitmix64(master ^ splitmix64(index + 1)).
/// Depends only on (master, index), so any schedule reproduces it.
std::uint64_t child_seed(std::uint64_t master, std::uint64_t index);

struct ExperimentConfig {
  int model = 1;  // 1 or 2
  Index p = 100;
  Index n = 50;
  int replicates = 100;
  std::uint64_t master_seed = 1;
  SolverConfig solver;
  LambdaGrid grid = LambdaGrid::defaults();
  int folds = 5;
  Scale scale = Scale::Correlation;
  Execution exec = Execution::Parallel;
};

struct ReplicateOutcome {
  std::uint64_t seed = 0;
  double soft_lambda = 0.0;
  double constrained_lambda = 0.0;
  MetricsReport soft;
  MetricsReport constrained;
  bool constrained_converged = true;
  double constrained_min_eig = 0.0;
  double constrained_kkt = 0.0;  // divided by max(1, ||S_n||_F)
  int constrained_iterations = 0;
};

/// Mean and standard error (sample sd / sqrt(R)); se is empty when R == 1.
struct MetricSummary {
  double mean = 0.0;
  std::optional<double> se;
};

struct EstimatorSummary {
  std::string name;
  MetricSummary frob_loss, spec_loss, fpr, tpr, n_neg_eigs, selected_lambda;
  int pd_count = 0;
  int nonconverged = 0;
};

struct ExperimentSummary {
  int model = 1;
  Index p = 0;
  Index n = 0;
  int replicates = 0;
  std::uint64_t master_seed = 0;
  std::vector<std::uint64_t> seeds;
  EstimatorSummary soft;
  EstimatorSummary constrained;
  std::vector<ReplicateOutcome> outcomes;
};

/// Generates ground truth for (model, p); throws InvalidInput for bad combinations.
GroundTruth ground_truth_for(int model, Index p);

/// One replicate: sample, standardize, covariance, CV-select lambda for both
/// estimators, fit, score.
ReplicateOutcome run_replicate(const ExperimentConfig& cfg, const GroundTruth& truth,
                               std::uint64_t seed);

/// Replicate runner. Execution::Serial is the reference schedule;
/// Execution::Parallel distributes replicates over OpenMP threads and gives
/// bit-identical summaries.
ExperimentSummary run_experiment(const ExperimentConfig& cfg);

MetricSummary summarize(const std::vector<double>& values);

}  // namespace covadmm
