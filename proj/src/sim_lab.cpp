#include "covadmm/sim_lab.hpp"

#include "covadmm/errors.hpp"

#include <cmath>
#include <exception>
#include <random>
#include <string>

namespace covadmm {

// ---------------------------------------------------------------- statistics

SymMatrix sample_covariance(const DataMatrix& x) {
  if (x.rows() < 2) throw InvalidInput("sample covariance needs at least 2 rows");
  if (!x.allFinite()) throw InvalidInput("data matrix has non-finite entries");
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const DataMatrix centered = x.rowwise() - mean;
  Eigen::MatrixXd s = (centered.transpose() * centered) / static_cast<double>(x.rows());
  // The product is symmetric up to rounding; copy the lower triangle over.
  s.triangularView<Eigen::StrictlyUpper>() = s.transpose();
  return SymMatrix(std::move(s));
}

DataMatrix standardize(const DataMatrix& x) {
  if (x.rows() < 2) throw InvalidInput("standardize needs at least 2 rows");
  DataMatrix out(x.rows(), x.cols());
  const double dof = static_cast<double>(x.rows() - 1);
  for (Index j = 0; j < x.cols(); ++j) {
    const auto col = x.col(j);
    const double mean = col.mean();
    const Eigen::VectorXd centered = col.array() - mean;
    const double var = centered.squaredNorm() / dof;
    if (!(var > 0.0) || !std::isfinite(var))
      throw InvalidInput("column " + std::to_string(j) + " has zero variance");
    out.col(j) = centered / std::sqrt(var);
  }
  return out;
}

SymMatrix to_correlation(const SymMatrix& s) {
  Eigen::VectorXd inv_sd(s.dim());
  for (Index j = 0; j < s.dim(); ++j) {
    const double d = s(j, j);
    inv_sd(j) = d > 0.0 ? 1.0 / std::sqrt(d) : 1.0;
  }
  Eigen::MatrixXd r = inv_sd.asDiagonal() * s.matrix() * inv_sd.asDiagonal();
  for (Index j = 0; j < s.dim(); ++j)
    if (s(j, j) > 0.0) r(j, j) = 1.0;
  return SymMatrix(std::move(r));
}

// ------------------------------------------------------------ ground truths

GroundTruth make_ground_truth(SymMatrix sigma0) {
  if (sigma0.dim() < 1) throw InvalidInput("ground truth must have p >= 1");
  const double lo = min_eigenvalue(sigma0);
  if (!(lo > 0.0))
    throw InvalidInput("ground truth covariance is not positive definite (min eigenvalue " +
                       std::to_string(lo) + ")");
  GroundTruth g;
  g.active_set_size = 2 * nnz_offdiag(sigma0);
  g.sigma0 = std::move(sigma0);
  return g;
}

GroundTruth model1_cov(Index p) {
  if (p < 1) throw InvalidInput("model 1 needs p >= 1");
  Eigen::MatrixXd m(p, p);
  for (Index j = 0; j < p; ++j)
    for (Index i = 0; i < p; ++i) {
      const auto gap = static_cast<double>(i > j ? i - j : j - i);
      m(i, j) = std::max(1.0 - gap / 10.0, 0.0);
    }
  return make_ground_truth(SymMatrix(std::move(m)));
}

GroundTruth model2_cov(Index p) {
  constexpr Index kBlock = 20;
  if (p < kBlock || p % kBlock != 0)
    throw InvalidInput("model 2 needs p to be a positive multiple of 20, got " + std::to_string(p));
  const Index blocks = p / kBlock;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p, p);
  for (Index k = 0; k < blocks; ++k) {
    const Index lo = k * kBlock;
    m.block(lo, lo, kBlock, kBlock).setConstant(0.4);
    if (k + 1 < blocks) {
      // Last index of block k couples to all of block k + 1.
      const Index tail = lo + kBlock - 1;
      m.block(tail, lo + kBlock, 1, kBlock).setConstant(0.4);
      m.block(lo + kBlock, tail, kBlock, 1).setConstant(0.4);
    }
  }
  m.diagonal().setConstant(1.0);
  return make_ground_truth(SymMatrix(std::move(m)));
}

GroundTruth ground_truth_for(int model, Index p) {
  switch (model) {
    case 1: return model1_cov(p);
    case 2: return model2_cov(p);
    default: throw InvalidInput("model must be 1 or 2, got " + std::to_string(model));
  }
}

DataMatrix mvn_sample(Index n, const GroundTruth& truth, std::uint64_t seed) {
  if (n < 2) throw InvalidInput("mvn_sample needs n >= 2");
  const Eigen::LLT<Eigen::MatrixXd> chol(truth.sigma0.matrix());
  if (chol.info() != Eigen::Success)
    throw InvalidInput("covariance is not positive definite; Cholesky factorization failed");
  const Index p = truth.sigma0.dim();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  DataMatrix z(n, p);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < p; ++j) z(i, j) = normal(rng);
  return z * chol.matrixL().transpose();
}

// ------------------------------------------------------------------ metrics

MetricsReport metrics(const SymMatrix& estimate, const GroundTruth& truth) {
  const SymMatrix& s0 = truth.sigma0;
  if (estimate.dim() != s0.dim()) throw InvalidInput("metrics: dimension mismatch");
  MetricsReport r;
  const SymMatrix diff = estimate - s0;
  r.frob_loss = frobenius_norm(diff);
  r.spec_loss = spectral_norm(diff);

  Index true_zero = 0, false_pos = 0, true_nonzero = 0, true_pos = 0;
  const Index p = s0.dim();
  for (Index j = 0; j < p; ++j)
    for (Index i = j + 1; i < p; ++i) {
      const bool selected = estimate(i, j) != 0.0;
      if (s0(i, j) == 0.0) {
        ++true_zero;
        if (selected) ++false_pos;
      } else {
        ++true_nonzero;
        if (selected) ++true_pos;
      }
    }
  r.fpr = true_zero > 0 ? static_cast<double>(false_pos) / static_cast<double>(true_zero) : 0.0;
  r.tpr = true_nonzero > 0 ? static_cast<double>(true_pos) / static_cast<double>(true_nonzero) : 0.0;

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(estimate.matrix(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw SolverError("eigenvalue iteration did not converge");
  r.n_neg_eigs = (es.eigenvalues().array() < 0.0).count();
  r.is_pd = es.eigenvalues()(0) > 0.0;
  return r;
}

// --------------------------------------------------------------- experiments

std::uint64_t child_seed(std::uint64_t master, std::uint64_t index) {
  auto splitmix64 = [](std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  };
  return splitmix64(master ^ splitmix64(index + 1));
}

ReplicateOutcome run_replicate(const ExperimentConfig& cfg, const GroundTruth& truth,
                               std::uint64_t seed) {
  ReplicateOutcome out;
  out.seed = seed;
  const DataMatrix x = standardize(mvn_sample(cfg.n, truth, seed));
  const SymMatrix s_n = scaled_covariance(x, cfg.scale);

  SolverConfig fit = cfg.solver;
  fit.record_trace = false;
  // Both estimators see the same folds.
  const std::uint64_t cv_seed = child_seed(seed, 0);

  const CvReport soft_cv = cv_select_lambda(x, cfg.grid, cfg.folds, fit, cv_seed,
                                            Estimator::SoftThreshold, cfg.scale, Execution::Serial);
  const CvReport con_cv = cv_select_lambda(x, cfg.grid, cfg.folds, fit, cv_seed,
                                           Estimator::Constrained, cfg.scale, Execution::Serial);
  out.soft_lambda = soft_cv.selected_lambda;
  out.constrained_lambda = con_cv.selected_lambda;

  out.soft = metrics(soft_threshold_estimator(s_n, out.soft_lambda), truth);
  fit.lambda = out.constrained_lambda;
  const EstimationResult con = solve(s_n, fit);
  out.constrained = metrics(con.estimate, truth);
  out.constrained_converged = con.converged;
  out.constrained_min_eig = con.min_eig;
  out.constrained_kkt = con.kkt_residual / std::max(1.0, frobenius_norm(s_n));
  out.constrained_iterations = con.iterations;
  return out;
}

MetricSummary summarize(const std::vector<double>& values) {
  MetricSummary s;
  if (values.empty()) return s;
  const auto r = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / r;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.se = std::sqrt(ss / (r - 1.0)) / std::sqrt(r);
  }
  return s;
}

namespace {

EstimatorSummary summarize_estimator(const std::string& name,
                                     const std::vector<ReplicateOutcome>& outcomes, bool constrained) {
  std::vector<double> frob, spec, fpr, tpr, neg, lam;
  EstimatorSummary s;
  s.name = name;
  for (const auto& o : outcomes) {
    const MetricsReport& m = constrained ? o.constrained : o.soft;
    frob.push_back(m.frob_loss);
    spec.push_back(m.spec_loss);
    fpr.push_back(m.fpr);
    tpr.push_back(m.tpr);
    neg.push_back(static_cast<double>(m.n_neg_eigs));
    lam.push_back(constrained ? o.constrained_lambda : o.soft_lambda);
    if (m.is_pd) ++s.pd_count;
    if (constrained && !o.constrained_converged) ++s.nonconverged;
  }
  s.frob_loss = summarize(frob);
  s.spec_loss = summarize(spec);
  s.fpr = summarize(fpr);
  s.tpr = summarize(tpr);
  s.n_neg_eigs = summarize(neg);
  s.selected_lambda = summarize(lam);
  return s;
}

}  // namespace

ExperimentSummary run_experiment(const ExperimentConfig& cfg) {
  if (cfg.replicates < 1) throw InvalidInput("replicates must be >= 1");
  if (cfg.n < 2 * cfg.folds) throw InvalidInput("n must allow at least 2 rows per CV fold");
  cfg.solver.validate();
  const GroundTruth truth = ground_truth_for(cfg.model, cfg.p);

  ExperimentSummary summary;
  summary.model = cfg.model;
  summary.p = cfg.p;
  summary.n = cfg.n;
  summary.replicates = cfg.replicates;
  summary.master_seed = cfg.master_seed;
  summary.seeds.resize(static_cast<std::size_t>(cfg.replicates));
  summary.outcomes.resize(static_cast<std::size_t>(cfg.replicates));
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(cfg.replicates));

  const long reps = cfg.replicates;
#pragma omp parallel for schedule(dynamic, 1) if (cfg.exec == Execution::Parallel)
  for (long r = 0; r < reps; ++r) {
    const auto idx = static_cast<std::size_t>(r);
    try {
      summary.seeds[idx] = child_seed(cfg.master_seed, static_cast<std::uint64_t>(r));
      summary.outcomes[idx] = run_replicate(cfg, truth, summary.seeds[idx]);
    } catch (const InvalidInput& e) {
      failures[idx] = std::make_exception_ptr(
          InvalidInput("replicate " + std::to_string(r) + ": " + e.what()));
    } catch (const std::exception& e) {
      failures[idx] = std::make_exception_ptr(
          SolverError("replicate " + std::to_string(r) + ": " + e.what()));
    }
  }
  for (const auto& failure : failures)
    if (failure) std::rethrow_exception(failure);

  summary.soft = summarize_estimator("soft_threshold", summary.outcomes, false);
  summary.constrained = summarize_estimator("constrained", summary.outcomes, true);
  return summary;
}

}  // namespace covadmm
