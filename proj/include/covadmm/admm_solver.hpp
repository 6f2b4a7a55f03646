#pragma once

#include "covadmm/matrix_core.hpp"
#include "covadmm/proximal_ops.hpp"

#include <vector>

namespace covadmm {

/// Parameters of the alternating direction iteration.
struct SolverConfig {
  double lambda = 0.0;       // off-diagonal l1 penalty
  double eps = 1e-4;         // eigenvalue floor of the feasible cone
  double mu = 2.0;           // augmented-Lagrangian coupling
  double tol_primal = 1e-7;  // on ||Theta - Sigma||_F, relative to max(1, ||S_n||_F)
  double tol_dual = 1e-7;    // on ||Sigma^{i+1} - Sigma^i||_F / mu, same scaling
  int max_iter = 20000;
  bool record_trace = true;  // keep per-iteration residuals and objective

  /// Throws InvalidInput unless lambda >= 0, eps/mu/tolerances > 0, max_iter >= 1.
  void validate() const;
};

/// Iterate triple (Theta, Sigma, Lambda). The multiplier is Lambda.
struct AdmmState {
  SymMatrix theta;
  SymMatrix sigma;
  SymMatrix multiplier;
  int iter = 0;
};

struct Diagnostics {
  std::vector<double> primal_residuals;  // ||Theta^i - Sigma^i||_F
  std::vector<double> dual_residuals;    // ||Sigma^i - Sigma^{i-1}||_F / mu
  std::vector<double> objective_trace;   // objective(Sigma^i).total
  // ||U^i - U_final||_G for i = 0..iterations, U = (Lambda, Sigma); see
  // attach_g_distances().
  std::vector<double> g_distances;
};

struct EstimationResult {
  SymMatrix estimate;
  bool converged = false;
  int iterations = 0;
  bool shortcut_used = false;
  double kkt_residual = 0.0;
  Diagnostics diagnostics;
  double min_eig = 0.0;
  AdmmState final_state;  // terminal iterate; usable as a warm start
};

/// Theta = Sigma = soft-threshold estimator, Lambda = 0.
AdmmState init_state(const SymMatrix& s_n, const SolverConfig& cfg);

/// (Sigma + mu * Lambda)_+ projected onto {X >= eps I}.
SymMatrix theta_step(const AdmmState& state, const SolverConfig& cfg);

/// S(mu (S_n - Lambda) + Theta_next, lambda mu) / (1 + mu), diagonal unthresholded.
SymMatrix sigma_step(const AdmmState& state, const SymMatrix& theta_next, const SymMatrix& s_n,
                     const SolverConfig& cfg);

/// Lambda - (Theta_next - Sigma_next) / mu.
SymMatrix multiplier_step(const AdmmState& state, const SymMatrix& theta_next,
                          const SymMatrix& sigma_next, const SolverConfig& cfg);

/// Minimize 0.5*||Sigma - S_n||_F^2 + lambda*|Sigma|_1 subject to Sigma >= eps I.
///
/// If the soft-threshold estimator already has min eigenvalue >= eps it is
/// returned unchanged with zero iterations. Otherwise the ADMM cycle runs
/// from `warm_start` (or init_state) until both residual tests pass or
/// max_iter is reached; the latter yields converged == false, not an error.
///
/// The returned estimate is the terminal Theta with off-diagonal entries
/// zeroed wherever the terminal Sigma is exactly zero (or |Theta_jk| <= 1e-10),
/// followed by a diagonal shift when that masking pushed the minimum
/// eigenvalue below eps. The shift is bounded by ||Theta - Sigma||_2.
EstimationResult solve(const SymMatrix& s_n, const SolverConfig& cfg,
                       const AdmmState* warm_start = nullptr);

/// Scaled optimality violation of a candidate (Theta, Sigma, Lambda); the
/// max of the equality gap, diagonal stationarity, off-diagonal subgradient
/// distance and the cone-side feasibility / variational-inequality terms.
double kkt_residuals(const SymMatrix& theta, const SymMatrix& sigma, const SymMatrix& multiplier,
                     const SymMatrix& s_n, const SolverConfig& cfg);

/// mu * ||Lambda_part||_F^2 + ||Sigma_part||_F^2 / mu.
double g_norm_sq(const SymMatrix& multiplier_part, const SymMatrix& sigma_part, double mu);

/// Replays the (deterministic) iteration of a finished solve and fills
/// result.diagnostics.g_distances with ||U^i - U_final||_G. Shortcut results
/// get a single zero entry.
void attach_g_distances(EstimationResult& result, const SymMatrix& s_n, const SolverConfig& cfg,
                        const AdmmState* warm_start = nullptr);

/// Test oracle, independent of the ADMM route: the estimator is the prox of
/// lambda*|.|_1 + indicator{X >= eps I} at S_n, computed by Dykstra-type
/// alternation between soft-thresholding and cone projection. Returns the
/// feasible (cone-side) iterate. Only intended for dim <= 25.
SymMatrix reference_solve(const SymMatrix& s_n, const SolverConfig& cfg);

}  // namespace covadmm
