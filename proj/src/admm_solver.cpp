#include "covadmm/admm_solver.hpp"

#include "covadmm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace covadmm {

namespace {

// Entries of the returned estimate at or below this magnitude are zeroed.
constexpr double kZeroFloor = 1e-10;

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

void require_same_dim(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim())
    throw InvalidInput("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                       std::to_string(b.dim()));
}

double residual_scale(const SymMatrix& s_n) { return std::max(1.0, frobenius_norm(s_n)); }

struct CycleOutcome {
  double primal;
  double dual;
};

// One Theta / Sigma / Lambda cycle, in place.
CycleOutcome cycle(AdmmState& st, const SymMatrix& s_n, const SolverConfig& cfg) {
  SymMatrix theta = theta_step(st, cfg);
  SymMatrix sigma = sigma_step(st, theta, s_n, cfg);
  SymMatrix mult = multiplier_step(st, theta, sigma, cfg);
  CycleOutcome out;
  out.primal = (theta.matrix() - sigma.matrix()).norm();
  out.dual = (sigma.matrix() - st.sigma.matrix()).norm() / cfg.mu;
  st.theta = std::move(theta);
  st.sigma = std::move(sigma);
  st.multiplier = std::move(mult);
  ++st.iter;
  return out;
}

bool residuals_pass(const CycleOutcome& c, const SolverConfig& cfg, double scale) {
  return c.primal <= cfg.tol_primal * scale && c.dual <= cfg.tol_dual * scale;
}

AdmmState starting_state(const SymMatrix& s_n, const SolverConfig& cfg,
                         const AdmmState* warm_start) {
  if (warm_start == nullptr) return init_state(s_n, cfg);
  require_same_dim(warm_start->theta, s_n);
  require_same_dim(warm_start->sigma, s_n);
  require_same_dim(warm_start->multiplier, s_n);
  AdmmState st = *warm_start;
  st.iter = 0;
  return st;
}

SymMatrix sparse_feasible_estimate(const AdmmState& st, double eps, double& min_eig) {
  Eigen::MatrixXd m = st.theta.matrix();
  const Index p = m.rows();
  for (Index j = 0; j < p; ++j) {
    for (Index i = j + 1; i < p; ++i) {
      if (st.sigma(i, j) == 0.0 || std::abs(m(i, j)) <= kZeroFloor) {
        m(i, j) = 0.0;
        m(j, i) = 0.0;
      }
    }
  }
  SymMatrix out(std::move(m));
  min_eig = min_eigenvalue(out);
  if (min_eig < eps) {
    out = out + SymMatrix::identity(p) * (eps - min_eig);
    min_eig = min_eigenvalue(out);
  }
  return out;
}

}  // namespace

void SolverConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidInput("lambda must be finite and >= 0");
  if (!positive_finite(eps)) throw InvalidInput("eps must be > 0");
  if (!positive_finite(mu)) throw InvalidInput("mu must be > 0");
  if (!positive_finite(tol_primal) || !positive_finite(tol_dual))
    throw InvalidInput("tolerances must be > 0");
  if (max_iter < 1) throw InvalidInput("max_iter must be >= 1");
}

AdmmState init_state(const SymMatrix& s_n, const SolverConfig& cfg) {
  cfg.validate();
  SymMatrix start = soft_threshold_estimator(s_n, cfg.lambda);
  return AdmmState{start, start, SymMatrix::zero(s_n.dim()), 0};
}

SymMatrix theta_step(const AdmmState& state, const SolverConfig& cfg) {
  return project_to_cone(state.sigma + state.multiplier * cfg.mu, cfg.eps);
}

SymMatrix sigma_step(const AdmmState& state, const SymMatrix& theta_next, const SymMatrix& s_n,
                     const SolverConfig& cfg) {
  require_same_dim(state.sigma, s_n);
  require_same_dim(theta_next, s_n);
  const SymMatrix target = (s_n - state.multiplier) * cfg.mu + theta_next;
  return soft_threshold(target, cfg.lambda * cfg.mu) / (1.0 + cfg.mu);
}

SymMatrix multiplier_step(const AdmmState& state, const SymMatrix& theta_next,
                          const SymMatrix& sigma_next, const SolverConfig& cfg) {
  return state.multiplier - (theta_next - sigma_next) / cfg.mu;
}

EstimationResult solve(const SymMatrix& s_n, const SolverConfig& cfg, const AdmmState* warm_start) {
  cfg.validate();
  EstimationResult result;

  SymMatrix thresholded = soft_threshold_estimator(s_n, cfg.lambda);
  const double thresholded_min = min_eigenvalue(thresholded);
  if (thresholded_min >= cfg.eps) {
    result.estimate = thresholded;
    result.converged = true;
    result.iterations = 0;
    result.shortcut_used = true;
    result.min_eig = thresholded_min;
    result.final_state = AdmmState{thresholded, thresholded, SymMatrix::zero(s_n.dim()), 0};
    result.kkt_residual = kkt_residuals(thresholded, thresholded, result.final_state.multiplier,
                                        s_n, cfg);
    return result;
  }

  const double scale = residual_scale(s_n);
  AdmmState st = starting_state(s_n, cfg, warm_start);
  Diagnostics& diag = result.diagnostics;
  if (cfg.record_trace) {
    diag.primal_residuals.reserve(256);
    diag.dual_residuals.reserve(256);
    diag.objective_trace.reserve(256);
  }

  bool converged = false;
  while (st.iter < cfg.max_iter) {
    const CycleOutcome c = cycle(st, s_n, cfg);
    if (cfg.record_trace) {
      diag.primal_residuals.push_back(c.primal);
      diag.dual_residuals.push_back(c.dual);
      diag.objective_trace.push_back(objective(st.sigma, s_n, cfg.lambda).total);
    }
    if (residuals_pass(c, cfg, scale)) {
      converged = true;
      break;
    }
  }

  result.converged = converged;
  result.iterations = st.iter;
  result.shortcut_used = false;
  result.kkt_residual = kkt_residuals(st.theta, st.sigma, st.multiplier, s_n, cfg);
  result.estimate = sparse_feasible_estimate(st, cfg.eps, result.min_eig);
  result.final_state = std::move(st);
  return result;
}

double kkt_residuals(const SymMatrix& theta, const SymMatrix& sigma, const SymMatrix& multiplier,
                     const SymMatrix& s_n, const SolverConfig& cfg) {
  require_same_dim(theta, s_n);
  require_same_dim(sigma, s_n);
  require_same_dim(multiplier, s_n);
  const Index p = s_n.dim();

  double worst = (theta.matrix() - sigma.matrix()).norm();

  // Stationarity in Sigma: (-Lambda - Sigma + S_n)/lambda must be a subgradient
  // of |.| off the diagonal and zero on it.
  const Eigen::MatrixXd g = s_n.matrix() - sigma.matrix() - multiplier.matrix();
  for (Index j = 0; j < p; ++j) {
    worst = std::max(worst, std::abs(g(j, j)));
    for (Index i = j + 1; i < p; ++i) {
      double violation;
      if (cfg.lambda == 0.0) {
        violation = std::abs(g(i, j));
      } else {
        const double u = g(i, j) / cfg.lambda;
        const double s = sigma(i, j);
        violation = s != 0.0 ? std::abs(u - std::copysign(1.0, s)) : std::max(std::abs(u) - 1.0, 0.0);
      }
      worst = std::max(worst, violation);
    }
  }

  // Cone side: feasibility of Theta, and Lambda in the normal cone at Theta
  // (equivalently Theta == proj(Theta + Lambda)).
  worst = std::max(worst, std::max(0.0, cfg.eps - min_eigenvalue(theta)));
  const SymMatrix reprojected = project_to_cone(theta + multiplier, cfg.eps);
  worst = std::max(worst, std::abs(inner(multiplier, theta - reprojected)));
  return worst;
}

double g_norm_sq(const SymMatrix& multiplier_part, const SymMatrix& sigma_part, double mu) {
  require_same_dim(multiplier_part, sigma_part);
  if (!positive_finite(mu)) throw InvalidInput("mu must be > 0");
  return mu * multiplier_part.matrix().squaredNorm() + sigma_part.matrix().squaredNorm() / mu;
}

void attach_g_distances(EstimationResult& result, const SymMatrix& s_n, const SolverConfig& cfg,
                        const AdmmState* warm_start) {
  std::vector<double>& out = result.diagnostics.g_distances;
  out.clear();
  if (result.shortcut_used) {
    out.push_back(0.0);
    return;
  }
  const SymMatrix& lambda_final = result.final_state.multiplier;
  const SymMatrix& sigma_final = result.final_state.sigma;
  auto distance = [&](const AdmmState& st) {
    return std::sqrt(g_norm_sq(st.multiplier - lambda_final, st.sigma - sigma_final, cfg.mu));
  };

  AdmmState st = starting_state(s_n, cfg, warm_start);
  out.reserve(static_cast<std::size_t>(result.iterations) + 1);
  out.push_back(distance(st));
  while (st.iter < result.iterations) {
    cycle(st, s_n, cfg);
    out.push_back(distance(st));
  }
  if (!(st.sigma == sigma_final) || !(st.multiplier == lambda_final))
    throw SolverError("replayed iteration diverged from the recorded solve");
}

}  // namespace covadmm
