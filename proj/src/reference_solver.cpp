#include "covadmm/admm_solver.hpp"

#include "covadmm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace covadmm {

// The constrained estimator is prox_h(S_n) with h = lambda*|.|_1 + indicator
// of the cone. The Dykstra-like proximal iteration
//   y = P_cone(x + a),        a <- x + a - y
//   x = soft(y + b, lambda),  b <- y + b - x
// started at x = S_n, a = b = 0 converges to prox_h(S_n).
SymMatrix reference_solve(const SymMatrix& s_n, const SolverConfig& cfg) {
  cfg.validate();
  if (s_n.dim() > 25) throw InvalidInput("reference_solve is limited to dim <= 25");
  constexpr int kMaxIter = 1'000'000;
  constexpr double kObjectiveTol = 1e-12;
  constexpr double kAgreementTol = 1e-10;

  const double scale = std::max(1.0, frobenius_norm(s_n));
  const Index p = s_n.dim();
  SymMatrix x = s_n;
  SymMatrix a = SymMatrix::zero(p);
  SymMatrix b = SymMatrix::zero(p);
  double prev_obj = std::numeric_limits<double>::infinity();

  for (int k = 0; k < kMaxIter; ++k) {
    const SymMatrix xa = x + a;
    SymMatrix y = project_to_cone(xa, cfg.eps);
    a = xa - y;
    const SymMatrix yb = y + b;
    x = soft_threshold(yb, cfg.lambda);
    b = yb - x;

    const double obj = objective(y, s_n, cfg.lambda).total;
    const double gap = (x.matrix() - y.matrix()).norm();
    if (std::abs(obj - prev_obj) <= kObjectiveTol * std::max(1.0, std::abs(obj)) &&
        gap <= kAgreementTol * scale)
      return y;
    prev_obj = obj;
  }
  throw OracleFailure("reference_solve did not converge within the iteration cap");
}

}  // namespace covadmm
