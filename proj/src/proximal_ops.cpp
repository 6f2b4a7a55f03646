#include "covadmm/proximal_ops.hpp"

#include "covadmm/errors.hpp"

#include <cmath>

namespace covadmm {

namespace {

void require_nonneg(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidInput(std::string(name) + " must be finite and >= 0");
}

void require_same_dim(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) throw InvalidInput("dimension mismatch");
}

}  // namespace

SymMatrix soft_threshold(const SymMatrix& z, double tau) {
  require_nonneg(tau, "threshold tau");
  Eigen::MatrixXd out = z.matrix();
  const Index p = z.dim();
  for (Index j = 0; j < p; ++j) {
    for (Index i = j + 1; i < p; ++i) {
      const double v = out(i, j);
      const double mag = std::abs(v) - tau;
      const double shrunk = mag > 0.0 ? std::copysign(mag, v) : 0.0;
      out(i, j) = shrunk;
      out(j, i) = shrunk;
    }
  }
  return SymMatrix(std::move(out));
}

Objective objective(const SymMatrix& sigma, const SymMatrix& s_n, double lambda) {
  require_same_dim(sigma, s_n);
  require_nonneg(lambda, "lambda");
  Objective obj;
  obj.data_fit = 0.5 * (sigma.matrix() - s_n.matrix()).squaredNorm();
  obj.penalty = lambda * offdiag_l1(sigma);
  obj.total = obj.data_fit + obj.penalty;
  return obj;
}

SymMatrix soft_threshold_estimator(const SymMatrix& s_n, double lambda) {
  return soft_threshold(s_n, lambda);
}

double augmented_lagrangian(const SymMatrix& theta, const SymMatrix& sigma,
                            const SymMatrix& multiplier, const SymMatrix& s_n,
                            double lambda, double mu) {
  require_same_dim(theta, sigma);
  require_same_dim(theta, multiplier);
  require_same_dim(theta, s_n);
  if (!(mu > 0.0) || !std::isfinite(mu)) throw InvalidInput("mu must be > 0");
  const Eigen::MatrixXd gap = theta.matrix() - sigma.matrix();
  return objective(sigma, s_n, lambda).total -
         multiplier.matrix().cwiseProduct(gap).sum() + gap.squaredNorm() / (2.0 * mu);
}

}  // namespace covadmm
