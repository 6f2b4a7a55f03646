#pragma once

#include "covadmm/matrix_core.hpp"

namespace covadmm {

/// Penalized least-squares objective 0.5*||Sigma - S_n||_F^2 + lambda*|Sigma|_1,
/// where |.|_1 sums absolute off-diagonal entries only.
struct Objective {
  double data_fit = 0.0;
  double penalty = 0.0;
  double total = 0.0;
};

/// Off-diagonal soft-thresholding: sign(z) * max(|z| - tau, 0) for j != k,
/// diagonal passed through. Shrunk entries are stored as exact 0.0.
SymMatrix soft_threshold(const SymMatrix& z, double tau);

Objective objective(const SymMatrix& sigma, const SymMatrix& s_n, double lambda);

/// Unconstrained minimizer of the penalized objective; may be indefinite.
SymMatrix soft_threshold_estimator(const SymMatrix& s_n, double lambda);

// L(Theta, Sigma; Lambda) = objective(Sigma) - <Lambda, Theta - Sigma>
//                           + ||Theta - Sigma||_F^2 / (2 mu)
double augmented_lagrangian(const SymMatrix& theta, const SymMatrix& sigma,
                            const SymMatrix& multiplier, const SymMatrix& s_n,
                            double lambda, double mu);

}  // namespace covadmm
