#pragma once

// Test-only reference routines. Nothing here calls into the library's
// numerical kernels; they exist to check those kernels independently.

#include "covadmm/matrix_core.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace oracle {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Cyclic Jacobi eigenvalue iteration; eigenvalues sorted descending.
inline VectorXd jacobi_eigenvalues(MatrixXd a, int sweeps = 100) {
  const auto p = a.rows();
  for (int s = 0; s < sweeps; ++s) {
    double off = 0.0;
    for (Eigen::Index i = 0; i < p; ++i)
      for (Eigen::Index j = i + 1; j < p; ++j) off += a(i, j) * a(i, j);
    if (off < 1e-30) break;
    for (Eigen::Index i = 0; i < p; ++i) {
      for (Eigen::Index j = i + 1; j < p; ++j) {
        if (std::abs(a(i, j)) < 1e-300) continue;
        const double theta = (a(j, j) - a(i, i)) / (2.0 * a(i, j));
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (Eigen::Index k = 0; k < p; ++k) {
          const double aki = a(k, i), akj = a(k, j);
          a(k, i) = c * aki - sn * akj;
          a(k, j) = sn * aki + c * akj;
        }
        for (Eigen::Index k = 0; k < p; ++k) {
          const double aik = a(i, k), ajk = a(j, k);
          a(i, k) = c * aik - sn * ajk;
          a(j, k) = sn * aik + c * ajk;
        }
      }
    }
  }
  std::vector<double> ev(static_cast<std::size_t>(p));
  for (Eigen::Index i = 0; i < p; ++i) ev[static_cast<std::size_t>(i)] = a(i, i);
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return Eigen::Map<VectorXd>(ev.data(), p);
}

inline MatrixXd random_symmetric(Eigen::Index p, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale);
  MatrixXd m(p, p);
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index i = j; i < p; ++i) m(i, j) = m(j, i) = nd(rng);
  return m;
}

// Unit diagonal, N(0, spread^2) off-diagonal; not necessarily PSD, so its
// thresholded version is usually indefinite even for large penalties.
inline MatrixXd random_unit_diagonal(Eigen::Index p, double spread, std::mt19937_64& rng) {
  MatrixXd m = random_symmetric(p, rng, spread);
  m.diagonal().setOnes();
  return m;
}

// Random symmetric matrix shifted so its smallest eigenvalue is >= floor.
inline MatrixXd random_in_cone(Eigen::Index p, double floor, std::mt19937_64& rng) {
  MatrixXd m = random_symmetric(p, rng);
  const double lo = jacobi_eigenvalues(m)(p - 1);
  std::uniform_real_distribution<double> extra(0.0, 0.5);
  if (lo < floor) m += (floor - lo + extra(rng)) * MatrixXd::Identity(p, p);
  return m;
}

// Correlation matrix of n standard-normal rows; n < p gives a rank-deficient
// input whose thresholded version is typically indefinite.
inline MatrixXd random_correlation(Eigen::Index p, Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  MatrixXd x(n, p);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < p; ++j) x(i, j) = nd(rng);
  const Eigen::RowVectorXd mean = x.colwise().mean();
  x.rowwise() -= mean;
  MatrixXd s = x.transpose() * x / static_cast<double>(n);
  VectorXd d = s.diagonal().cwiseSqrt().cwiseInverse();
  MatrixXd r = d.asDiagonal() * s * d.asDiagonal();
  r = 0.5 * (r + r.transpose()).eval();
  r.diagonal().setOnes();
  return r;
}

// 0.5*||X - S||^2 + lambda * sum_{j != k} |x_jk|, computed from scratch.
inline double penalized_objective(const MatrixXd& x, const MatrixXd& s, double lambda) {
  double fit = 0.0, pen = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      fit += (x(i, j) - s(i, j)) * (x(i, j) - s(i, j));
      if (i != j) pen += std::abs(x(i, j));
    }
  return 0.5 * fit + lambda * pen;
}

}  // namespace oracle
