#pragma once

#include <Eigen/Dense>

#include <span>

namespace covadmm {

using Index = Eigen::Index;
using DataMatrix = Eigen::MatrixXd;  // rows = observations, cols = variables

/// Dense real symmetric matrix.
///
/// Construction checks finiteness and symmetry. Inputs whose asymmetry is at
/// most kSymmetryTolerance elementwise are replaced by (A + A^T) / 2, so the
/// stored entries are always exactly symmetric; anything worse is rejected.
class SymMatrix {
 public:
  static constexpr double kSymmetryTolerance = 1e-8;

  SymMatrix() = default;
  explicit SymMatrix(Eigen::MatrixXd entries);

  static SymMatrix zero(Index p);
  static SymMatrix identity(Index p);
  static SymMatrix diagonal(std::span<const double> diag);

  Index dim() const { return m_.rows(); }
  double operator()(Index i, Index j) const { return m_(i, j); }
  const Eigen::MatrixXd& matrix() const { return m_; }

  SymMatrix operator+(const SymMatrix& rhs) const;
  SymMatrix operator-(const SymMatrix& rhs) const;
  SymMatrix operator*(double s) const;
  SymMatrix operator/(double s) const;
  friend SymMatrix operator*(double s, const SymMatrix& a) { return a * s; }

  bool operator==(const SymMatrix& rhs) const;

 private:
  struct Trusted {};
  // Caller guarantees exact symmetry (e.g. sums of symmetric matrices).
  SymMatrix(Eigen::MatrixXd entries, Trusted) : m_(std::move(entries)) {}

  Eigen::MatrixXd m_;
};

/// Eigenvalues sorted descending with matching orthonormal eigenvector columns.
struct EigenDecomposition {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

// Symmetric tridiagonalization + implicit QR (Eigen::SelfAdjointEigenSolver).
EigenDecomposition eigh(const SymMatrix& a);

/// Frobenius-nearest matrix with all eigenvalues >= eps:
/// sum_i max(lambda_i, eps) v_i v_i^T.
SymMatrix project_to_cone(const SymMatrix& z, double eps);

double frobenius_norm(const SymMatrix& a);
double spectral_norm(const SymMatrix& a);
// Sum of |a_jk| over j != k (both triangles).
double offdiag_l1(const SymMatrix& a);
double min_eigenvalue(const SymMatrix& a);
// Entrywise inner product <A, B> = trace(A^T B).
double inner(const SymMatrix& a, const SymMatrix& b);
// Number of nonzero entries strictly above the diagonal.
Index nnz_offdiag(const SymMatrix& a);

}  // namespace covadmm
