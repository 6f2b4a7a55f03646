#include "covadmm/matrix_core.hpp"

#include "covadmm/errors.hpp"

#include <cmath>
#include <string>

namespace covadmm {

namespace {

void require_finite(const Eigen::MatrixXd& m) {
  if (!m.allFinite()) throw InvalidInput("matrix has non-finite entries");
}

void require_same_dim(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim())
    throw InvalidInput("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                       std::to_string(b.dim()));
}

Eigen::VectorXd ascending_eigenvalues(const SymMatrix& a) {
  require_finite(a.matrix());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.matrix(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw SolverError("eigenvalue iteration did not converge");
  return es.eigenvalues();
}

}  // namespace

SymMatrix::SymMatrix(Eigen::MatrixXd entries) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols())
    throw InvalidInput("matrix is not square: " + std::to_string(m_.rows()) + "x" +
                       std::to_string(m_.cols()));
  require_finite(m_);
  const Index p = m_.rows();
  for (Index j = 0; j < p; ++j) {
    for (Index i = j + 1; i < p; ++i) {
      const double a = m_(i, j);
      const double b = m_(j, i);
      if (a == b) continue;
      if (std::abs(a - b) > kSymmetryTolerance)
        throw InvalidInput("matrix is not symmetric at (" + std::to_string(i) + ", " +
                           std::to_string(j) + ")");
      const double mid = 0.5 * (a + b);
      m_(i, j) = mid;
      m_(j, i) = mid;
    }
  }
}

SymMatrix SymMatrix::zero(Index p) { return {Eigen::MatrixXd::Zero(p, p), Trusted{}}; }

SymMatrix SymMatrix::identity(Index p) { return {Eigen::MatrixXd::Identity(p, p), Trusted{}}; }

SymMatrix SymMatrix::diagonal(std::span<const double> diag) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Index>(diag.size()),
                                            static_cast<Index>(diag.size()));
  for (std::size_t i = 0; i < diag.size(); ++i) m(static_cast<Index>(i), static_cast<Index>(i)) = diag[i];
  return SymMatrix(std::move(m));
}

SymMatrix SymMatrix::operator+(const SymMatrix& rhs) const {
  require_same_dim(*this, rhs);
  return {m_ + rhs.m_, Trusted{}};
}

SymMatrix SymMatrix::operator-(const SymMatrix& rhs) const {
  require_same_dim(*this, rhs);
  return {m_ - rhs.m_, Trusted{}};
}

SymMatrix SymMatrix::operator*(double s) const { return {m_ * s, Trusted{}}; }

SymMatrix SymMatrix::operator/(double s) const { return {m_ / s, Trusted{}}; }

bool SymMatrix::operator==(const SymMatrix& rhs) const {
  return dim() == rhs.dim() && m_ == rhs.m_;
}

EigenDecomposition eigh(const SymMatrix& a) {
  require_finite(a.matrix());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.matrix(), Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw SolverError("eigenvalue iteration did not converge");
  // Eigen returns ascending order.
  EigenDecomposition out;
  out.values = es.eigenvalues().reverse();
  out.vectors = es.eigenvectors().rowwise().reverse();
  return out;
}

SymMatrix project_to_cone(const SymMatrix& z, double eps) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw InvalidInput("cone floor eps must be >= 0");
  const EigenDecomposition ed = eigh(z);
  const Index p = z.dim();
  Index clamped = 0;
  while (clamped < p && ed.values(p - 1 - clamped) < eps) ++clamped;
  if (clamped == 0) return z;

  Eigen::MatrixXd out;
  if (2 * clamped <= p) {
    // Low-rank correction on the clamped subspace: Z + V_c diag(eps - lambda_c) V_c^T.
    const auto vc = ed.vectors.rightCols(clamped);
    const Eigen::VectorXd lift = (eps - ed.values.tail(clamped).array()).matrix();
    out = z.matrix();
    out.noalias() += vc * lift.asDiagonal() * vc.transpose();
  } else {
    const Eigen::VectorXd clipped = ed.values.cwiseMax(eps);
    out.noalias() = ed.vectors * clipped.asDiagonal() * ed.vectors.transpose();
  }
  out = 0.5 * (out + out.transpose()).eval();
  return SymMatrix(std::move(out));
}

double frobenius_norm(const SymMatrix& a) { return a.matrix().norm(); }

double spectral_norm(const SymMatrix& a) {
  const Eigen::VectorXd ev = ascending_eigenvalues(a);
  if (ev.size() == 0) return 0.0;
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

double offdiag_l1(const SymMatrix& a) {
  double upper = 0.0;
  const Index p = a.dim();
  for (Index j = 0; j < p; ++j)
    for (Index i = 0; i < j; ++i) upper += std::abs(a(i, j));
  return 2.0 * upper;
}

double min_eigenvalue(const SymMatrix& a) {
  const Eigen::VectorXd ev = ascending_eigenvalues(a);
  if (ev.size() == 0) throw InvalidInput("min_eigenvalue of an empty matrix");
  return ev(0);
}

double inner(const SymMatrix& a, const SymMatrix& b) {
  require_same_dim(a, b);
  return a.matrix().cwiseProduct(b.matrix()).sum();
}

Index nnz_offdiag(const SymMatrix& a) {
  Index count = 0;
  const Index p = a.dim();
  for (Index j = 0; j < p; ++j)
    for (Index i = 0; i < j; ++i)
      if (a(i, j) != 0.0) ++count;
  return count;
}

}  // namespace covadmm
