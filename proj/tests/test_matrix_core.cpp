#include <doctest.h>

#include "covadmm/errors.hpp"
#include "covadmm/matrix_core.hpp"
#include "oracles.hpp"

#include <cmath>
#include <limits>
#include <random>

using namespace covadmm;

namespace {

SymMatrix sym2(double a, double b, double c) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, b, c;
  return SymMatrix(m);
}

SymMatrix diag(std::initializer_list<double> d) {
  std::vector<double> v(d);
  return SymMatrix::diagonal(v);
}

}  // namespace

TEST_CASE("SymMatrix construction enforces symmetry and finiteness") {
  Eigen::MatrixXd drift(2, 2);
  drift << 1.0, 0.5 + 5e-9, 0.5, 1.0;
  const SymMatrix s(drift);
  CHECK(s(0, 1) == s(1, 0));
  CHECK(s(0, 1) == doctest::Approx(0.5 + 2.5e-9).epsilon(1e-15));

  Eigen::MatrixXd skew(2, 2);
  skew << 1.0, 0.6, 0.5, 1.0;
  CHECK_THROWS_AS(SymMatrix{skew}, InvalidInput);

  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(2, 2);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(SymMatrix{bad}, InvalidInput);
  CHECK_THROWS_AS(SymMatrix{Eigen::MatrixXd::Zero(2, 3)}, InvalidInput);
}

TEST_CASE("eigh on hand-checked inputs") {
  SUBCASE("identity") {
    const auto ed = eigh(SymMatrix::identity(3));
    CHECK(ed.values.isApprox(Eigen::Vector3d(1, 1, 1)));
    CHECK((ed.vectors.transpose() * ed.vectors - Eigen::Matrix3d::Identity()).norm() < 1e-12);
  }
  SUBCASE("diagonal, descending order") {
    const auto ed = eigh(diag({2.0, -1.0}));
    CHECK(ed.values(0) == doctest::Approx(2.0));
    CHECK(ed.values(1) == doctest::Approx(-1.0));
    CHECK(std::abs(ed.vectors(0, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(ed.vectors(1, 1)) == doctest::Approx(1.0));
  }
  SUBCASE("[[1,2],[2,1]]") {
    const auto ed = eigh(sym2(1, 2, 1));
    CHECK(ed.values(0) == doctest::Approx(3.0));
    CHECK(ed.values(1) == doctest::Approx(-1.0));
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(ed.vectors(0, 0)) == doctest::Approx(r));
    CHECK(ed.vectors(0, 0) * ed.vectors(1, 0) == doctest::Approx(0.5));
    CHECK(ed.vectors(0, 1) * ed.vectors(1, 1) == doctest::Approx(-0.5));
  }
  SUBCASE("non-finite input is rejected") {
    // SymMatrix refuses NaN at construction, so eigh never sees one.
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2, 2);
    m(1, 1) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(eigh(SymMatrix(m)), InvalidInput);
  }
}

TEST_CASE("eigh reconstruction and orthonormality up to p = 200") {
  std::mt19937_64 rng(11);
  for (Index p : {1, 2, 5, 17, 60, 200}) {
    const SymMatrix a(oracle::random_symmetric(p, rng));
    const auto ed = eigh(a);
    const double recon =
        (a.matrix() - ed.vectors * ed.values.asDiagonal() * ed.vectors.transpose()).norm();
    CHECK(recon <= 1e-10 * std::max(1.0, a.matrix().norm()));
    CHECK((ed.vectors.transpose() * ed.vectors - Eigen::MatrixXd::Identity(p, p)).norm() <=
          1e-10 * static_cast<double>(p));
    for (Index i = 1; i < p; ++i) CHECK(ed.values(i - 1) >= ed.values(i));
    if (p <= 20) {
      const Eigen::VectorXd ref = oracle::jacobi_eigenvalues(a.matrix());
      CHECK((ref - ed.values).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("eigh is deterministic") {
  std::mt19937_64 rng(3);
  const SymMatrix a(oracle::random_symmetric(40, rng));
  const auto e1 = eigh(a);
  const auto e2 = eigh(a);
  CHECK(e1.values == e2.values);
  CHECK(e1.vectors == e2.vectors);
}

TEST_CASE("project_to_cone examples") {
  CHECK(project_to_cone(SymMatrix::identity(3), 1e-4) == SymMatrix::identity(3));

  const SymMatrix clamped = project_to_cone(diag({2.0, -1.0}), 0.0);
  CHECK(clamped(0, 0) == doctest::Approx(2.0));
  CHECK(clamped(1, 1) == doctest::Approx(0.0));
  CHECK(clamped(0, 1) == doctest::Approx(0.0));

  const SymMatrix p = project_to_cone(sym2(1, 2, 1), 0.0);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) CHECK(p(i, j) == doctest::Approx(1.5).epsilon(1e-12));

  CHECK_THROWS_AS(project_to_cone(SymMatrix::identity(2), -1.0), InvalidInput);
}

TEST_CASE("project_to_cone: feasibility, symmetry, idempotence") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const Index p = 2 + trial % 12;
    const double eps = trial % 3 == 0 ? 0.0 : 1e-4 * trial;
    const SymMatrix z(oracle::random_symmetric(p, rng));
    const SymMatrix once = project_to_cone(z, eps);
    CHECK(min_eigenvalue(once) >= eps - 1e-9);
    CHECK(once.matrix() == once.matrix().transpose());
    const SymMatrix twice = project_to_cone(once, eps);
    CHECK((twice.matrix() - once.matrix()).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("project_to_cone is the nearest feasible point (sampling oracle, 3x3)") {
  std::mt19937_64 rng(21);
  const double eps = 0.05;
  for (int trial = 0; trial < 10; ++trial) {
    const SymMatrix z(oracle::random_symmetric(3, rng));
    const double d_proj = (z.matrix() - project_to_cone(z, eps).matrix()).norm();
    for (int k = 0; k < 1000; ++k) {
      const Eigen::MatrixXd m = oracle::random_in_cone(3, eps, rng);
      CHECK(d_proj <= (z.matrix() - m).norm() + 1e-12);
    }
  }
}

TEST_CASE("norms") {
  CHECK(frobenius_norm(SymMatrix::zero(4)) == 0.0);
  CHECK(frobenius_norm(SymMatrix::identity(3)) == doctest::Approx(std::sqrt(3.0)));
  CHECK(frobenius_norm(sym2(3, 4, 3)) == doctest::Approx(std::sqrt(50.0)));

  CHECK(spectral_norm(SymMatrix::identity(5)) == doctest::Approx(1.0));
  CHECK(spectral_norm(diag({2.0, -3.0})) == doctest::Approx(3.0));
  CHECK(spectral_norm(sym2(1, 2, 1)) == doctest::Approx(3.0));

  CHECK(offdiag_l1(SymMatrix::identity(3)) == 0.0);
  CHECK(offdiag_l1(sym2(1, 0.5, 1)) == doctest::Approx(1.0));
  CHECK(offdiag_l1(SymMatrix::zero(2)) == 0.0);

  CHECK(min_eigenvalue(SymMatrix::identity(2)) == doctest::Approx(1.0));
  CHECK(min_eigenvalue(diag({5.0, -2.0, 0.0})) == doctest::Approx(-2.0));
  CHECK(min_eigenvalue(sym2(1, 2, 1)) == doctest::Approx(-1.0));

  CHECK(nnz_offdiag(sym2(1, 0.5, 1)) == 1);
  CHECK(nnz_offdiag(SymMatrix::identity(4)) == 0);
}

TEST_CASE("spectral norm never exceeds Frobenius norm") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const SymMatrix a(oracle::random_symmetric(1 + trial % 15, rng));
    CHECK(spectral_norm(a) <= frobenius_norm(a) * (1.0 + 1e-12));
  }
}
