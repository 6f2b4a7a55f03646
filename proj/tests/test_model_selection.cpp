#include <doctest.h>

#include "covadmm/errors.hpp"
#include "covadmm/model_selection.hpp"
#include "covadmm/proximal_ops.hpp"
#include "covadmm/sample_stats.hpp"
#include "oracles.hpp"

#include <random>
#include <set>

using namespace covadmm;

namespace {

DataMatrix gaussian_rows(Index n, Index p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  DataMatrix x(n, p);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < p; ++j) x(i, j) = nd(rng);
  return x;
}

}  // namespace

TEST_CASE("LambdaGrid") {
  const LambdaGrid d = LambdaGrid::defaults();
  REQUIRE(d.size() == 99);
  CHECK(d.values().front() == 0.01);
  CHECK(d.values()[34] == 0.35);
  CHECK(d.values().back() == 0.99);

  const LambdaGrid parsed = LambdaGrid::parse("0.01:0.01:0.99");
  CHECK(parsed.values() == d.values());
  CHECK(LambdaGrid::parse("0.5:0.5:0.5").size() == 1);
  CHECK(LambdaGrid::parse("0.1:0.2:1.0").values() == std::vector<double>{0.1, 0.3, 0.5, 0.7, 0.9});

  CHECK_THROWS_AS(LambdaGrid::parse("0.1:0.1"), InvalidInput);
  CHECK_THROWS_AS(LambdaGrid::parse("a:0.1:1"), InvalidInput);
  CHECK_THROWS_AS(LambdaGrid::parse("0:0.1:1"), InvalidInput);
  CHECK_THROWS_AS(LambdaGrid::parse("0.5:0.1:0.1"), InvalidInput);
  CHECK_THROWS_AS(LambdaGrid::parse("0.1:0:1"), InvalidInput);
  CHECK_THROWS_AS(LambdaGrid(std::vector<double>{0.2, 0.1}), InvalidInput);
  CHECK_THROWS_AS(LambdaGrid(std::vector<double>{}), InvalidInput);
}

TEST_CASE("solution_path on identity: every point is a shortcut") {
  const PathResult path = solution_path(SymMatrix::identity(6), LambdaGrid::parse("0.1:0.1:0.5"), {});
  REQUIRE(path.entries.size() == 5);
  for (const auto& e : path.entries) {
    CHECK(e.result.shortcut_used);
    CHECK(e.result.estimate == SymMatrix::identity(6));
  }
}

TEST_CASE("solution_path: full shrinkage beyond the largest off-diagonal") {
  std::mt19937_64 rng(3);
  const SymMatrix s(oracle::random_correlation(6, 4, rng));
  double max_off = 0.0;
  for (Index j = 0; j < 6; ++j)
    for (Index i = j + 1; i < 6; ++i) max_off = std::max(max_off, std::abs(s(i, j)));
  const PathResult path =
      solution_path(s, LambdaGrid(std::vector<double>{max_off * 1.01, max_off * 2}), {});
  for (const auto& e : path.entries) CHECK(e.nnz_offdiag == 0);
}

TEST_CASE("solution_path monotonicity and warm-start equivalence (random 6x6)") {
  std::mt19937_64 rng(6);
  SymMatrix s = SymMatrix::identity(6);
  do {
    s = SymMatrix(oracle::random_correlation(6, 3, rng));
  } while (min_eigenvalue(soft_threshold(s, 0.02)) >= 1e-4);
  const LambdaGrid grid = LambdaGrid::parse("0.02:0.04:0.98");
  const PathResult path = solution_path(s, grid, {});
  REQUIRE(path.entries.size() == grid.size());
  int iterated = 0;
  for (std::size_t k = 0; k < path.entries.size(); ++k) {
    const PathEntry& e = path.entries[k];
    CHECK(e.lambda == grid.values()[k]);
    CHECK(e.result.converged);
    if (!e.result.shortcut_used) ++iterated;
    if (k > 0) {
      const PathEntry& prev = path.entries[k - 1];
      CHECK(objective(e.result.estimate, s, 0.0).data_fit >=
            objective(prev.result.estimate, s, 0.0).data_fit - 1e-9);
      CHECK(e.nnz_offdiag <= prev.nnz_offdiag);
    }
    SolverConfig cold;
    cold.lambda = e.lambda;
    const double cold_obj = objective(solve(s, cold).estimate, s, e.lambda).total;
    CHECK(std::abs(e.objective - cold_obj) <= 1e-5);
  }
  CHECK(iterated > 0);
}

TEST_CASE("fold_partition is a balanced true partition") {
  for (Index n : {10, 11, 50, 53}) {
    const auto parts = fold_partition(n, 5, 17);
    REQUIRE(parts.size() == 5);
    std::multiset<Index> seen;
    std::size_t lo = n, hi = 0;
    for (const auto& f : parts) {
      seen.insert(f.begin(), f.end());
      lo = std::min(lo, f.size());
      hi = std::max(hi, f.size());
    }
    CHECK(seen.size() == static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) CHECK(seen.count(i) == 1);
    CHECK(hi - lo <= 1);
  }
  CHECK(fold_partition(20, 4, 1) == fold_partition(20, 4, 1));
  CHECK(fold_partition(20, 4, 1) != fold_partition(20, 4, 2));
  CHECK_THROWS_AS(fold_partition(3, 5, 1), InvalidInput);
  CHECK_THROWS_AS(fold_partition(10, 1, 1), InvalidInput);
}

TEST_CASE("scaled_covariance") {
  const DataMatrix x = gaussian_rows(30, 4, 5) * 3.0;
  const SymMatrix cov = scaled_covariance(x, Scale::Covariance);
  const SymMatrix cor = scaled_covariance(x, Scale::Correlation);
  CHECK(cov == sample_covariance(x));
  for (Index j = 0; j < 4; ++j) CHECK(cor(j, j) == 1.0);
  CHECK(cor(0, 1) == doctest::Approx(cov(0, 1) / std::sqrt(cov(0, 0) * cov(1, 1))));
}

TEST_CASE("cv_select_lambda") {
  const LambdaGrid grid = LambdaGrid::parse("0.05:0.05:0.95");
  const SolverConfig cfg;

  SUBCASE("identity covariance with many rows selects a large lambda") {
    const DataMatrix x = gaussian_rows(2000, 8, 42);
    const CvReport r = cv_select_lambda(x, grid, 5, cfg, 7);
    CHECK(r.cv_losses.size() == grid.size());
    CHECK(r.selected_lambda >= 0.5);
    const CvReport soft = cv_select_lambda(x, grid, 5, cfg, 7, Estimator::SoftThreshold);
    CHECK(soft.selected_lambda >= 0.5);
  }
  SUBCASE("selected lambda attains the minimum, ties to the larger value") {
    const DataMatrix x = gaussian_rows(40, 10, 9);
    const CvReport r = cv_select_lambda(x, grid, 5, cfg, 3);
    double best = r.cv_losses[0];
    for (double v : r.cv_losses) best = std::min(best, v);
    std::size_t last_min = 0;
    for (std::size_t k = 0; k < r.cv_losses.size(); ++k)
      if (r.cv_losses[k] == best) last_min = k;
    CHECK(r.selected_lambda == grid.values()[last_min]);
  }
  SUBCASE("reproducible and schedule-independent") {
    const DataMatrix x = gaussian_rows(30, 12, 10);
    const CvReport a = cv_select_lambda(x, grid, 5, cfg, 11, Estimator::Constrained,
                                        Scale::Correlation, Execution::Parallel);
    const CvReport b = cv_select_lambda(x, grid, 5, cfg, 11, Estimator::Constrained,
                                        Scale::Correlation, Execution::Serial);
    CHECK(a.cv_losses == b.cv_losses);
    CHECK(a.selected_lambda == b.selected_lambda);
    CHECK(a.seed == 11);
  }
  SUBCASE("folds too small") {
    const DataMatrix x = gaussian_rows(9, 3, 1);
    CHECK_THROWS_AS(cv_select_lambda(x, grid, 9, cfg, 1), InvalidInput);
    CHECK_THROWS_AS(cv_select_lambda(x, grid, 5, cfg, 1), InvalidInput);
    CHECK_THROWS_AS(cv_select_lambda(x, grid, 1, cfg, 1), InvalidInput);
  }
  SUBCASE("identical rows still complete") {
    DataMatrix x(20, 4);
    x.rowwise() = Eigen::RowVector4d(1.0, -2.0, 0.5, 3.0);
    CvReport r;
    CHECK_NOTHROW(r = cv_select_lambda(x, grid, 5, cfg, 1));
    for (double v : r.cv_losses) CHECK(std::isfinite(v));
  }
  SUBCASE("duplicated rows (rank-deficient folds) still complete") {
    const DataMatrix half = gaussian_rows(10, 6, 2);
    DataMatrix x(20, 6);
    x << half, half;
    CvReport r;
    CHECK_NOTHROW(r = cv_select_lambda(x, grid, 5, cfg, 1));
  }
}
