#include "covadmm/model_selection.hpp"

#include "covadmm/errors.hpp"
#include "covadmm/sample_stats.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <numeric>
#include <random>
#include <string>

namespace covadmm {

namespace {

double parse_number(std::string_view text) {
  double v = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v))
    throw InvalidInput("bad number in lambda grid: '" + std::string(text) + "'");
  return v;
}

// Snap a value built by repeated addition back onto the decimal grid.
double snap(double v) { return std::round(v * 1e12) / 1e12; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

DataMatrix select_rows(const DataMatrix& x, const std::vector<Index>& rows) {
  DataMatrix out(static_cast<Index>(rows.size()), x.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Index>(r)) = x.row(rows[r]);
  return out;
}

}  // namespace

LambdaGrid::LambdaGrid(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw InvalidInput("lambda grid is empty");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] > 0.0) || !std::isfinite(values_[i]))
      throw InvalidInput("lambda grid values must be positive and finite");
    if (i > 0 && !(values_[i] > values_[i - 1]))
      throw InvalidInput("lambda grid must be strictly increasing");
  }
}

LambdaGrid LambdaGrid::defaults() {
  std::vector<double> v;
  v.reserve(99);
  for (int k = 1; k <= 99; ++k) v.push_back(k / 100.0);
  return LambdaGrid(std::move(v));
}

LambdaGrid LambdaGrid::parse(std::string_view spec) {
  const auto c1 = spec.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : spec.find(':', c1 + 1);
  if (c1 == std::string_view::npos || c2 == std::string_view::npos ||
      spec.find(':', c2 + 1) != std::string_view::npos)
    throw InvalidInput("lambda grid must look like start:step:end, got '" + std::string(spec) + "'");
  const double start = parse_number(spec.substr(0, c1));
  const double step = parse_number(spec.substr(c1 + 1, c2 - c1 - 1));
  const double end = parse_number(spec.substr(c2 + 1));
  if (!(start > 0.0) || !(step > 0.0) || end < start)
    throw InvalidInput("lambda grid needs start > 0, step > 0 and end >= start");
  const double span = (end - start) / step;
  if (span > 1e6) throw InvalidInput("lambda grid has too many points");
  const auto count = static_cast<std::size_t>(std::floor(span + 1e-6)) + 1;
  std::vector<double> v;
  v.reserve(count);
  for (std::size_t k = 0; k < count; ++k) v.push_back(snap(start + static_cast<double>(k) * step));
  return LambdaGrid(std::move(v));
}

PathResult solution_path(const SymMatrix& s_n, const LambdaGrid& grid, const SolverConfig& cfg) {
  const auto t_path = std::chrono::steady_clock::now();
  const std::vector<double>& lambdas = grid.values();
  PathResult path;
  path.entries.resize(lambdas.size());

  SolverConfig local = cfg;
  const AdmmState* warm = nullptr;
  for (std::size_t k = lambdas.size(); k-- > 0;) {
    const auto t0 = std::chrono::steady_clock::now();
    local.lambda = lambdas[k];
    PathEntry& e = path.entries[k];
    e.lambda = lambdas[k];
    e.result = solve(s_n, local, warm);
    e.objective = objective(e.result.estimate, s_n, local.lambda).total;
    e.nnz_offdiag = nnz_offdiag(e.result.estimate);
    e.min_eig = e.result.min_eig;
    e.seconds = seconds_since(t0);
    warm = &e.result.final_state;
  }
  path.total_seconds = seconds_since(t_path);
  return path;
}

std::vector<std::vector<Index>> fold_partition(Index n, int folds, std::uint64_t seed) {
  if (folds < 2) throw InvalidInput("need at least 2 folds");
  if (n < folds) throw InvalidInput("fewer rows than folds");
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<std::vector<Index>> parts(static_cast<std::size_t>(folds));
  const Index base = n / folds;
  const Index extra = n % folds;
  auto it = order.begin();
  for (int f = 0; f < folds; ++f) {
    const Index size = base + (f < extra ? 1 : 0);
    parts[static_cast<std::size_t>(f)].assign(it, it + size);
    std::sort(parts[static_cast<std::size_t>(f)].begin(), parts[static_cast<std::size_t>(f)].end());
    it += size;
  }
  return parts;
}

SymMatrix scaled_covariance(const DataMatrix& x, Scale scale) {
  SymMatrix s = sample_covariance(x);
  return scale == Scale::Correlation ? to_correlation(s) : s;
}

CvReport cv_select_lambda(const DataMatrix& x, const LambdaGrid& grid, int folds,
                          const SolverConfig& cfg, std::uint64_t seed, Estimator estimator,
                          Scale scale, Execution exec) {
  cfg.validate();
  if (folds < 2) throw InvalidInput("need at least 2 folds");
  if (x.rows() / folds < 2)
    throw InvalidInput("each fold needs at least 2 rows: n=" + std::to_string(x.rows()) +
                       ", folds=" + std::to_string(folds));
  const auto parts = fold_partition(x.rows(), folds, seed);
  const std::vector<double>& lambdas = grid.values();

  SolverConfig fit_cfg = cfg;
  fit_cfg.record_trace = false;

  std::vector<std::vector<double>> losses(parts.size());
  std::vector<std::exception_ptr> failures(parts.size());

  auto run_fold = [&](std::size_t f) {
    std::vector<Index> train;
    train.reserve(static_cast<std::size_t>(x.rows()));
    for (std::size_t g = 0; g < parts.size(); ++g)
      if (g != f) train.insert(train.end(), parts[g].begin(), parts[g].end());
    std::sort(train.begin(), train.end());
    const SymMatrix s_train = scaled_covariance(select_rows(x, train), scale);
    const SymMatrix s_valid = scaled_covariance(select_rows(x, parts[f]), scale);

    std::vector<double>& out = losses[f];
    out.resize(lambdas.size());
    if (estimator == Estimator::SoftThreshold) {
      for (std::size_t k = 0; k < lambdas.size(); ++k)
        out[k] = (soft_threshold_estimator(s_train, lambdas[k]).matrix() - s_valid.matrix()).squaredNorm();
    } else {
      const PathResult path = solution_path(s_train, grid, fit_cfg);
      for (std::size_t k = 0; k < lambdas.size(); ++k)
        out[k] = (path.entries[k].result.estimate.matrix() - s_valid.matrix()).squaredNorm();
    }
  };

  const auto nfolds = static_cast<long>(parts.size());
#pragma omp parallel for schedule(dynamic) if (exec == Execution::Parallel)
  for (long f = 0; f < nfolds; ++f) {
    try {
      run_fold(static_cast<std::size_t>(f));
    } catch (...) {
      failures[static_cast<std::size_t>(f)] = std::current_exception();
    }
  }
  for (const auto& failure : failures)
    if (failure) std::rethrow_exception(failure);

  CvReport report;
  report.fold_count = folds;
  report.lambdas = lambdas;
  report.seed = seed;
  report.estimator = estimator;
  report.cv_losses.assign(lambdas.size(), 0.0);
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    double sum = 0.0;
    for (const auto& fold_losses : losses) sum += fold_losses[k];
    report.cv_losses[k] = sum / static_cast<double>(losses.size());
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < lambdas.size(); ++k)
    if (report.cv_losses[k] <= report.cv_losses[best]) best = k;
  report.selected_lambda = lambdas[best];
  return report;
}

}  // namespace covadmm
