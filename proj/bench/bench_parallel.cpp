// Serial reference schedule vs OpenMP schedule for the two parallel kernels
// (CV folds, experiment replicates). Results are bit-identical; only time differs.
// Set COVADMM_THREADS to pin the thread count.

#include "covadmm/model_selection.hpp"
#include "covadmm/parallel.hpp"
#include "covadmm/sample_stats.hpp"
#include "covadmm/sim_lab.hpp"

#include <benchmark/benchmark.h>

using namespace covadmm;

namespace {

Execution exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
}

void BM_CrossValidation(benchmark::State& state) {
  const Index p = state.range(1);
  const DataMatrix x = standardize(mvn_sample(50, model1_cov(p), 3));
  const LambdaGrid grid = LambdaGrid::parse("0.05:0.05:0.95");
  SolverConfig cfg;
  cfg.record_trace = false;
  for (auto _ : state) {
    const CvReport r = cv_select_lambda(x, grid, 5, cfg, 1, Estimator::Constrained,
                                        Scale::Correlation, exec_of(state));
    benchmark::DoNotOptimize(r.selected_lambda);
  }
  state.SetLabel(exec_of(state) == Execution::Serial ? "serial" : "parallel");
}

void BM_Experiment(benchmark::State& state) {
  ExperimentConfig cfg;
  cfg.model = 2;
  cfg.p = state.range(1);
  cfg.n = 50;
  cfg.replicates = 4;
  cfg.grid = LambdaGrid::parse("0.05:0.05:0.95");
  cfg.exec = exec_of(state);
  for (auto _ : state) {
    const ExperimentSummary s = run_experiment(cfg);
    benchmark::DoNotOptimize(s.constrained.frob_loss.mean);
  }
  state.SetLabel(cfg.exec == Execution::Serial ? "serial" : "parallel");
}

}  // namespace

BENCHMARK(BM_CrossValidation)->ArgsProduct({{0, 1}, {40, 100}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Experiment)->ArgsProduct({{0, 1}, {40}})->Unit(benchmark::kMillisecond)->Iterations(1);

int main(int argc, char** argv) {
  apply_thread_env();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
