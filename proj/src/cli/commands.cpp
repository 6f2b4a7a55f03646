#include "covadmm/cli.hpp"

#include "covadmm/admm_solver.hpp"
#include "covadmm/csv_io.hpp"
#include "covadmm/errors.hpp"
#include "covadmm/model_selection.hpp"
#include "covadmm/parallel.hpp"
#include "covadmm/sim_lab.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

namespace covadmm::cli {

namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct SolverFlags {
  double eps = 1e-4;
  double mu = 2.0;
  double tol = 1e-7;
  int max_iter = 20000;

  SolverConfig config() const {
    SolverConfig c;
    c.eps = eps;
    c.mu = mu;
    c.tol_primal = tol;
    c.tol_dual = tol;
    c.max_iter = max_iter;
    return c;
  }
};

void add_solver_flags(CLI::App* cmd, SolverFlags& f) {
  cmd->add_option("--eps", f.eps, "Eigenvalue floor of the feasible cone")->capture_default_str();
  cmd->add_option("--mu", f.mu, "Augmented-Lagrangian parameter")->capture_default_str();
  cmd->add_option("--tol", f.tol, "Primal and dual residual tolerance (relative)")->capture_default_str();
  cmd->add_option("--max-iter", f.max_iter, "Iteration cap per solve")->capture_default_str();
}

json solver_json(const SolverConfig& c) {
  return json{{"eps", c.eps}, {"mu", c.mu}, {"tol_primal", c.tol_primal},
              {"tol_dual", c.tol_dual}, {"max_iter", c.max_iter}};
}

json metric_json(const MetricSummary& m) {
  return json{{"mean", m.mean}, {"se", m.se ? json(*m.se) : json(nullptr)}};
}

Scale parse_scale(const std::string& s) { return s == "cov" ? Scale::Covariance : Scale::Correlation; }

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw InvalidInput("write failed for " + path);
}

json base_report(const std::string& command, int argc, const char* const* argv) {
  json args = json::array();
  for (int i = 0; i < argc; ++i) args.push_back(argv[i]);
  return json{{"schema_version", kSchemaVersion}, {"command", command}, {"argv", args}};
}

DataMatrix load_data(const std::string& path, bool standardize_first) {
  DataMatrix x = read_csv_matrix(path);
  if (x.rows() < 2) throw InvalidInput(path + ": need at least 2 observations");
  return standardize_first ? standardize(x) : x;
}

// ------------------------------------------------------------------ estimate

struct EstimateArgs {
  std::string input;
  std::optional<double> lambda;
  bool cv = false;
  SolverFlags solver;
  bool standardize = false;
  std::string scale = "corr";
  std::uint64_t seed = 1;
  int folds = 5;
  std::string grid = "0.01:0.01:0.99";
  std::string output;
};

int cmd_estimate(const EstimateArgs& a, int argc, const char* const* argv, std::ostream& out) {
  if (a.lambda.has_value() == a.cv)
    throw InvalidInput("exactly one of --lambda or --cv is required");
  const auto t_total = Clock::now();
  json report = base_report("estimate", argc, argv);
  json timings;

  auto t0 = Clock::now();
  const DataMatrix x = load_data(a.input, a.standardize);
  const Scale scale = parse_scale(a.scale);
  const SymMatrix s_n = scaled_covariance(x, scale);
  timings["load"] = seconds_since(t0);

  SolverConfig cfg = a.solver.config();
  json result;
  if (a.cv) {
    t0 = Clock::now();
    const LambdaGrid grid = LambdaGrid::parse(a.grid);
    const CvReport cv = cv_select_lambda(x, grid, a.folds, cfg, a.seed, Estimator::Constrained, scale);
    cfg.lambda = cv.selected_lambda;
    timings["cv"] = seconds_since(t0);
    result["selected_lambda"] = cv.selected_lambda;
    result["cv_losses"] = cv.cv_losses;
  } else {
    cfg.lambda = *a.lambda;
  }
  cfg.validate();

  t0 = Clock::now();
  const EstimationResult fit = solve(s_n, cfg);
  timings["solve"] = seconds_since(t0);

  const std::string estimate_path = a.output + ".estimate.csv";
  const std::string report_path = a.output + ".report.json";
  write_csv_matrix(estimate_path, fit.estimate.matrix());

  result["lambda"] = cfg.lambda;
  result["min_eig"] = fit.min_eig;
  result["nnz_offdiag"] = nnz_offdiag(fit.estimate);
  result["iterations"] = fit.iterations;
  result["converged"] = fit.converged;
  result["shortcut_used"] = fit.shortcut_used;
  result["kkt_residual"] = fit.kkt_residual;
  result["objective"] = objective(fit.estimate, s_n, cfg.lambda).total;
  timings["total"] = seconds_since(t_total);

  json config = solver_json(cfg);
  config["input"] = a.input;
  config["n"] = x.rows();
  config["p"] = x.cols();
  config["standardize"] = a.standardize;
  config["scale"] = a.scale;
  config["cv"] = a.cv;
  if (a.cv) {
    config["folds"] = a.folds;
    config["grid"] = a.grid;
    config["seed"] = a.seed;
  }
  report["config"] = config;
  report["timings"] = timings;
  report["result"] = result;
  report["outputs"] = json{{"estimate", estimate_path}, {"report", report_path}};
  write_json(report_path, report);

  out << "lambda=" << cfg.lambda << " converged=" << (fit.converged ? "true" : "false")
      << " iterations=" << fit.iterations << " min_eig=" << fit.min_eig << '\n';
  return fit.converged ? kExitOk : kExitNotConverged;
}

// ---------------------------------------------------------------------- path

struct PathArgs {
  std::string input;
  std::string covariance;
  std::string grid = "0.01:0.01:0.99";
  SolverFlags solver;
  bool standardize = false;
  std::string scale = "corr";
  std::string output;
};

int cmd_path(const PathArgs& a, int argc, const char* const* argv, std::ostream& out) {
  if (a.input.empty() == a.covariance.empty())
    throw InvalidInput("exactly one of --input or --covariance is required");
  const auto t_total = Clock::now();
  const LambdaGrid grid = LambdaGrid::parse(a.grid);
  json timings;

  auto t0 = Clock::now();
  const Scale scale = parse_scale(a.scale);
  SymMatrix s_n;
  if (!a.input.empty()) {
    s_n = scaled_covariance(load_data(a.input, a.standardize), scale);
  } else {
    s_n = read_covariance_csv(a.covariance);
    if (scale == Scale::Correlation) s_n = to_correlation(s_n);
  }
  timings["load"] = seconds_since(t0);

  SolverConfig cfg = a.solver.config();
  cfg.record_trace = false;
  cfg.validate();
  const PathResult path = solution_path(s_n, grid, cfg);
  timings["path"] = path.total_seconds;

  const std::string path_csv = a.output + ".path.csv";
  const std::string report_path = a.output + ".report.json";
  {
    std::ofstream csv(path_csv);
    if (!csv) throw InvalidInput("cannot write " + path_csv);
    csv << "lambda,objective,nnz_offdiag,min_eig,iterations,shortcut,seconds\n";
    for (const PathEntry& e : path.entries) {
      csv << format_double(e.lambda) << ',' << format_double(e.objective) << ',' << e.nnz_offdiag << ','
          << format_double(e.min_eig) << ',' << e.result.iterations << ','
          << (e.result.shortcut_used ? 1 : 0) << ',' << format_double(e.seconds) << '\n';
    }
  }

  int nonconverged = 0;
  int shortcuts = 0;
  for (const PathEntry& e : path.entries) {
    if (!e.result.converged) ++nonconverged;
    if (e.result.shortcut_used) ++shortcuts;
  }
  timings["total"] = seconds_since(t_total);

  json report = base_report("path", argc, argv);
  json config = solver_json(cfg);
  config["source"] = a.input.empty() ? a.covariance : a.input;
  config["p"] = s_n.dim();
  config["grid"] = a.grid;
  config["scale"] = a.scale;
  config["standardize"] = a.standardize;
  report["config"] = config;
  report["timings"] = timings;
  report["result"] = json{{"points", path.entries.size()},
                          {"shortcuts", shortcuts},
                          {"nonconverged", nonconverged},
                          {"min_eig", path.entries.front().min_eig}};
  report["outputs"] = json{{"path", path_csv}, {"report", report_path}};
  write_json(report_path, report);

  out << "points=" << path.entries.size() << " seconds=" << path.total_seconds
      << " nonconverged=" << nonconverged << '\n';
  return nonconverged == 0 ? kExitOk : kExitNotConverged;
}

// ------------------------------------------------------------------ simulate

struct SimulateArgs {
  int model = 1;
  Index p = 100;
  Index n = 50;
  int replicates = 100;
  std::uint64_t seed = 1;
  int folds = 5;
  std::string grid = "0.01:0.01:0.99";
  std::string scale = "corr";
  SolverFlags solver;
  std::string output;
};

json estimator_json(const EstimatorSummary& s, int replicates) {
  return json{{"name", s.name},
              {"frobenius_loss", metric_json(s.frob_loss)},
              {"spectral_loss", metric_json(s.spec_loss)},
              {"false_positive_rate", metric_json(s.fpr)},
              {"true_positive_rate", metric_json(s.tpr)},
              {"negative_eigenvalues", metric_json(s.n_neg_eigs)},
              {"selected_lambda", metric_json(s.selected_lambda)},
              {"pd_count", s.pd_count},
              {"positive_definiteness", std::to_string(s.pd_count) + "/" + std::to_string(replicates)},
              {"nonconverged", s.nonconverged}};
}

json experiment_summary_json(const ExperimentSummary& s, const ExperimentConfig& cfg,
                             const std::string& grid_spec) {
  json seeds = json::array();
  for (auto v : s.seeds) seeds.push_back(v);
  json config = solver_json(cfg.solver);
  config["folds"] = cfg.folds;
  config["grid"] = grid_spec;
  config["scale"] = cfg.scale == Scale::Covariance ? "cov" : "corr";
  return json{{"schema_version", kSchemaVersion},
              {"model", s.model},
              {"p", s.p},
              {"n", s.n},
              {"replicates", s.replicates},
              {"master_seed", s.master_seed},
              {"config", config},
              {"estimators", json::array({estimator_json(s.soft, s.replicates),
                                          estimator_json(s.constrained, s.replicates)})},
              {"replicate_seeds", seeds}};
}

int cmd_simulate(const SimulateArgs& a, int argc, const char* const* argv, std::ostream& out) {
  const auto t_total = Clock::now();
  ExperimentConfig cfg;
  cfg.model = a.model;
  cfg.p = a.p;
  cfg.n = a.n;
  cfg.replicates = a.replicates;
  cfg.master_seed = a.seed;
  cfg.folds = a.folds;
  cfg.grid = LambdaGrid::parse(a.grid);
  cfg.scale = parse_scale(a.scale);
  cfg.solver = a.solver.config();
  cfg.exec = Execution::Parallel;
  ground_truth_for(cfg.model, cfg.p);  // validate before the long run

  const ExperimentSummary summary = run_experiment(cfg);
  const double elapsed = seconds_since(t_total);

  const std::string summary_path = a.output + ".summary.json";
  const std::string report_path = a.output + ".report.json";
  write_json(summary_path, experiment_summary_json(summary, cfg, a.grid));

  json report = base_report("simulate", argc, argv);
  report["config"] = experiment_summary_json(summary, cfg, a.grid)["config"];
  report["timings"] = json{{"total", elapsed}};
  report["result"] = json{{"constrained_pd_count", summary.constrained.pd_count},
                          {"soft_pd_count", summary.soft.pd_count},
                          {"nonconverged", summary.constrained.nonconverged}};
  report["outputs"] = json{{"summary", summary_path}, {"report", report_path}};
  write_json(report_path, report);

  out << "model=" << a.model << " p=" << a.p << " n=" << a.n << " replicates=" << a.replicates
      << " constrained frobenius=" << summary.constrained.frob_loss.mean
      << " pd=" << summary.constrained.pd_count << "/" << a.replicates
      << " soft pd=" << summary.soft.pd_count << "/" << a.replicates << '\n';
  return summary.constrained.nonconverged == 0 ? kExitOk : kExitNotConverged;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Positive-definite sparse covariance estimation"};
  app.require_subcommand(1);

  EstimateArgs est;
  auto* c_est = app.add_subcommand("estimate", "Fit the estimator to a data CSV");
  c_est->add_option("--input", est.input, "Data CSV (rows = observations)")->required();
  c_est->add_option("--lambda", est.lambda, "Penalty value");
  c_est->add_flag("--cv", est.cv, "Select lambda by cross-validation");
  add_solver_flags(c_est, est.solver);
  c_est->add_option("--standardize", est.standardize, "Standardize columns first")->capture_default_str();
  c_est->add_option("--scale", est.scale, "cov or corr")->check(CLI::IsMember({"cov", "corr"}))->capture_default_str();
  c_est->add_option("--seed", est.seed, "Fold-shuffle seed")->capture_default_str();
  c_est->add_option("--folds", est.folds, "CV folds")->capture_default_str();
  c_est->add_option("--grid", est.grid, "CV grid start:step:end")->capture_default_str();
  c_est->add_option("--output", est.output, "Output prefix")->required();

  PathArgs path;
  auto* c_path = app.add_subcommand("path", "Compute a warm-started solution path");
  c_path->add_option("--input", path.input, "Data CSV (rows = observations)");
  c_path->add_option("--covariance", path.covariance, "p x p covariance CSV");
  c_path->add_option("--grid", path.grid, "start:step:end")->capture_default_str();
  add_solver_flags(c_path, path.solver);
  c_path->add_option("--standardize", path.standardize, "Standardize columns first")->capture_default_str();
  c_path->add_option("--scale", path.scale, "cov or corr")->check(CLI::IsMember({"cov", "corr"}))->capture_default_str();
  c_path->add_option("--output", path.output, "Output prefix")->required();

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Replicated Model 1 / Model 2 experiment");
  c_sim->add_option("--model", sim.model, "1 or 2")->check(CLI::IsMember({1, 2}))->capture_default_str();
  c_sim->add_option("--p", sim.p, "Dimension")->capture_default_str();
  c_sim->add_option("--n", sim.n, "Sample size")->capture_default_str();
  c_sim->add_option("--replicates", sim.replicates, "Number of datasets")->capture_default_str();
  c_sim->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
  c_sim->add_option("--folds", sim.folds, "CV folds")->capture_default_str();
  c_sim->add_option("--grid", sim.grid, "CV grid start:step:end")->capture_default_str();
  c_sim->add_option("--scale", sim.scale, "cov or corr")->check(CLI::IsMember({"cov", "corr"}))->capture_default_str();
  add_solver_flags(c_sim, sim.solver);
  c_sim->add_option("--output", sim.output, "Output prefix")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    apply_thread_env();
    if (c_est->parsed()) return cmd_estimate(est, argc, argv, out);
    if (c_path->parsed()) return cmd_path(path, argc, argv, out);
    if (c_sim->parsed()) return cmd_simulate(sim, argc, argv, out);
    return kExitUsage;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace covadmm::cli
