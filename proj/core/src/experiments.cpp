#include "matreg/experiments.hpp"

#include "matreg/model.hpp"
#include "matreg/threadpool.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

namespace matreg {

const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::ShapeStudy: return "shapes";
    case Scenario::LowRankStudy: return "lowrank";
    case Scenario::Efficiency: return "efficiency";
    case Scenario::Consistency: return "consistency";
    case Scenario::CsvRun: return "csvrun";
  }
  return "unknown";
}

const char* to_string(Estimator e) {
  switch (e) {
    case Estimator::VML: return "VML";
    case Estimator::NL: return "NL";
    case Estimator::NFL: return "NFL";
    case Estimator::NSGL: return "NSGL";
  }
  return "unknown";
}

const char* to_string(SolverChoice s) {
  switch (s) {
    case SolverChoice::Ppdna: return "ppdna";
    case SolverChoice::Admm: return "admm";
    case SolverChoice::Apg: return "apg";
  }
  return "unknown";
}

const char* to_string(ShapeKind k) {
  switch (k) {
    case ShapeKind::Square: return "square";
    case ShapeKind::Triangle: return "triangle";
    case ShapeKind::Circle: return "circle";
    case ShapeKind::Heart: return "heart";
  }
  return "unknown";
}

const char* to_string(GammaScheme s) {
  switch (s) {
    case GammaScheme::S1: return "S1";
    case GammaScheme::S2: return "S2";
    case GammaScheme::S3: return "S3";
  }
  return "unknown";
}

Scenario scenario_from_string(const std::string& s) {
  if (s == "shapes") return Scenario::ShapeStudy;
  if (s == "lowrank") return Scenario::LowRankStudy;
  if (s == "efficiency") return Scenario::Efficiency;
  if (s == "consistency") return Scenario::Consistency;
  if (s == "csvrun") return Scenario::CsvRun;
  throw std::invalid_argument("unknown scenario '" + s + "'");
}

Estimator estimator_from_string(const std::string& s) {
  if (s == "VML" || s == "vml") return Estimator::VML;
  if (s == "NL" || s == "nl") return Estimator::NL;
  if (s == "NFL" || s == "nfl") return Estimator::NFL;
  if (s == "NSGL" || s == "nsgl") return Estimator::NSGL;
  throw std::invalid_argument("unknown estimator '" + s + "'");
}

SolverChoice solver_from_string(const std::string& s) {
  if (s == "ppdna") return SolverChoice::Ppdna;
  if (s == "admm") return SolverChoice::Admm;
  if (s == "apg") return SolverChoice::Apg;
  throw std::invalid_argument("unknown solver '" + s + "'");
}

ShapeKind shape_from_string(const std::string& s) {
  if (s == "square") return ShapeKind::Square;
  if (s == "triangle") return ShapeKind::Triangle;
  if (s == "circle") return ShapeKind::Circle;
  if (s == "heart") return ShapeKind::Heart;
  throw std::invalid_argument("unknown shape '" + s + "'");
}

GammaScheme scheme_from_string(const std::string& s) {
  if (s == "S1" || s == "s1") return GammaScheme::S1;
  if (s == "S2" || s == "s2") return GammaScheme::S2;
  if (s == "S3" || s == "s3") return GammaScheme::S3;
  throw std::invalid_argument("unknown scheme '" + s + "'");
}

void ExperimentConfig::validate() const {
  if (n < 1 || m < 1 || q < 1 || p < 1)
    throw std::invalid_argument("ExperimentConfig: dimensions must be positive");
  if (grid.points < 1) throw std::invalid_argument("ExperimentConfig: grid points >= 1 required");
  if (replications < 1) throw std::invalid_argument("ExperimentConfig: replications >= 1 required");
  if (estimators.empty()) throw std::invalid_argument("ExperimentConfig: estimator set is empty");
  if (scenario == Scenario::Consistency) {
    if (n_ladder.empty()) throw std::invalid_argument("ExperimentConfig: empty n ladder");
    for (size_t i = 1; i < n_ladder.size(); ++i)
      if (n_ladder[i] <= n_ladder[i - 1])
        throw std::invalid_argument("ExperimentConfig: n ladder must be strictly increasing");
  }
  if (scenario == Scenario::CsvRun && (csv_y.empty() || csv_z.empty() || csv_x.empty()))
    throw std::invalid_argument("ExperimentConfig: csvrun requires --y, --z, and --x paths");
}

void ExperimentConfig::apply_paper_scale() {
  grid.points = 20;
  replications = 100;
  n_validation = 3000;
  paper_scale = true;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t task) {
  // splitmix64 over the combined word
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (task + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

struct FitOutcome {
  CoefficientPair coeff;
  SolverReport report;
};

FitOutcome fit_problem(const ProblemSpec& problem, const ExperimentConfig& config,
                       const std::optional<CoefficientPair>& warm) {
  switch (config.solver) {
    case SolverChoice::Ppdna: {
      PpdnaResult r = solve_ppdna(problem, config.ppdna, warm);
      return {std::move(r.coeff), std::move(r.report)};
    }
    case SolverChoice::Admm: {
      AdmmResult r = solve_admm(problem, config.admm);
      return {std::move(r.coeff), std::move(r.report)};
    }
    case SolverChoice::Apg: {
      ApgResult r = solve_apg(problem, config.apg);
      return {std::move(r.coeff), std::move(r.report)};
    }
  }
  throw std::invalid_argument("fit_problem: unknown solver");
}

struct Truth {
  Matrix b;
  Vector gamma;
};

Truth make_truth(const ExperimentConfig& config) {
  std::mt19937_64 rng(derive_seed(config.seed, 0));
  Truth truth;
  if (config.scenario == Scenario::LowRankStudy)
    truth.b = gen_lowrank_matrix(config.m, config.q, config.rank, config.nonsparsity_s, rng);
  else
    truth.b = gen_shape_matrix(config.shape, config.m, config.q);
  truth.gamma = gen_gamma(config.scheme, config.p, rng);
  return truth;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

SelectionResult run_model_selection(const ExperimentConfig& config, Estimator estimator,
                                    const DesignData& train, const DesignData& validation) {
  const std::vector<double> alphas = config.grid.values();
  const Index groups = gamma_scheme_groups(config.scheme);

  SelectionResult result;
  result.estimator = estimator;
  std::optional<CoefficientPair> warm;

  // Walk from the strongest penalties down so warm starts track the
  // regularization path.
  for (auto ia = alphas.rbegin(); ia != alphas.rend(); ++ia) {
    warm.reset();  // fresh chain per alpha_mat row
    for (auto iv = alphas.rbegin(); iv != alphas.rend(); ++iv) {
      GridCell cell;
      cell.estimator = estimator;
      cell.alpha_mat = *ia;
      cell.alpha_vec = *iv;
      cell.levels = tuning_values(train, estimator, *ia, *iv);
      try {
        ProblemSpec problem{train, make_penalty(estimator, cell.levels, config.p, groups)};
        FitOutcome outcome = fit_problem(problem, config, warm);
        cell.status = outcome.report.status;
        cell.iterations = outcome.report.iterations;
        cell.seconds = outcome.report.seconds;
        cell.validation_rmse = rmse_y(validation, outcome.coeff);
        warm = outcome.coeff;
        if (cell.validation_rmse < result.best_rmse) {
          result.best_rmse = cell.validation_rmse;
          result.best = outcome.coeff;
          result.best_levels = cell.levels;
          result.best_alpha_mat = *ia;
          result.best_alpha_vec = *iv;
        }
      } catch (const std::exception& e) {
        cell.status = SolveStatus::Failed;  // recorded, not fatal
        warm.reset();
      }
      result.table.push_back(cell);
    }
  }
  if (!std::isfinite(result.best_rmse))
    throw std::runtime_error("run_model_selection: every grid cell failed");
  return result;
}

StudyResult run_replications(const ExperimentConfig& config) {
  config.validate();
  const Truth truth = make_truth(config);
  const Index groups = gamma_scheme_groups(config.scheme);

  std::mt19937_64 rng_train(derive_seed(config.seed, 1));
  std::mt19937_64 rng_val(derive_seed(config.seed, 2));
  const DesignData train = gen_samples(truth.b, truth.gamma, config.n, config.noise_sd, rng_train);
  const DesignData validation =
      gen_samples(truth.b, truth.gamma, config.n_validation, config.noise_sd, rng_val);

  StudyResult study;
  study.b_true = truth.b;
  study.gamma_true = truth.gamma;

  // Stage 1: tuning selection, parallel across estimators.
  study.selections.resize(config.estimators.size());
  parallel_for(config.threads, static_cast<long>(config.estimators.size()), [&](long i) {
    study.selections[static_cast<size_t>(i)] = run_model_selection(
        config, config.estimators[static_cast<size_t>(i)], train, validation);
  });

  // Stage 2: replications at the selected tuning fractions. Each replication
  // draws fresh train/test data; the same draw is shared by all estimators.
  const int reps = config.replications;
  const long tasks = static_cast<long>(config.estimators.size()) * reps;
  std::vector<ReplicationRow> rows(static_cast<size_t>(tasks));
  std::vector<CoefficientPair> first_estimates(config.estimators.size());

  parallel_for(config.threads, tasks, [&](long t) {
    const size_t ei = static_cast<size_t>(t) / static_cast<size_t>(reps);
    const int rep = static_cast<int>(t % reps);
    const Estimator est = config.estimators[ei];
    const SelectionResult& sel = study.selections[ei];

    std::mt19937_64 rng_data(derive_seed(config.seed, 1000 + static_cast<std::uint64_t>(rep)));
    const DesignData rep_train =
        gen_samples(truth.b, truth.gamma, config.n, config.noise_sd, rng_data);
    const DesignData rep_test =
        gen_samples(truth.b, truth.gamma, config.n_test, config.noise_sd, rng_data);

    ReplicationRow row;
    row.replication = rep;
    row.estimator = est;
    const PenaltyLevels levels =
        tuning_values(rep_train, est, sel.best_alpha_mat, sel.best_alpha_vec);
    ProblemSpec problem{rep_train, make_penalty(est, levels, config.p, groups)};
    FitOutcome outcome = fit_problem(problem, config, std::nullopt);
    row.status = outcome.report.status;
    row.eval = evaluate(rep_test, truth.b, truth.gamma, outcome.coeff);
    rows[static_cast<size_t>(t)] = std::move(row);
    if (rep == 0) first_estimates[ei] = std::move(outcome.coeff);
  });

  for (size_t ei = 0; ei < config.estimators.size(); ++ei) {
    ReplicationSummary summary;
    summary.estimator = config.estimators[ei];
    summary.alpha_mat = study.selections[ei].best_alpha_mat;
    summary.alpha_vec = study.selections[ei].best_alpha_vec;
    std::vector<double> rmse, eb, eg;
    for (int rep = 0; rep < reps; ++rep) {
      const ReplicationRow& row = rows[ei * static_cast<size_t>(reps) + static_cast<size_t>(rep)];
      summary.rows.push_back(row);
      rmse.push_back(row.eval.rmse_y);
      eb.push_back(row.eval.error_b);
      eg.push_back(row.eval.error_gamma);
    }
    summary.mean_rmse = mean_of(rmse);
    summary.sd_rmse = sd_of(rmse);
    summary.mean_error_b = mean_of(eb);
    summary.sd_error_b = sd_of(eb);
    summary.mean_error_gamma = mean_of(eg);
    summary.sd_error_gamma = sd_of(eg);
    study.summaries.push_back(std::move(summary));
    study.example_estimates.emplace(to_string(config.estimators[ei]),
                                    std::move(first_estimates[ei]));
  }
  return study;
}

EfficiencyResult run_efficiency(const ExperimentConfig& config) {
  config.validate();
  std::mt19937_64 rng(derive_seed(config.seed, 0));
  const Matrix b_true = gen_lowrank_matrix(config.m, config.q, config.rank,
                                           config.nonsparsity_s, rng);
  // True gamma with non-sparsity 0.01, nonzero entries equal to one.
  Vector gamma_true = Vector::Zero(config.p);
  const Index nnz = std::max<Index>(1, static_cast<Index>(std::llround(0.01 * config.p)));
  std::vector<Index> order(static_cast<size_t>(config.p));
  for (Index i = 0; i < config.p; ++i) order[static_cast<size_t>(i)] = i;
  std::shuffle(order.begin(), order.end(), rng);
  for (Index i = 0; i < nnz; ++i) gamma_true[order[static_cast<size_t>(i)]] = 1.0;

  std::mt19937_64 rng_data(derive_seed(config.seed, 1));
  const DesignData data = gen_samples(b_true, gamma_true, config.n, config.noise_sd, rng_data);

  EfficiencyResult result;
  result.levels = tuning_values(data, Estimator::NL, config.alpha_matrix, config.alpha_vector,
                                config.alpha_vector_prime);
  const ProblemSpec problem{data, make_penalty(Estimator::NL, result.levels, config.p, 10)};

  // High-accuracy benchmark run.
  PpdnaConfig bench = config.ppdna;
  bench.kkt_tol = 1e-10;
  bench.max_outer = 50;
  bench.obj_star = std::numeric_limits<double>::quiet_NaN();
  bench.robj_tol = -1.0;
  const PpdnaResult benchmark = solve_ppdna(problem, bench);
  result.obj_star = benchmark.report.objective;

  const auto push_row = [&](SolverChoice solver, const CoefficientPair& coeff,
                            const SolverReport& report) {
    EfficiencyRow row;
    row.solver = solver;
    row.iterations = report.iterations;
    row.robj = rel_obj(report.objective, result.obj_star);
    row.seconds = report.seconds;
    row.rank_hat = rank_estimate(coeff.b_mat);
    row.nonsparsity_gamma = nonsparsity(coeff.gamma_vec);
    row.status = report.status;
    result.rows.push_back(row);
    result.traces[to_string(solver)] = report.trace;
  };

  // Solvers race sequentially so the wall-clock comparison is fair.
  {
    PpdnaConfig cfg = config.ppdna;
    cfg.obj_star = result.obj_star;
    cfg.robj_tol = config.efficiency_robj_tol;
    cfg.kkt_tol = 1e-12;  // the relative-objective target is the operative stop
    cfg.max_outer = 50;
    cfg.time_limit_seconds = config.time_limit_seconds;
    const PpdnaResult r = solve_ppdna(problem, cfg);
    push_row(SolverChoice::Ppdna, r.coeff, r.report);
  }
  {
    AdmmConfig cfg = config.admm;
    cfg.obj_star = result.obj_star;
    cfg.robj_tol = config.efficiency_robj_tol;
    cfg.kkt_tol = 1e-13;
    cfg.max_iter = config.admm_iteration_cap;
    cfg.time_limit_seconds = config.time_limit_seconds;
    const AdmmResult r = solve_admm(problem, cfg);
    push_row(SolverChoice::Admm, r.coeff, r.report);
  }
  {
    ApgConfig cfg = config.apg;
    cfg.obj_star = result.obj_star;
    cfg.robj_tol = config.efficiency_robj_tol;
    cfg.kkt_tol = 1e-13;
    cfg.max_iter = config.admm_iteration_cap;
    cfg.kkt_stride = 50;
    cfg.trace_stride = 10;
    cfg.time_limit_seconds = config.time_limit_seconds;
    const ApgResult r = solve_apg(problem, cfg);
    push_row(SolverChoice::Apg, r.coeff, r.report);
  }
  return result;
}

ConsistencyResult run_consistency(const ExperimentConfig& config) {
  config.validate();
  std::mt19937_64 rng(derive_seed(config.seed, 0));
  const Index r = std::min<Index>(2, std::min(config.m, config.q));
  const Matrix b_true = gen_lowrank_matrix(config.m, config.q, r, 0.3, rng);
  Vector gamma_true = Vector::Zero(config.p);
  for (Index i = 0; i < (config.p + 9) / 10; ++i) gamma_true[i] = 5.0;

  ConsistencyResult result;
  for (size_t li = 0; li < config.n_ladder.size(); ++li) {
    const Index n = config.n_ladder[li];
    const double level = config.consistency_penalty_scale * std::sqrt(static_cast<double>(n));
    PenaltyLevels levels{level, level, level};
    const int reps = config.replications;
    std::vector<double> eb(static_cast<size_t>(reps)), eg(static_cast<size_t>(reps));
    parallel_for(config.threads, reps, [&](long rep) {
      std::mt19937_64 rng_data(
          derive_seed(config.seed, 10000 + 100 * li + static_cast<std::uint64_t>(rep)));
      const DesignData data = gen_samples(b_true, gamma_true, n, config.noise_sd, rng_data);
      ProblemSpec problem{data, make_penalty(Estimator::NL, levels, config.p, 10)};
      const FitOutcome outcome = fit_problem(problem, config, std::nullopt);
      eb[static_cast<size_t>(rep)] = error_b(b_true, outcome.coeff.b_mat);
      eg[static_cast<size_t>(rep)] = error_gamma(gamma_true, outcome.coeff.gamma_vec);
    });
    ConsistencyRow row;
    row.n = n;
    row.rho_n = level;
    row.mean_error_b = mean_of(eb);
    row.sd_error_b = sd_of(eb);
    row.mean_error_gamma = mean_of(eg);
    row.sd_error_gamma = sd_of(eg);
    result.rows.push_back(row);
  }
  result.error_b_decreasing = true;
  result.error_gamma_decreasing = true;
  for (size_t i = 1; i < result.rows.size(); ++i) {
    if (result.rows[i].mean_error_b >= result.rows[i - 1].mean_error_b)
      result.error_b_decreasing = false;
    if (result.rows[i].mean_error_gamma >= result.rows[i - 1].mean_error_gamma)
      result.error_gamma_decreasing = false;
  }
  return result;
}

CsvRunResult run_csv(const ExperimentConfig& config) {
  config.validate();
  DesignData data = load_csv_dataset(config.csv_y, config.csv_z, config.csv_x, config.m, config.q);
  if (config.standardize)
    data = standardize_columns(data, config.standardize_response).data;

  const Estimator est = config.estimators.front();
  CsvRunResult result;
  result.n = data.n_samples();
  result.m = data.mat_rows;
  result.q = data.mat_cols;
  result.p = data.n_vector();
  result.levels = tuning_values(data, est, config.alpha_matrix, config.alpha_vector,
                                config.alpha_vector_prime);
  ProblemSpec problem{std::move(data), make_penalty(est, result.levels, result.p,
                                                    gamma_scheme_groups(config.scheme))};
  FitOutcome outcome = fit_problem(problem, config, std::nullopt);
  result.estimate = std::move(outcome.coeff);
  result.report = std::move(outcome.report);
  return result;
}

int run_scenario(const ExperimentConfig& config) {
  try {
    config.validate();
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  try {
    switch (config.scenario) {
      case Scenario::ShapeStudy:
      case Scenario::LowRankStudy: {
        const StudyResult study = run_replications(config);
        emit_reports(config, study);
        for (const auto& s : study.summaries)
          std::cout << to_string(s.estimator) << ": RMSE-y " << s.mean_rmse << " (" << s.sd_rmse
                    << "), Error-B " << s.mean_error_b << " (" << s.sd_error_b << "), Error-gamma "
                    << s.mean_error_gamma << " (" << s.sd_error_gamma << ")\n";
        break;
      }
      case Scenario::Efficiency: {
        const EfficiencyResult eff = run_efficiency(config);
        emit_reports(config, eff);
        std::cout << "obj* = " << eff.obj_star << "\n";
        for (const auto& row : eff.rows)
          std::cout << to_string(row.solver) << ": iterations " << row.iterations << ", R_obj "
                    << row.robj << ", time " << row.seconds << " s, rank " << row.rank_hat
                    << ", ns " << row.nonsparsity_gamma << "\n";
        break;
      }
      case Scenario::Consistency: {
        const ConsistencyResult cons = run_consistency(config);
        emit_reports(config, cons);
        for (const auto& row : cons.rows)
          std::cout << "n = " << row.n << ": Error-B " << row.mean_error_b << " ("
                    << row.sd_error_b << "), Error-gamma " << row.mean_error_gamma << " ("
                    << row.sd_error_gamma << ")\n";
        std::cout << "Error-B strictly decreasing: " << (cons.error_b_decreasing ? "yes" : "no")
                  << "\nError-gamma strictly decreasing: "
                  << (cons.error_gamma_decreasing ? "yes" : "no") << "\n";
        break;
      }
      case Scenario::CsvRun: {
        const CsvRunResult run = run_csv(config);
        emit_reports(config, run);
        std::cout << "status " << to_string(run.report.status) << ", objective "
                  << run.report.objective << ", eta_KKT " << run.report.eta_kkt << ", rank "
                  << rank_estimate(run.estimate.b_mat) << ", ns "
                  << nonsparsity(run.estimate.gamma_vec) << "\n";
        break;
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace matreg
