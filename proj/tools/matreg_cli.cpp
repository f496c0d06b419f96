#include "matreg/experiments.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

namespace {

using matreg::ExperimentConfig;

std::vector<matreg::Estimator> parse_estimators(const std::string& csv) {
  std::vector<matreg::Estimator> out;
  std::stringstream ss(csv);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (!token.empty()) out.push_back(matreg::estimator_from_string(token));
  }
  if (out.empty()) throw CLI::ValidationError("estimators", "empty estimator list");
  return out;
}

struct CliState {
  ExperimentConfig config;
  std::string estimators = "VML,NL,NFL,NSGL";
  std::string shape = "square";
  std::string scheme = "S1";
  std::string solver = "ppdna";
  std::string ladder = "200,800,3200";
};

void add_common_options(CLI::App* cmd, CliState& state) {
  cmd->set_config("--config", "", "Declarative key=value config file; flags override");
  cmd->add_option("--seed", state.config.seed, "Base RNG seed");
  cmd->add_option("--outdir", state.config.outdir, "Output directory");
  cmd->add_flag("--paper-scale", state.config.paper_scale,
                "Restore the full-scale protocol (20x20 grid, 100 replications, 3000 validation rows)");
  cmd->add_option("--threads", state.config.threads, "Worker threads (0 = hardware)");
  cmd->add_option("-n,--samples", state.config.n, "Training sample size");
  cmd->add_option("-m,--mat-rows", state.config.m, "Matrix coefficient rows");
  cmd->add_option("-q,--mat-cols", state.config.q, "Matrix coefficient columns");
  cmd->add_option("-p,--vec-dim", state.config.p, "Vector coefficient dimension");
  cmd->add_option("--noise-sd", state.config.noise_sd, "Response noise standard deviation");
  cmd->add_option("--solver", state.solver, "Solver: ppdna | admm | apg");
  cmd->add_option("--kkt-tol", state.config.ppdna.kkt_tol, "PPDNA KKT tolerance");
  cmd->add_option("--max-outer", state.config.ppdna.max_outer, "PPDNA outer iteration cap");
  cmd->add_option("--nu", state.config.ppdna.nu, "PPDNA scaling parameter");
  cmd->add_option("--sigma0", state.config.ppdna.sigma0, "PPDNA initial sigma");
  cmd->add_option("--admm-sigma", state.config.admm.sigma, "ADMM augmented Lagrangian parameter");
  cmd->add_option("--admm-tau", state.config.admm.step_tau, "ADMM over-relaxation step");
  cmd->add_option("--admm-kkt-tol", state.config.admm.kkt_tol, "ADMM KKT tolerance");
  cmd->add_option("--admm-max-iter", state.config.admm.max_iter, "ADMM iteration cap");
}

void add_study_options(CLI::App* cmd, CliState& state) {
  cmd->add_option("--estimators", state.estimators, "Comma list from VML,NL,NFL,NSGL");
  cmd->add_option("--scheme", state.scheme, "Vector coefficient scheme: S1 | S2 | S3");
  cmd->add_option("--reps", state.config.replications, "Replication count");
  cmd->add_option("--grid-points", state.config.grid.points, "Grid points per tuning axis");
  cmd->add_option("--grid-min", state.config.grid.alpha_min, "Smallest tuning fraction");
  cmd->add_option("--grid-max", state.config.grid.alpha_max, "Largest tuning fraction");
  cmd->add_flag("!--no-log-grid", state.config.grid.log_scale, "Linear rather than log grid");
  cmd->add_option("--n-validation", state.config.n_validation, "Validation sample size");
  cmd->add_option("--n-test", state.config.n_test, "Test sample size");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularized regression with joint matrix and vector predictors"};
  app.require_subcommand(1);

  CliState shapes_state, lowrank_state, eff_state, cons_state, csv_state;

  CLI::App* shapes = app.add_subcommand("shapes", "Two-dimensional shape estimation study");
  shapes_state.config.scenario = matreg::Scenario::ShapeStudy;
  add_common_options(shapes, shapes_state);
  add_study_options(shapes, shapes_state);
  shapes->add_option("--shape", shapes_state.shape, "square | triangle | circle | heart");

  CLI::App* lowrank = app.add_subcommand("lowrank", "Low-rank synthetic estimation study");
  lowrank_state.config.scenario = matreg::Scenario::LowRankStudy;
  lowrank_state.config.m = 50;
  lowrank_state.config.q = 50;
  add_common_options(lowrank, lowrank_state);
  add_study_options(lowrank, lowrank_state);
  lowrank->add_option("-r,--rank", lowrank_state.config.rank, "True rank of B");
  lowrank->add_option("-s,--nonsparsity", lowrank_state.config.nonsparsity_s,
                      "Expected non-sparsity level of B");

  CLI::App* eff = app.add_subcommand("efficiency", "Solver wall-clock comparison");
  eff_state.config.scenario = matreg::Scenario::Efficiency;
  eff_state.config.n = 500;
  eff_state.config.m = 100;
  eff_state.config.q = 80;
  eff_state.config.p = 100;
  eff_state.config.rank = 5;
  add_common_options(eff, eff_state);
  eff->add_option("-r,--rank", eff_state.config.rank, "True rank of B");
  eff->add_option("-s,--nonsparsity", eff_state.config.nonsparsity_s, "Non-sparsity level of B");
  eff->add_option("--alpha1", eff_state.config.alpha_matrix, "Matrix tuning fraction");
  eff->add_option("--alpha2", eff_state.config.alpha_vector, "Vector tuning fraction");
  eff->add_option("--robj-tol", eff_state.config.efficiency_robj_tol,
                  "Relative-objective stopping target");
  eff->add_option("--iteration-cap", eff_state.config.admm_iteration_cap,
                  "First-order solver iteration cap");
  eff->add_option("--time-limit", eff_state.config.time_limit_seconds,
                  "Per-solver time limit in seconds");

  CLI::App* cons = app.add_subcommand("consistency", "Monte Carlo error decay over growing n");
  cons_state.config.scenario = matreg::Scenario::Consistency;
  cons_state.config.m = 10;
  cons_state.config.q = 10;
  cons_state.config.p = 20;
  cons_state.config.replications = 20;
  add_common_options(cons, cons_state);
  cons->add_option("--reps", cons_state.config.replications, "Replications per ladder rung");
  cons->add_option("--ladder", cons_state.ladder, "Comma list of sample sizes");
  cons->add_option("--penalty-scale", cons_state.config.consistency_penalty_scale,
                   "c in rho_n = lambda_n = c*sqrt(n)");

  CLI::App* csvrun = app.add_subcommand("csvrun", "Fit a model to CSV data");
  csv_state.config.scenario = matreg::Scenario::CsvRun;
  add_common_options(csvrun, csv_state);
  csvrun->add_option("--y", csv_state.config.csv_y, "Response CSV (single column)")->required();
  csvrun->add_option("--z", csv_state.config.csv_z, "Vector-part design CSV (n x p)")->required();
  csvrun->add_option("--x", csv_state.config.csv_x,
                     "Matrix-part design CSV (n x m*q, row = column-major vec)")
      ->required();
  csvrun->add_option("--estimators", csv_state.estimators, "Estimator (first entry used)");
  csvrun->add_option("--alpha1", csv_state.config.alpha_matrix, "Matrix tuning fraction");
  csvrun->add_option("--alpha2", csv_state.config.alpha_vector, "Vector tuning fraction");
  csvrun->add_option("--alpha2-prime", csv_state.config.alpha_vector_prime,
                     "Independent lambda' fraction (< 0 ties to --alpha2)");
  csvrun->add_flag("--standardize", csv_state.config.standardize,
                   "Column-standardize designs before fitting");
  csvrun->add_flag("--standardize-response", csv_state.config.standardize_response,
                   "Also standardize the response");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  CliState* state = nullptr;
  if (shapes->parsed()) state = &shapes_state;
  else if (lowrank->parsed()) state = &lowrank_state;
  else if (eff->parsed()) state = &eff_state;
  else if (cons->parsed()) state = &cons_state;
  else state = &csv_state;

  try {
    state->config.estimators = parse_estimators(state->estimators);
    state->config.shape = matreg::shape_from_string(state->shape);
    state->config.scheme = matreg::scheme_from_string(state->scheme);
    state->config.solver = matreg::solver_from_string(state->solver);
    if (cons->parsed()) {
      state->config.n_ladder.clear();
      std::stringstream ss(state->ladder);
      std::string token;
      while (std::getline(ss, token, ','))
        if (!token.empty()) state->config.n_ladder.push_back(std::stol(token));
    }
    if (state->config.paper_scale) state->config.apply_paper_scale();
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  return matreg::run_scenario(state->config);
}
