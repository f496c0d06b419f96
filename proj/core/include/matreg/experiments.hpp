#pragma once

#include "matreg/admm.hpp"
#include "matreg/apg.hpp"
#include "matreg/datagen.hpp"
#include "matreg/metrics.hpp"
#include "matreg/ppdna.hpp"

#include <cstdint>
#include <map>
#include <string>

namespace matreg {

enum class Scenario { ShapeStudy, LowRankStudy, Efficiency, Consistency, CsvRun };
enum class Estimator { VML, NL, NFL, NSGL };
enum class SolverChoice { Ppdna, Admm, Apg };

const char* to_string(Scenario s);
const char* to_string(Estimator e);
const char* to_string(SolverChoice s);
Scenario scenario_from_string(const std::string& s);
Estimator estimator_from_string(const std::string& s);
SolverChoice solver_from_string(const std::string& s);
ShapeKind shape_from_string(const std::string& s);
GammaScheme scheme_from_string(const std::string& s);
const char* to_string(ShapeKind k);
const char* to_string(GammaScheme s);

struct GridSpec {
  int points = 8;            // grid points per tuning axis
  double alpha_min = 1e-3;
  double alpha_max = 1.0;
  bool log_scale = true;

  std::vector<double> values() const;
};

struct ExperimentConfig {
  Scenario scenario = Scenario::ShapeStudy;

  // dimensions
  Index n = 300;
  Index m = 64;
  Index q = 64;
  Index p = 1000;
  Index rank = 5;
  double nonsparsity_s = 0.1;
  double noise_sd = 1.0;

  ShapeKind shape = ShapeKind::Square;
  GammaScheme scheme = GammaScheme::S1;
  std::vector<Estimator> estimators = {Estimator::VML, Estimator::NL, Estimator::NFL,
                                       Estimator::NSGL};

  GridSpec grid;
  std::uint64_t seed = 1;
  int replications = 20;
  Index n_validation = 1000;
  Index n_test = 300;

  SolverChoice solver = SolverChoice::Ppdna;
  PpdnaConfig ppdna;
  AdmmConfig admm;
  ApgConfig apg;

  // efficiency scenario: fixed mid-grid tuning fractions
  double alpha_matrix = 0.0316227766016838;  // 10^(-1.5)
  double alpha_vector = 0.0316227766016838;
  double alpha_vector_prime = -1.0;  // < 0 ties lambda' to lambda
  double efficiency_robj_tol = 1e-10;
  long admm_iteration_cap = 500000;
  double time_limit_seconds = 3600.0;

  // consistency scenario
  std::vector<Index> n_ladder = {200, 800, 3200};
  double consistency_penalty_scale = 1.0;  // rho_n = lambda_n = scale * sqrt(n)

  // csvrun scenario
  std::string csv_y, csv_z, csv_x;
  bool standardize = false;
  bool standardize_response = false;

  std::string outdir = "results";
  int threads = 0;  // 0 = hardware concurrency
  bool paper_scale = false;

  void validate() const;
  /// Paper-scale protocol: 20x20 grid, 100 replications, 3000 validation rows.
  void apply_paper_scale();
};

struct PenaltyLevels {
  double rho = 0.0;
  double lambda = 0.0;
  double lambda_prime = 0.0;
};

/// Data-driven tuning values: for nuclear-norm estimators
/// rho = alpha_mat * ||mat(X^T y)||_2 and lambda = lambda' =
/// alpha_vec * ||Z^T y||_inf; the vectorized-L1 estimator uses
/// rho = alpha_mat * ||X^T y||_inf. A nonnegative alpha_vec_prime selects
/// lambda' independently.
PenaltyLevels tuning_values(const DesignData& data, Estimator estimator, double alpha_mat,
                            double alpha_vec, double alpha_vec_prime = -1.0);

/// Penalty spec for an estimator at given levels (groups for NSGL from the
/// scheme's contiguous partition with weights sqrt(|G_l|)).
PenaltySpec make_penalty(Estimator estimator, const PenaltyLevels& levels, Index p, Index groups);

struct GridCell {
  Estimator estimator;
  double alpha_mat = 0.0;
  double alpha_vec = 0.0;
  PenaltyLevels levels;
  double validation_rmse = std::numeric_limits<double>::quiet_NaN();
  SolveStatus status = SolveStatus::Failed;
  int iterations = 0;
  double seconds = 0.0;
};

struct SelectionResult {
  Estimator estimator;
  CoefficientPair best;
  PenaltyLevels best_levels;
  double best_alpha_mat = 0.0;
  double best_alpha_vec = 0.0;
  double best_rmse = std::numeric_limits<double>::infinity();
  std::vector<GridCell> table;
};

/// Grid search over tuning fractions: fit on train, score RMSE-y on
/// validation, return the argmin cell. Cells are solved with warm starts
/// along the grid; per-cell failures are recorded, not fatal.
SelectionResult run_model_selection(const ExperimentConfig& config, Estimator estimator,
                                    const DesignData& train, const DesignData& validation);

struct ReplicationRow {
  int replication = 0;
  Estimator estimator;
  EvalReport eval;
  SolveStatus status = SolveStatus::Failed;
};

struct ReplicationSummary {
  Estimator estimator;
  double mean_rmse = 0.0, sd_rmse = 0.0;
  double mean_error_b = 0.0, sd_error_b = 0.0;
  double mean_error_gamma = 0.0, sd_error_gamma = 0.0;
  double alpha_mat = 0.0, alpha_vec = 0.0;
  std::vector<ReplicationRow> rows;
};

struct StudyResult {
  std::vector<SelectionResult> selections;
  std::vector<ReplicationSummary> summaries;
  Matrix b_true;
  Vector gamma_true;
  std::map<std::string, CoefficientPair> example_estimates;  // per estimator, first replication
};

/// Shape / low-rank replication study: model selection per estimator, then
/// replications at the selected tuning values.
StudyResult run_replications(const ExperimentConfig& config);

struct EfficiencyRow {
  SolverChoice solver;
  long iterations = 0;
  double robj = std::numeric_limits<double>::quiet_NaN();
  double seconds = 0.0;
  int rank_hat = 0;
  double nonsparsity_gamma = 0.0;
  SolveStatus status = SolveStatus::Failed;
};

struct EfficiencyResult {
  double obj_star = std::numeric_limits<double>::quiet_NaN();
  PenaltyLevels levels;
  std::vector<EfficiencyRow> rows;
  std::map<std::string, std::vector<TraceRecord>> traces;  // per solver
};

/// Efficiency benchmark: obj* from a high-accuracy run, then every solver
/// races to the relative-objective target.
EfficiencyResult run_efficiency(const ExperimentConfig& config);

struct ConsistencyRow {
  Index n = 0;
  double mean_error_b = 0.0, sd_error_b = 0.0;
  double mean_error_gamma = 0.0, sd_error_gamma = 0.0;
  double rho_n = 0.0;
};

struct ConsistencyResult {
  std::vector<ConsistencyRow> rows;
  bool error_b_decreasing = false;
  bool error_gamma_decreasing = false;
};

/// Monte Carlo consistency ladder: penalties rho_n = lambda_n = c*sqrt(n).
ConsistencyResult run_consistency(const ExperimentConfig& config);

struct CsvRunResult {
  CoefficientPair estimate;
  SolverReport report;
  PenaltyLevels levels;
  Index n = 0, m = 0, q = 0, p = 0;
};

CsvRunResult run_csv(const ExperimentConfig& config);

/// Write CSV tables, plot files, heatmaps, and the reproducibility manifest.
void emit_reports(const ExperimentConfig& config, const StudyResult& study);
void emit_reports(const ExperimentConfig& config, const EfficiencyResult& efficiency);
void emit_reports(const ExperimentConfig& config, const ConsistencyResult& consistency);
void emit_reports(const ExperimentConfig& config, const CsvRunResult& run);

/// Dispatch a scenario and emit its reports. Returns a process exit code
/// (0 success, 2 config error, 3 solver failure).
int run_scenario(const ExperimentConfig& config);

/// Stable 64-bit hash of the canonical config serialization.
std::uint64_t config_hash(const ExperimentConfig& config);
std::string config_to_manifest_json(const ExperimentConfig& config);

/// Per-task deterministic seed derivation.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t task);

}  // namespace matreg
