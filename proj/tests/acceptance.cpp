// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion states its tolerance inline.

#include "helpers.hpp"

#include "matreg/admm.hpp"
#include "matreg/apg.hpp"
#include "matreg/experiments.hpp"
#include "matreg/model.hpp"
#include "matreg/ppdna.hpp"
#include "matreg/ssn.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace matreg;
using testutil::Rng;

namespace {

struct Criterion {
  int number;
  std::string name;
  std::function<bool(std::string&)> run;
};

bool expect(bool condition, const std::string& what, std::string& detail) {
  if (!condition && detail.empty()) detail = what;
  return condition;
}

// ---------------------------------------------------------------- criterion 1
bool prox_oracle_suite(std::string& detail) {
  Rng rng(1001);
  bool ok = true;
  const double tol = 1e-6;

  for (int i = 0; i < 100; ++i) {  // soft threshold
    const Index n = 1 + static_cast<Index>(i % 8);
    const Vector v = rng.vec(n, 2.0);
    const double t = rng.uniform(0.0, 1.5);
    ok &= expect((prox_l1(v, t).value - testutil::oracle_prox_l1(v, t)).lpNorm<Eigen::Infinity>() <
                     tol,
                 "l1 oracle mismatch", detail);
  }
  for (int i = 0; i < 100; ++i) {  // scaled squared loss
    const Index n = 1 + static_cast<Index>(i % 8);
    const Vector u = rng.vec(n, 2.0), y = rng.vec(n, 2.0);
    const double c = rng.uniform(0.05, 4.0);
    ok &= expect((prox_squared_loss_scaled(u, y, c) - testutil::oracle_prox_squared_loss(u, y, c))
                         .lpNorm<Eigen::Infinity>() < tol,
                 "squared-loss oracle mismatch", detail);
  }
  for (int i = 0; i < 100; ++i) {  // singular value threshold
    const Index m = 2 + static_cast<Index>(i % 7), q = 2 + static_cast<Index>((i / 7) % 7);
    const Matrix y = rng.mat(m, q, 1.5);
    const double t = rng.uniform(0.05, 1.5);
    double gain = 0.0;
    const Matrix oracle = testutil::oracle_prox_nuclear(y, t, rng, &gain);
    ok &= expect(gain < 1e-9, "nuclear oracle admits a descent direction", detail);
    ok &= expect((prox_nuclear(y, t).value - oracle).lpNorm<Eigen::Infinity>() < tol,
                 "nuclear oracle mismatch", detail);
  }
  for (int i = 0; i < 100; ++i) {  // fused lasso
    const Index p = 2 + static_cast<Index>(i % 7);
    const Vector v = rng.vec(p, 2.0);
    const double lam = rng.uniform(0.0, 0.8), lamp = rng.uniform(0.0, 0.8);
    ok &= expect((prox_fused(v, lam, lamp).value - testutil::oracle_prox_fused(v, lam, lamp))
                         .lpNorm<Eigen::Infinity>() < tol,
                 "fused oracle mismatch", detail);
  }
  for (int i = 0; i < 100; ++i) {  // sparse group lasso
    const Index p = 4 + static_cast<Index>(i % 5);
    GroupPartition part = GroupPartition::contiguous(p, 2);
    part.weights = {rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0)};
    const Vector v = rng.vec(p, 2.0);
    const double lam = rng.uniform(0.0, 0.6), lamp = rng.uniform(0.0, 0.6);
    ok &= expect((prox_sgl(v, lam, lamp, part).value -
                  testutil::oracle_prox_sgl(v, lam, lamp, part))
                         .lpNorm<Eigen::Infinity>() < tol,
                 "sparse-group oracle mismatch", detail);
  }
  return ok;
}

// ---------------------------------------------------------------- criterion 2
bool jacobian_suite(std::string& detail) {
  Rng rng(1002);
  bool ok = true;
  const double eps = 1e-5, tol = 1e-5;

  int done = 0;  // l1
  while (done < 25) {
    const Vector v = rng.vec(6, 2.0);
    const double t = rng.uniform(0.1, 1.0);
    if (!testutil::l1_generic(v, t, 1e-3)) continue;
    const VectorProx eval = prox_l1(v, t);
    const Vector dir = rng.vec(6);
    const Vector fd = testutil::central_difference(
        [&](const Vector& x) { return prox_l1(x, t).value; }, v, dir, eps);
    ok &= expect((fd - l1_jacobian_apply(std::get<L1Certificate>(eval.certificate), dir))
                         .lpNorm<Eigen::Infinity>() < tol,
                 "l1 jacobian finite differences", detail);
    ++done;
  }

  done = 0;  // nuclear, both orientations
  while (done < 25) {
    const bool tall = done % 2 == 1;
    const Matrix y = rng.mat(tall ? 7 : 4, tall ? 4 : 7, 1.5);
    const double t = rng.uniform(0.2, 1.0);
    const MatrixProx eval = prox_nuclear(y, t);
    const auto& cert = std::get<SvdCertificate>(eval.certificate);
    if (!testutil::nuclear_generic(cert, 1e-3) || cert.alpha1.empty()) continue;
    const Matrix dir = rng.mat(y.rows(), y.cols());
    const Matrix fd = testutil::central_difference_mat(
        [&](const Matrix& x) { return prox_nuclear(x, t).value; }, y, dir, eps);
    ok &= expect((fd - nuclear_jacobian_apply(cert, dir)).lpNorm<Eigen::Infinity>() < tol,
                 "nuclear jacobian finite differences", detail);
    ++done;
  }

  done = 0;  // fused
  while (done < 25) {
    const Index p = 6;
    const Vector v = rng.vec(p, 2.0);
    const double lam = rng.uniform(0.05, 0.4), lamp = rng.uniform(0.05, 0.4);
    const Vector tv_stage = tv_prox(v, lamp, nullptr);
    bool generic = true;
    for (Index i = 0; i < p; ++i)
      if (std::abs(std::abs(tv_stage[i]) - lam) < 1e-3) generic = false;
    if (!generic) continue;
    const VectorProx eval = prox_fused(v, lam, lamp);
    const Vector dir = rng.vec(p);
    const Vector fd = testutil::central_difference(
        [&](const Vector& x) { return prox_fused(x, lam, lamp).value; }, v, dir, eps);
    ok &= expect((fd - fused_jacobian_apply(std::get<FusedCertificate>(eval.certificate), dir))
                         .lpNorm<Eigen::Infinity>() < tol,
                 "fused jacobian finite differences", detail);
    ++done;
  }

  GroupPartition part = GroupPartition::contiguous(6, 2);
  done = 0;  // sparse group
  while (done < 25) {
    const Vector v = rng.vec(6, 2.0);
    const double lam = rng.uniform(0.05, 0.4), lamp = rng.uniform(0.05, 0.4);
    const VectorProx eval = prox_sgl(v, lam, lamp, part);
    const auto& cert = std::get<GroupCertificate>(eval.certificate);
    bool generic = testutil::l1_generic(v, lam, 1e-3);
    for (size_t l = 0; l < cert.states.size(); ++l)
      if (std::abs(cert.states[l].residual_norm - lamp * part.weights[l]) < 1e-3) generic = false;
    if (!generic) continue;
    const Vector dir = rng.vec(6);
    const Vector fd = testutil::central_difference(
        [&](const Vector& x) { return prox_sgl(x, lam, lamp, part).value; }, v, dir, eps);
    ok &= expect((fd - sgl_jacobian_apply(cert, dir)).lpNorm<Eigen::Infinity>() < tol,
                 "sparse-group jacobian finite differences", detail);
    ++done;
  }

  // generalized Hessian vs differentiated dual gradient, plus symmetry and
  // definiteness assertions
  done = 0;
  while (done < 12) {
    const int kind = done % 4;
    const ProblemSpec problem = testutil::random_problem(rng, 12, 3, 4, 8, kind);
    OuterState state;
    state.b_mat = Matrix::Zero(3, 4);
    state.gamma_vec = Vector::Zero(8);
    state.s_vec = Vector::Zero(12);
    state.xi_vec = Vector::Zero(12);
    state.sigma = rng.uniform(0.5, 2.0);
    const double nu = 1.0;
    const Vector xi = rng.vec(12, 0.5);
    const DualPoint point = eval_dual_point(problem, state, xi, nu, true);
    if (const auto* svd = std::get_if<SvdCertificate>(&point.prox_b.certificate))
      if (!testutil::nuclear_generic(*svd, 1e-3)) continue;
    const HessianOperator op = make_hessian_operator(problem.data, point, state.sigma, nu);
    const Vector dir = rng.vec(12);
    const Vector fd = testutil::central_difference(
        [&](const Vector& x) { return eval_dual_gradient(problem, state, x, nu); }, xi, dir, eps);
    const Vector impl = hessian_apply(op, dir);
    ok &= expect((fd - impl).lpNorm<Eigen::Infinity>() <
                     tol * (1.0 + impl.lpNorm<Eigen::Infinity>()),
                 "hessian finite differences", detail);
    const Vector u = rng.vec(12), w = rng.vec(12);
    const Vector hu = hessian_apply(op, u), hw = hessian_apply(op, w);
    ok &= expect(std::abs(u.dot(hw) - hu.dot(w)) < 1e-9 * (1.0 + hu.norm() * w.norm()),
                 "hessian self-adjointness", detail);
    ok &= expect(u.dot(hu) <= -state.sigma / (nu + state.sigma) * u.squaredNorm() + 1e-10,
                 "hessian negative-definiteness floor", detail);
    ++done;
  }
  return ok;
}

// ---------------------------------------------------------------- criterion 3
bool cross_solver_equivalence(std::string& detail) {
  Rng rng(1003);
  bool ok = true;
  for (int i = 0; i < 20; ++i) {
    const int kind = i % 4;
    const ProblemSpec problem = testutil::random_problem(rng, 50, 10, 8, 20, kind, 0.25);

    PpdnaConfig pc;
    pc.kkt_tol = 1e-9;
    const PpdnaResult p = solve_ppdna(problem, pc);

    AdmmConfig ac;
    ac.kkt_tol = 1e-9;
    ac.max_iter = 500000;
    const AdmmResult a = solve_admm(problem, ac);

    ApgConfig gc;
    gc.kkt_tol = 5e-9;
    gc.max_iter = 500000;
    gc.trace_stride = 1000;
    const ApgResult g = solve_apg(problem, gc);

    ok &= expect(p.report.eta_kkt < 1e-8, "ppdna eta above 1e-8", detail);
    ok &= expect(a.report.eta_kkt < 1e-8, "admm eta above 1e-8", detail);
    ok &= expect(g.report.eta_kkt < 1e-8, "apg eta above 1e-8", detail);
    ok &= expect(std::abs(rel_obj(p.report.objective, a.report.objective)) < 1e-6,
                 "ppdna/admm objective gap", detail);
    ok &= expect(std::abs(rel_obj(p.report.objective, g.report.objective)) < 1e-6,
                 "ppdna/apg objective gap", detail);
    ok &= expect(std::abs(rel_obj(a.report.objective, g.report.objective)) < 1e-6,
                 "admm/apg objective gap", detail);
  }
  return ok;
}

// ---------------------------------------------------------------- criterion 4
bool zero_solution_optimality(std::string& detail) {
  Rng rng(1004);
  bool ok = true;
  ProblemSpec problem = testutil::random_problem(rng, 60, 12, 10, 30, 1);
  const Vector xty = problem.data.x_design.transpose() * problem.data.response;
  Eigen::JacobiSVD<Matrix> svd(mat_map(xty, 12, 10));
  const double rho = 1.0001 * svd.singularValues()[0];
  const double lambda =
      1.0001 * (problem.data.z_design.transpose() * problem.data.response).cwiseAbs().maxCoeff();
  problem.penalty.matrix_penalty = MatrixPenalty::nuclear(rho);
  problem.penalty.vector_penalty = VectorPenalty::lasso(lambda);

  PpdnaConfig pc;
  pc.kkt_tol = 1e-9;
  const PpdnaResult p = solve_ppdna(problem, pc);
  ok &= expect(p.report.eta_kkt < 1e-8 && p.coeff.b_mat.lpNorm<Eigen::Infinity>() < 1e-8 &&
                   p.coeff.gamma_vec.lpNorm<Eigen::Infinity>() < 1e-8,
               "ppdna zero solution", detail);

  AdmmConfig ac;
  ac.kkt_tol = 1e-9;
  ac.max_iter = 200000;
  const AdmmResult a = solve_admm(problem, ac);
  ok &= expect(a.report.eta_kkt < 1e-8 && a.coeff.b_mat.lpNorm<Eigen::Infinity>() < 1e-8 &&
                   a.coeff.gamma_vec.lpNorm<Eigen::Infinity>() < 1e-8,
               "admm zero solution", detail);

  ApgConfig gc;
  gc.kkt_tol = 1e-9;
  gc.max_iter = 200000;
  const ApgResult g = solve_apg(problem, gc);
  ok &= expect(g.report.eta_kkt < 1e-8 && g.coeff.b_mat.lpNorm<Eigen::Infinity>() < 1e-8 &&
                   g.coeff.gamma_vec.lpNorm<Eigen::Infinity>() < 1e-8,
               "apg zero solution", detail);
  return ok;
}

// ---------------------------------------------------------------- criterion 5
bool efficiency_pattern(std::string& detail) {
  ExperimentConfig config;
  config.scenario = Scenario::Efficiency;
  config.n = 500;
  config.m = 100;
  config.q = 80;
  config.p = 100;
  config.rank = 5;
  config.nonsparsity_s = 0.1;
  config.seed = 2024;
  config.efficiency_robj_tol = 1e-10;
  config.admm_iteration_cap = 500000;
  config.time_limit_seconds = 420.0;

  const EfficiencyResult eff = run_efficiency(config);
  const EfficiencyRow* ppdna = nullptr;
  const EfficiencyRow* admm = nullptr;
  for (const auto& row : eff.rows) {
    if (row.solver == SolverChoice::Ppdna) ppdna = &row;
    if (row.solver == SolverChoice::Admm) admm = &row;
  }
  bool ok = expect(ppdna != nullptr && admm != nullptr, "missing solver rows", detail);
  if (!ok) return false;
  std::ostringstream os;
  os << "ppdna " << ppdna->iterations << " iterations / " << ppdna->seconds << " s, admm "
     << admm->iterations << " / " << admm->seconds << " s";
  ok &= expect(ppdna->robj <= 1e-10, "ppdna missed the R_obj target: " + os.str(), detail);
  ok &= expect(ppdna->iterations <= 50, "ppdna outer iterations above 50: " + os.str(), detail);
  ok &= expect(ppdna->seconds < admm->seconds,
               "ppdna not strictly faster than admm: " + os.str(), detail);
  ok &= expect(admm->iterations >= 10 * ppdna->iterations,
               "admm/ppdna iteration ratio below 10: " + os.str(), detail);
  return ok;
}

// ---------------------------------------------------------------- criterion 6
bool estimator_ordering(std::string& detail) {
  bool ok = true;
  const std::vector<std::pair<GammaScheme, Estimator>> expected = {
      {GammaScheme::S1, Estimator::NL},
      {GammaScheme::S2, Estimator::NFL},
      {GammaScheme::S3, Estimator::NSGL},
  };
  for (const auto& [scheme, winner] : expected) {
    ExperimentConfig config;
    config.scenario = Scenario::ShapeStudy;
    config.shape = ShapeKind::Square;
    config.scheme = scheme;
    config.n = 300;
    config.m = 64;
    config.q = 64;
    config.p = 1000;
    config.n_validation = 1000;
    config.n_test = 300;
    config.replications = 20;
    config.grid.points = 8;
    config.seed = 314159;
    config.threads = 0;

    const StudyResult study = run_replications(config);
    const ReplicationSummary* best = nullptr;
    const ReplicationSummary* nl = nullptr;
    for (const auto& s : study.summaries) {
      if (!best || s.mean_rmse < best->mean_rmse) best = &s;
      if (s.estimator == Estimator::NL) nl = &s;
    }
    std::ostringstream os;
    os << to_string(scheme) << " means:";
    for (const auto& s : study.summaries) os << ' ' << to_string(s.estimator) << '=' << s.mean_rmse;
    std::fprintf(stderr, "    [criterion 6] %s\n", os.str().c_str());
    ok &= expect(best && best->estimator == winner,
                 std::string("wrong best estimator under ") + to_string(scheme) + ": " + os.str(),
                 detail);
    if (scheme == GammaScheme::S1 && nl)
      ok &= expect(nl->mean_rmse >= 4.5 && nl->mean_rmse <= 9.0,
                   "S1 NL mean RMSE-y outside [4.5, 9.0]: " + os.str(), detail);
  }
  return ok;
}

// ---------------------------------------------------------------- criterion 7
bool generator_fidelity(std::string& detail) {
  bool ok = true;
  const double pi_r1 = std::sqrt(1.0 - std::pow(1.0 - 0.1, 1.0));
  ok &= expect(std::abs(pi_r1 - 0.316228) < 1e-6, "Bernoulli probability for r=1, s=0.1", detail);

  std::mt19937_64 rng(777);
  double total = 0.0;
  for (int d = 0; d < 200; ++d) {
    const Matrix b = gen_lowrank_matrix(50, 50, 2, 0.2, rng);
    Index nnz = 0;
    for (Index i = 0; i < b.size(); ++i) nnz += (b.data()[i] != 0.0) ? 1 : 0;
    total += static_cast<double>(nnz) / static_cast<double>(b.size());
  }
  const double mean_ns = total / 200.0;
  ok &= expect(std::abs(mean_ns - 0.2) <= 0.02,
               "empirical non-sparsity " + std::to_string(mean_ns) + " outside 0.2 +- 0.02",
               detail);
  return ok;
}

// ---------------------------------------------------------------- criterion 8
bool consistency_trend(std::string& detail) {
  ExperimentConfig config;
  config.scenario = Scenario::Consistency;
  config.m = 10;
  config.q = 10;
  config.p = 20;
  config.n_ladder = {200, 800, 3200};
  config.replications = 20;
  config.consistency_penalty_scale = 1.0;
  config.seed = 99;
  config.threads = 0;
  config.ppdna.kkt_tol = 1e-8;

  const ConsistencyResult cons = run_consistency(config);
  std::ostringstream os;
  for (const auto& row : cons.rows)
    os << " n=" << row.n << " Eb=" << row.mean_error_b << " Eg=" << row.mean_error_gamma;
  bool ok = expect(cons.error_b_decreasing, "Error-B not strictly decreasing:" + os.str(), detail);
  ok &= expect(cons.error_gamma_decreasing, "Error-gamma not strictly decreasing:" + os.str(),
               detail);
  return ok;
}

// ---------------------------------------------------------------- criterion 9
bool ssn_superlinear_signature(std::string& detail) {
  Rng rng(1009);
  const ProblemSpec problem = testutil::random_problem(rng, 200, 10, 8, 20, 1, 0.2);
  OuterState state;
  state.b_mat = Matrix::Zero(10, 8);
  state.gamma_vec = Vector::Zero(20);
  state.s_vec = Vector::Zero(200);
  state.xi_vec = Vector::Zero(200);
  state.sigma = 5.0;
  SsnConfig config;
  config.max_inner = 80;
  const SsnResult result = solve_ssn(problem, state, 1.0, config, 1e-13);

  // final three gradient norms above the float64 floor
  size_t last = 0;
  for (size_t i = 0; i < result.gradient_norms.size(); ++i)
    if (result.gradient_norms[i] > 1e-10) last = i;
  if (!expect(last >= 2, "trace too short for the superlinear window", detail)) return false;
  const double g0 = result.gradient_norms[last - 2];
  const double g1 = result.gradient_norms[last - 1];
  const double g2 = result.gradient_norms[last];
  std::ostringstream os;
  os << "tail gradients " << g0 << " -> " << g1 << " -> " << g2;
  bool ok = expect(g1 < 1.0 && g2 < 1.0, "tail not inside the contraction region: " + os.str(),
                   detail);
  ok &= expect(g2 <= std::pow(g1, 1.2), "g2 > g1^1.2: " + os.str(), detail);
  if (g0 < 1.0) ok &= expect(g1 <= std::pow(g0, 1.2), "g1 > g0^1.2: " + os.str(), detail);
  return ok;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {1, "prox oracle suite (independent numeric minimization, 1e-6)", prox_oracle_suite},
      {2, "jacobian suite (finite differences 1e-5, symmetry, definiteness)", jacobian_suite},
      {3, "cross-solver equivalence (20 instances, rel 1e-6, eta < 1e-8)",
       cross_solver_equivalence},
      {4, "zero-solution optimality under dominating penalties", zero_solution_optimality},
      {5, "efficiency pattern (R_obj <= 1e-10, <= 50 outer, faster than admm, 10x iterations)",
       efficiency_pattern},
      {6, "estimator ordering (square shape: NL/S1, NFL/S2, NSGL/S3; S1 NL in [4.5, 9.0])",
       estimator_ordering},
      {7, "generator fidelity (Bernoulli formula, non-sparsity 0.2 +- 0.02)", generator_fidelity},
      {8, "consistency trend (errors strictly decrease over n = 200, 800, 3200)",
       consistency_trend},
      {9, "ssn superlinear signature (tail exponent 1.2)", ssn_superlinear_signature},
  };

  int failures = 0;
  for (auto& criterion : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool pass = false;
    try {
      pass = criterion.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] criterion %d: %s (%.1f s)%s%s\n", pass ? "PASS" : "FAIL", criterion.number,
                criterion.name.c_str(), secs, detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
