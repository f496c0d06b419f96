#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"

#include "matreg/admm.hpp"
#include "matreg/apg.hpp"
#include "matreg/model.hpp"
#include "matreg/ppdna.hpp"

#include <Eigen/Cholesky>

using namespace matreg;
using testutil::Rng;

TEST_CASE("rel_obj formula") {
  CHECK(rel_obj(5.0, 5.0) == doctest::Approx(0.0));
  CHECK(rel_obj(1.0, 0.0) == doctest::Approx(1.0));
  CHECK(rel_obj(3.0, -2.0) == doctest::Approx(5.0 / 3.0));
}

TEST_CASE("admm converges to zero under dominating penalties") {
  Rng rng(81);
  ProblemSpec problem = testutil::random_problem(rng, 12, 3, 4, 6, 1);
  const Vector xty = problem.data.x_design.transpose() * problem.data.response;
  Eigen::JacobiSVD<Matrix> svd(mat_map(xty, 3, 4));
  problem.penalty.matrix_penalty.rho = svd.singularValues()[0] * 1.02;
  problem.penalty.vector_penalty.lambda =
      (problem.data.z_design.transpose() * problem.data.response).cwiseAbs().maxCoeff() * 1.02;

  AdmmConfig config;
  config.kkt_tol = 1e-9;
  config.max_iter = 100000;
  const AdmmResult result = solve_admm(problem, config);
  CHECK(result.report.status == SolveStatus::Converged);
  CHECK(result.coeff.b_mat.lpNorm<Eigen::Infinity>() < 1e-7);
  CHECK(result.coeff.gamma_vec.lpNorm<Eigen::Infinity>() < 1e-7);
}

TEST_CASE("admm matches ppdna on a small instance and stops below tolerance") {
  Rng rng(82);
  const ProblemSpec problem = testutil::random_problem(rng, 18, 4, 3, 6, 1, 0.3);
  AdmmConfig admm_config;
  admm_config.kkt_tol = 1e-10;
  admm_config.max_iter = 300000;
  const AdmmResult admm = solve_admm(problem, admm_config);
  REQUIRE(admm.report.status == SolveStatus::Converged);
  CHECK(admm.report.eta_kkt < admm_config.kkt_tol);

  PpdnaConfig ppdna_config;
  ppdna_config.kkt_tol = 1e-10;
  const PpdnaResult ppdna = solve_ppdna(problem, ppdna_config);
  CHECK(std::abs(rel_obj(admm.report.objective, ppdna.report.objective)) < 1e-8);
}

TEST_CASE("the cached admm factorization solves its system to high accuracy") {
  Rng rng(83);
  const ProblemSpec problem = testutil::random_problem(rng, 20, 3, 4, 6, 1);
  const DesignData& d = problem.data;
  Matrix gram = Matrix::Identity(20, 20);
  gram.noalias() += d.x_design * d.x_design.transpose();
  gram.noalias() += d.z_design * d.z_design.transpose();
  Eigen::LLT<Matrix> llt(gram);
  REQUIRE(llt.info() == Eigen::Success);
  for (int trial = 0; trial < 25; ++trial) {
    const Vector rhs = rng.vec(20, rng.uniform(0.1, 10.0));
    const Vector solution = llt.solve(rhs);
    CHECK((gram * solution - rhs).norm() <= 1e-10 * rhs.norm());
  }
}

TEST_CASE("apg solves the unpenalized least-squares problem") {
  Rng rng(84);
  // overdetermined: n > m*q + p so the normal equations are nonsingular
  ProblemSpec problem = testutil::random_problem(rng, 40, 2, 3, 4, 1);
  problem.penalty.matrix_penalty.rho = 0.0;
  problem.penalty.vector_penalty.lambda = 0.0;

  ApgConfig config;
  config.kkt_tol = 1e-11;
  config.max_iter = 200000;
  const ApgResult result = solve_apg(problem, config);

  Matrix joint(40, 10);
  joint.leftCols(6) = problem.data.x_design;
  joint.rightCols(4) = problem.data.z_design;
  const Vector ls =
      (joint.transpose() * joint).ldlt().solve(joint.transpose() * problem.data.response);
  Vector estimate(10);
  estimate.head(6) = vec_map(result.coeff.b_mat);
  estimate.tail(4) = result.coeff.gamma_vec;
  CHECK((estimate - ls).lpNorm<Eigen::Infinity>() < 1e-6);
}

TEST_CASE("apg objective trace is nonincreasing and matches ppdna at convergence") {
  Rng rng(85);
  const ProblemSpec problem = testutil::random_problem(rng, 20, 4, 3, 6, 1, 0.3);
  ApgConfig config;
  config.kkt_tol = 1e-9;
  config.max_iter = 300000;
  const ApgResult apg = solve_apg(problem, config);
  REQUIRE(apg.report.status == SolveStatus::Converged);
  for (size_t i = 1; i < apg.report.trace.size(); ++i)
    CHECK(apg.report.trace[i].objective <=
          apg.report.trace[i - 1].objective + 1e-12 * (1.0 + std::abs(apg.report.objective)));

  PpdnaConfig ppdna_config;
  ppdna_config.kkt_tol = 1e-10;
  const PpdnaResult ppdna = solve_ppdna(problem, ppdna_config);
  CHECK(std::abs(rel_obj(apg.report.objective, ppdna.report.objective)) < 1e-6);
}

TEST_CASE("all three solvers agree across the four penalty families") {
  Rng rng(86);
  for (int kind = 0; kind < 4; ++kind) {
    const ProblemSpec problem = testutil::random_problem(rng, 16, 3, 3, 6, kind, 0.3);

    PpdnaConfig pc;
    pc.kkt_tol = 1e-10;
    const PpdnaResult p = solve_ppdna(problem, pc);

    AdmmConfig ac;
    ac.kkt_tol = 1e-10;
    ac.max_iter = 400000;
    const AdmmResult a = solve_admm(problem, ac);

    ApgConfig gc;
    gc.kkt_tol = 1e-9;
    gc.max_iter = 400000;
    const ApgResult g = solve_apg(problem, gc);

    CHECK(std::abs(rel_obj(p.report.objective, a.report.objective)) < 1e-6);
    CHECK(std::abs(rel_obj(p.report.objective, g.report.objective)) < 1e-6);
    CHECK(std::abs(rel_obj(a.report.objective, g.report.objective)) < 1e-6);
  }
}

TEST_CASE("config validation rejects out-of-range parameters") {
  AdmmConfig admm;
  admm.step_tau = 1.62;
  CHECK_THROWS_AS(admm.validate(), std::invalid_argument);
  admm.step_tau = 1.618;
  CHECK_NOTHROW(admm.validate());

  ApgConfig apg;
  apg.max_iter = 0;
  CHECK_THROWS_AS(apg.validate(), std::invalid_argument);
}
