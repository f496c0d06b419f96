#include "matreg/admm.hpp"
#include "matreg/datagen.hpp"
#include "matreg/experiments.hpp"
#include "matreg/ppdna.hpp"
#include "matreg/ssn.hpp"

#include <benchmark/benchmark.h>

using namespace matreg;

namespace {

ProblemSpec benchmark_problem(Index n, Index m, Index q, Index p) {
  std::mt19937_64 rng(derive_seed(31, 0));
  const Matrix b_true = gen_lowrank_matrix(m, q, std::min<Index>(5, std::min(m, q)), 0.1, rng);
  Vector gamma_true = Vector::Zero(p);
  gamma_true.head(std::max<Index>(1, p / 100)).setOnes();
  std::mt19937_64 rng2(derive_seed(31, 1));
  DesignData data = gen_samples(b_true, gamma_true, n, 1.0, rng2);
  const PenaltyLevels levels = tuning_values(data, Estimator::NL, 0.0316, 0.0316);
  return ProblemSpec{std::move(data), make_penalty(Estimator::NL, levels, p, 10)};
}

}  // namespace

static void HessianApply(benchmark::State& state) {
  const ProblemSpec problem = benchmark_problem(state.range(0), 100, 80, 100);
  OuterState outer;
  outer.b_mat = Matrix::Zero(100, 80);
  outer.gamma_vec = Vector::Zero(100);
  outer.s_vec = Vector::Zero(state.range(0));
  outer.xi_vec = Vector::Zero(state.range(0));
  outer.sigma = 3.0;
  std::mt19937_64 rng(derive_seed(31, 2));
  std::normal_distribution<double> normal;
  Vector xi(state.range(0));
  for (Index i = 0; i < xi.size(); ++i) xi[i] = 0.1 * normal(rng);
  const DualPoint point = eval_dual_point(problem, outer, xi, 1.0, true);
  const HessianOperator op = make_hessian_operator(problem.data, point, outer.sigma, 1.0);
  Vector u(state.range(0));
  for (Index i = 0; i < u.size(); ++i) u[i] = normal(rng);
  for (auto _ : state) {
    Vector out = hessian_apply(op, u);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(HessianApply)->Arg(200)->Arg(500);

static void PpdnaSolve(benchmark::State& state) {
  const ProblemSpec problem = benchmark_problem(state.range(0), 40, 30, 50);
  PpdnaConfig config;
  config.kkt_tol = 1e-8;
  for (auto _ : state) {
    PpdnaResult result = solve_ppdna(problem, config);
    benchmark::DoNotOptimize(result.report.objective);
  }
}
BENCHMARK(PpdnaSolve)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

static void AdmmSolve(benchmark::State& state) {
  const ProblemSpec problem = benchmark_problem(state.range(0), 40, 30, 50);
  AdmmConfig config;
  config.kkt_tol = 1e-8;
  config.max_iter = 100000;
  for (auto _ : state) {
    AdmmResult result = solve_admm(problem, config);
    benchmark::DoNotOptimize(result.report.objective);
  }
}
BENCHMARK(AdmmSolve)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
