#include "matreg/prox.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace matreg;

namespace {

Vector random_vector(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

Matrix random_matrix(Index m, Index q, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix a(m, q);
  for (Index j = 0; j < q; ++j)
    for (Index i = 0; i < m; ++i) a(i, j) = normal(rng);
  return a;
}

}  // namespace

static void ProxL1(benchmark::State& state) {
  const Vector v = random_vector(state.range(0), 1);
  for (auto _ : state) {
    auto eval = prox_l1(v, 0.5);
    benchmark::DoNotOptimize(eval.value.data());
  }
}
BENCHMARK(ProxL1)->Arg(1000)->Arg(10000);

static void ProxNuclear(benchmark::State& state) {
  const Matrix y = random_matrix(state.range(0), state.range(1), 2);
  for (auto _ : state) {
    auto eval = prox_nuclear(y, 0.5);
    benchmark::DoNotOptimize(eval.value.data());
  }
}
BENCHMARK(ProxNuclear)->Args({64, 64})->Args({100, 80})->Args({300, 200});

static void NuclearJacobianApply(benchmark::State& state) {
  const Matrix y = 3.0 * random_matrix(state.range(0), state.range(1), 3);
  const MatrixProx eval = prox_nuclear(y, 1.0);
  const auto& cert = std::get<SvdCertificate>(eval.certificate);
  const Matrix h = random_matrix(state.range(0), state.range(1), 4);
  for (auto _ : state) {
    Matrix w = nuclear_jacobian_apply(cert, h);
    benchmark::DoNotOptimize(w.data());
  }
}
BENCHMARK(NuclearJacobianApply)->Args({64, 64})->Args({100, 80});

static void ProxFused(benchmark::State& state) {
  const Vector v = random_vector(state.range(0), 5);
  for (auto _ : state) {
    auto eval = prox_fused(v, 0.3, 0.4);
    benchmark::DoNotOptimize(eval.value.data());
  }
}
BENCHMARK(ProxFused)->Arg(1000)->Arg(10000);

static void ProxSparseGroup(benchmark::State& state) {
  const Index p = state.range(0);
  const Vector v = random_vector(p, 6);
  const GroupPartition part = GroupPartition::contiguous(p, 10);
  for (auto _ : state) {
    auto eval = prox_sgl(v, 0.3, 0.4, part);
    benchmark::DoNotOptimize(eval.value.data());
  }
}
BENCHMARK(ProxSparseGroup)->Arg(1000)->Arg(10000);
