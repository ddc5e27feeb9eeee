// Microbenchmarks for the transport solver and the two distances.
// Run: ./wlmc_bench --benchmark_min_time=0.1

#include <benchmark/benchmark.h>

#include "wlmc/ot.hpp"
#include "wlmc/wl.hpp"

#include <random>

namespace {

using namespace wlmc;

Matrix random_stochastic(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> uni(0.05, 1.0);
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = uni(rng);
    m.row(i) /= m.row(i).sum();
  }
  return m;
}

Lmmc random_lmmc(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  MarkovKernel kernel(random_stochastic(rng, n));
  ProbVec mu = stationary_of(kernel);
  Matrix labels(n, 1);
  for (int i = 0; i < n; ++i) labels(i, 0) = uni(rng);
  return Lmmc(kernel, mu, labels);
}

void BM_OtSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(n);
  std::uniform_real_distribution<double> uni(0.0, 4.0);
  Matrix cost(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) cost(i, j) = uni(rng);
  const ProbVec a = ProbVec::uniform(n), b = ProbVec::uniform(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ot_value(cost, a, b));
  }
}
BENCHMARK(BM_OtSolve)->Arg(16)->Arg(32)->Arg(64)->Arg(128);

void BM_WlDistance(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(n * 31);
  const Lmmc x = random_lmmc(rng, n);
  const Lmmc y = random_lmmc(rng, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(wl_distance(x, y, 1));
  }
}
BENCHMARK(BM_WlDistance)->Arg(8)->Arg(16)->Arg(32);

void BM_WllbDistance(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(n * 17);
  const Lmmc x = random_lmmc(rng, n);
  const Lmmc y = random_lmmc(rng, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(wllb_distance(x, y, 3));
  }
}
BENCHMARK(BM_WllbDistance)->Arg(32)->Arg(64)->Arg(128)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
