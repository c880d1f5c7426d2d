// Microbenchmarks for the hot paths: net generation, chain oracle
// evaluation, partition sampling, and a full small solve.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <span>
#include <vector>

#include "flowtrap/chain.hpp"
#include "flowtrap/geometry.hpp"
#include "flowtrap/gridpath.hpp"
#include "flowtrap/oracle.hpp"
#include "flowtrap/rng.hpp"
#include "flowtrap/trap.hpp"

namespace {

void BM_net_generation(benchmark::State& state) {
  const auto rect = flowtrap::HyperRectangle::cube(2, 0.0, 1.0);
  const double delta = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) {
    std::uint64_t count = 0;
    double sink = 0.0;
    flowtrap::for_each_net_point(
        rect, delta, 100000000ull,
        [&](std::span<const double> p) {
          sink += p[0];
          ++count;
        });
    benchmark::DoNotOptimize(sink);
    benchmark::DoNotOptimize(count);
  }
}
BENCHMARK(BM_net_generation)->Range(16, 1024)->Unit(benchmark::kMicrosecond);

void BM_partition_sampling(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    auto partition = flowtrap::sample_partition(d, 8, seed++);
    benchmark::DoNotOptimize(partition.parts.data());
  }
}
BENCHMARK(BM_partition_sampling)
    ->Range(64, 4096)
    ->Unit(benchmark::kMicrosecond);

std::vector<double> random_point(int d, std::uint64_t seed) {
  flowtrap::Rng rng(seed);
  std::vector<double> x(static_cast<std::size_t>(d));
  for (double& v : x) v = flowtrap::standard_normal(rng);
  return x;
}

void BM_chain_value(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const flowtrap::ChainOracle oracle(flowtrap::sample_partition(d, d / 16, 7));
  const auto x = random_point(d, 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle.value(x));
  }
}
BENCHMARK(BM_chain_value)->Range(64, 4096)->Unit(benchmark::kMicrosecond);

void BM_chain_gradient(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const flowtrap::ChainOracle oracle(flowtrap::sample_partition(d, d / 16, 7));
  const auto x = random_point(d, 11);
  std::vector<double> grad(static_cast<std::size_t>(d));
  for (auto _ : state) {
    oracle.gradient(x, grad);
    benchmark::DoNotOptimize(grad.data());
  }
}
BENCHMARK(BM_chain_gradient)->Range(64, 4096)->Unit(benchmark::kMicrosecond);

void BM_chain_progress(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const flowtrap::ChainOracle oracle(flowtrap::sample_partition(d, d / 16, 7));
  const auto x = random_point(d, 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle.progress(x).index);
  }
}
BENCHMARK(BM_chain_progress)->Range(64, 4096)->Unit(benchmark::kMicrosecond);

void BM_solve_cube(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const flowtrap::QuadraticBowl objective({0.4, 0.7}, 1.0,
                                          flowtrap::Domain::unit_cube);
  flowtrap::SolveConfig cfg;
  cfg.eps = 0.05;
  cfg.lipschitz = 1.0;
  cfg.d = 2;
  cfg.k = k;
  cfg.x0 = {0.1, 0.2};
  cfg.mode = flowtrap::SolveMode::cube;
  for (auto _ : state) {
    flowtrap::BatchSession session(objective);
    const auto result = flowtrap::solve(cfg, session);
    benchmark::DoNotOptimize(result.grad_norm);
  }
}
BENCHMARK(BM_solve_cube)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_frontier_search(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    flowtrap::PathOracle oracle(flowtrap::random_monotone_path(n, 2, seed++));
    const auto result = flowtrap::round_limited_search(
        oracle, n, 8, flowtrap::Strategy::frontier, seed);
    benchmark::DoNotOptimize(result.found);
  }
}
BENCHMARK(BM_frontier_search)->Range(8, 256)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
