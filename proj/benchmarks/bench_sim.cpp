#include <benchmark/benchmark.h>

#include "stablesim/gbm.hpp"
#include "stablesim/montecarlo.hpp"
#include "stablesim/simulate.hpp"
#include "stablesim/sweep.hpp"

using namespace stablesim;

namespace {

const MarketParams kMarket(0.0, 0.05, 100e6, 100);
const PolicyParams kPolicy(0.05, 5.0, 1.0);

void BM_GenerateCapPath(benchmark::State& state) {
  const MarketParams m(0.0, 0.05, 100e6, state.range(0));
  std::uint64_t i = 0;
  for (auto _ : state) {
    auto cap = generate_cap_path(m, PathSeed{1, i++});
    benchmark::DoNotOptimize(cap);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateCapPath)->Arg(100)->Arg(1000);

void BM_RunPath(benchmark::State& state) {
  const auto cap = generate_cap_path(kMarket, PathSeed{1, 0});
  for (auto _ : state) {
    auto path = run_path(cap, kPolicy);
    benchmark::DoNotOptimize(path);
  }
  state.SetItemsProcessed(state.iterations() * kMarket.horizon);
}
BENCHMARK(BM_RunPath);

void BM_EstimateLoss(benchmark::State& state) {
  const auto workers = static_cast<unsigned>(state.range(1));
  for (auto _ : state) {
    auto estimate =
        estimate_loss(kMarket, kPolicy, LossWeights(1.0), state.range(0), 7, workers);
    benchmark::DoNotOptimize(estimate);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EstimateLoss)->Args({200, 1})->Args({200, 4})->Unit(benchmark::kMillisecond);

void BM_SweepDefaultGrid(benchmark::State& state) {
  const GridSpec grid = default_grid();
  for (auto _ : state) {
    auto surface = sweep_grid(kMarket, grid, LossWeights(1.0), state.range(0), 7, 1.0,
                              static_cast<unsigned>(state.range(1)));
    benchmark::DoNotOptimize(surface);
  }
}
BENCHMARK(BM_SweepDefaultGrid)->Args({200, 1})->Args({200, 4})->Unit(benchmark::kMillisecond);

void BM_LambdaFrontier(benchmark::State& state) {
  const GridSpec grid = default_grid();
  const std::vector<double> lambdas{0.0, 0.5, 1.0, 2.0, 5.0, 10.0};
  for (auto _ : state) {
    auto frontier = lambda_frontier(kMarket, grid, lambdas, 200, 7, 1.0, 2);
    benchmark::DoNotOptimize(frontier);
  }
}
BENCHMARK(BM_LambdaFrontier)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
