#include <benchmark/benchmark.h>

#include "peergroup/dpmm.hpp"
#include "peergroup/synthetic.hpp"

using namespace peergroup;

// 100 sweeps per iteration; items = observations visited.
static void BM_GibbsSweeps(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::vector<std::size_t> sizes{n / 2, n - n / 2};
  const auto t = standardize(synthetic::separated_blobs(sizes, 5, 6.0, 1.0, 2).table);
  DpmmConfig config;
  config.iterations = 100;
  config.burn_in = 20;
  config.thin = 5;
  for (auto _ : state) benchmark::DoNotOptimize(run_chain(t, config, 1));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 100);
}
BENCHMARK(BM_GibbsSweeps)->RangeMultiplier(2)->Range(50, 400)->Unit(benchmark::kMillisecond);
