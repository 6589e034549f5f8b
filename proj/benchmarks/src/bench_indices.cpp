#include <benchmark/benchmark.h>

#include <random>

#include "peergroup/indices.hpp"
#include "peergroup/synthetic.hpp"

using namespace peergroup;

namespace {

struct Fixture {
  DissimilarityMatrix d;
  Partition p;
};

Fixture make(std::size_t n) {
  const std::vector<std::size_t> sizes{n / 3, n / 3, n - 2 * (n / 3)};
  const auto b = synthetic::separated_blobs(sizes, 3, 4.0, 1.0, 3);
  return {euclidean_dissimilarity(b.table.ids, b.table.values), b.truth};
}

}  // namespace

static void BM_Silhouette(benchmark::State& state) {
  const auto f = make(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(silhouette(f.d, f.p));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Silhouette)->RangeMultiplier(2)->Range(128, 2048)->Complexity(benchmark::oNSquared);

static void BM_CalinskiHarabasz(benchmark::State& state) {
  const auto f = make(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ch_index(f.d, f.p));
}
BENCHMARK(BM_CalinskiHarabasz)->RangeMultiplier(2)->Range(128, 2048);

static void BM_Pcr(benchmark::State& state) {
  const auto f = make(static_cast<std::size_t>(state.range(0)));
  std::mt19937_64 rng(4);
  std::vector<int> labels(f.p.size());
  for (auto& l : labels) l = 1 + static_cast<int>(rng() % 5);
  const Partition q(f.p.ids(), labels);
  for (auto _ : state) benchmark::DoNotOptimize(pcr(f.p, q));
}
BENCHMARK(BM_Pcr)->RangeMultiplier(4)->Range(128, 8192);
