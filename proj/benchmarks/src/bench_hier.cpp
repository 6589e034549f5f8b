#include <benchmark/benchmark.h>

#include "peergroup/hier.hpp"
#include "peergroup/synthetic.hpp"

using namespace peergroup;

namespace {

DissimilarityMatrix blobs(std::size_t n) {
  const std::vector<std::size_t> sizes{n / 2, n - n / 2};
  const auto b = synthetic::separated_blobs(sizes, 4, 3.0, 1.0, 1);
  return euclidean_dissimilarity(b.table.ids, b.table.values);
}

}  // namespace

static void BM_Agglomerate(benchmark::State& state) {
  const auto d = blobs(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(agglomerate(d, Linkage::average));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Agglomerate)->RangeMultiplier(2)->Range(64, 1024)->Complexity()->Unit(benchmark::kMillisecond);

static void BM_Kirigami1(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto d = blobs(n);
  for (auto _ : state) benchmark::DoNotOptimize(kirigami1(d, Linkage::ward, FitIndex::ch, n / 4));
}
BENCHMARK(BM_Kirigami1)->RangeMultiplier(2)->Range(64, 512)->Unit(benchmark::kMillisecond);

static void BM_Kirigami2(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto d = blobs(n);
  for (auto _ : state) benchmark::DoNotOptimize(kirigami2(d, Linkage::ward, FitIndex::ch, n / 4));
}
BENCHMARK(BM_Kirigami2)->RangeMultiplier(2)->Range(64, 512)->Unit(benchmark::kMillisecond);
