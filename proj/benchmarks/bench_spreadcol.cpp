#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "spreadcol/cluster_phase.hpp"
#include "spreadcol/greedy.hpp"
#include "spreadcol/matching.hpp"
#include "spreadcol/sparse_phase.hpp"

using namespace spreadcol;

static void BM_PipelineSample(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto d = static_cast<std::size_t>(state.range(1));
  const Graph g = gen_random_regular(n, d, 7);
  const PreparedPipeline prep(g, PipelineParams{});
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(prep.sample(rng));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_PipelineSample)->Args({100, 12})->Args({200, 16})->Args({1000, 16})->Unit(benchmark::kMillisecond);

static void BM_HopcroftKarpKOut(benchmark::State& state) {
  const auto j = static_cast<std::size_t>(state.range(0));
  const Bigraph full = Bigraph::complete(j, j);
  Rng rng(2);
  for (auto _ : state) {
    const Bigraph k = kout_subgraph(full, 3, rng);
    benchmark::DoNotOptimize(maximum_matching(k));
  }
}
BENCHMARK(BM_HopcroftKarpKOut)->Arg(100)->Arg(400)->Unit(benchmark::kMicrosecond);

static void BM_LabelStatistics(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::size_t d = 16;
  const Graph g = gen_random_regular(n, d, 3);
  std::vector<Vertex> all(n);
  std::iota(all.begin(), all.end(), Vertex{0});
  Rng rng(4);
  for (auto _ : state) {
    const Labeling tau = uniform_labeling(n, static_cast<Color>(d + 1), rng);
    benchmark::DoNotOptimize(label_statistics(g, tau, all, BadEventThresholds{0.3, 0.0}));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_LabelStatistics)->Arg(500)->Arg(5000)->Unit(benchmark::kMicrosecond);

static void BM_EnumerateCliqueMinusClique(benchmark::State& state) {
  const auto inst = build_counterexample(CounterexampleKind::CliqueMinusClique, 8);
  for (auto _ : state) benchmark::DoNotOptimize(count_colorings(inst.graph, inst.lists));
}
BENCHMARK(BM_EnumerateCliqueMinusClique)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
