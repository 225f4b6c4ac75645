#include <benchmark/benchmark.h>

#include <map>
#include <random>
#include <vector>

#include "kanon/graph.hpp"
#include "kanon/kernels.hpp"

namespace {

// Preferential attachment with m edges per new node; degree skew similar to
// the collaboration graphs the toolkit targets.
kanon::Graph attachment_graph(std::size_t n, std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<kanon::Edge> edges;
  std::vector<kanon::NodeId> ends;
  for (kanon::NodeId v = 1; v <= m && v < n; ++v) {
    edges.emplace_back(0, v);
    ends.push_back(0);
    ends.push_back(v);
  }
  for (kanon::NodeId v = static_cast<kanon::NodeId>(m) + 1; v < n; ++v) {
    for (std::size_t j = 0; j < m; ++j) {
      std::uniform_int_distribution<std::size_t> pick(0, ends.size() - 1);
      const kanon::NodeId u = ends[pick(rng)];
      edges.emplace_back(u, v);
      ends.push_back(u);
      ends.push_back(v);
    }
  }
  return kanon::Graph::from_edges(n, edges);
}

const kanon::Graph& graph_of(std::int64_t n) {
  static std::map<std::int64_t, kanon::Graph> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, attachment_graph(static_cast<std::size_t>(n), 3, 7)).first;
  return it->second;
}

void BM_BetweennessSerial(benchmark::State& state) {
  const auto& g = graph_of(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kanon::kernels::serial::betweenness(g));
}

void BM_BetweennessOmp(benchmark::State& state) {
  const auto& g = graph_of(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kanon::kernels::omp::betweenness(g));
}

void BM_AllSourcesBfsSerial(benchmark::State& state) {
  const auto& g = graph_of(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kanon::kernels::serial::all_sources_bfs(g));
}

void BM_AllSourcesBfsOmp(benchmark::State& state) {
  const auto& g = graph_of(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kanon::kernels::omp::all_sources_bfs(g));
}

void BM_ClusteringSerial(benchmark::State& state) {
  const auto& g = graph_of(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kanon::kernels::serial::clustering(g));
}

void BM_ClusteringOmp(benchmark::State& state) {
  const auto& g = graph_of(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kanon::kernels::omp::clustering(g));
}

void BM_MatvecSerial(benchmark::State& state) {
  const auto& g = graph_of(state.range(0));
  std::vector<double> x(g.num_nodes(), 1.0), y(g.num_nodes());
  for (auto _ : state) {
    kanon::kernels::serial::shifted_matvec(g, x, y);
    benchmark::DoNotOptimize(y.data());
  }
}

void BM_MatvecOmp(benchmark::State& state) {
  const auto& g = graph_of(state.range(0));
  std::vector<double> x(g.num_nodes(), 1.0), y(g.num_nodes());
  for (auto _ : state) {
    kanon::kernels::omp::shifted_matvec(g, x, y);
    benchmark::DoNotOptimize(y.data());
  }
}

}  // namespace

BENCHMARK(BM_BetweennessSerial)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BetweennessOmp)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AllSourcesBfsSerial)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AllSourcesBfsOmp)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ClusteringSerial)->Arg(4000)->Arg(16000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ClusteringOmp)->Arg(4000)->Arg(16000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_MatvecSerial)->Arg(16000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_MatvecOmp)->Arg(16000)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
