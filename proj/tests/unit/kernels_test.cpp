#include <gtest/gtest.h>

#include <algorithm>

#include "generators.hpp"
#include "kanon/kernels.hpp"
#include "oracles.hpp"

using namespace kanon;
using namespace kanon::testing;

namespace {

struct ThreadGuard {
  int saved = kernels::max_threads();
  ~ThreadGuard() { kernels::set_threads(saved); }
};

std::vector<Graph> corpus() {
  std::vector<Graph> out{path_graph(1), path_graph(7), star_graph(6), barbell_graph(), two_disjoint_triangles()};
  out.push_back(random_graph(120, 0.04, 5));
  out.push_back(clustered_powerlaw(300, 3, 0.3, 9));
  return out;
}

}  // namespace

// The OpenMP kernels reduce in block order, so they agree bit for bit across
// thread counts; against the serial reference only up to rounding.
TEST(Kernels, OmpMatchesSerialForAnyThreadCount) {
  ThreadGuard guard;
  for (const Graph& g : corpus()) {
    const auto bc = kernels::serial::betweenness(g);
    const auto cc = kernels::serial::clustering(g);
    const auto ps = kernels::serial::all_sources_bfs(g);
    std::vector<double> x(g.num_nodes()), y_serial(g.num_nodes()), y(g.num_nodes());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = 1.0 / static_cast<double>(i + 1);
    kernels::serial::shifted_matvec(g, x, y_serial);
    kernels::set_threads(1);
    const auto bc_one = kernels::omp::betweenness(g);
    ASSERT_EQ(bc_one.size(), bc.size());
    for (std::size_t v = 0; v < bc.size(); ++v) {
      EXPECT_NEAR(bc_one[v], bc[v], 1e-9 * std::max(1.0, bc[v]));
    }
    for (int threads : {1, 2, 4}) {
      kernels::set_threads(threads);
      EXPECT_EQ(kernels::omp::betweenness(g), bc_one) << threads;
      EXPECT_EQ(kernels::omp::clustering(g), cc);
      auto po = kernels::omp::all_sources_bfs(g);
      EXPECT_EQ(po.distance_sum, ps.distance_sum);
      EXPECT_EQ(po.reachable, ps.reachable);
      EXPECT_EQ(po.eccentricity, ps.eccentricity);
      kernels::omp::shifted_matvec(g, x, y);
      EXPECT_EQ(y, y_serial);
    }
  }
}

TEST(Kernels, BetweennessMatchesPathEnumeration) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Graph g = random_graph(3 + seed % 6, 0.45, seed);
    const auto expect = brute_force_betweenness(g);
    const auto got = kernels::omp::betweenness(g);
    ASSERT_EQ(got.size(), expect.size());
    for (std::size_t v = 0; v < got.size(); ++v) EXPECT_NEAR(got[v], expect[v], 1e-9);
  }
}

TEST(Kernels, BfsMatchesFloydWarshall) {
  Graph g = random_graph(25, 0.12, 4);
  const auto d = all_pairs_distances(g);
  const auto ps = kernels::omp::all_sources_bfs(g);
  for (NodeId s = 0; s < g.num_nodes(); ++s) {
    std::uint64_t sum = 0;
    std::uint32_t reach = 0, ecc = 0;
    for (NodeId t = 0; t < g.num_nodes(); ++t) {
      if (t == s || d[s][t] < 0) continue;
      sum += static_cast<std::uint64_t>(d[s][t]);
      ++reach;
      ecc = std::max<std::uint32_t>(ecc, static_cast<std::uint32_t>(d[s][t]));
    }
    EXPECT_EQ(ps.distance_sum[s], sum);
    EXPECT_EQ(ps.reachable[s], reach);
    EXPECT_EQ(ps.eccentricity[s], ecc);
  }
}
