#include <gtest/gtest.h>

#include <random>

#include "generators.hpp"
#include "kanon/error.hpp"
#include "kanon/training.hpp"

using namespace kanon;
using namespace kanon::testing;

namespace {

AnnealingConfig quick() {
  AnnealingConfig c;
  c.epochs = 15;
  c.proposals_per_epoch = 20;
  c.sample_size = 60;
  return c;
}

// Stars with 3 and with 5 leaves. Random edges between leaves of different
// stars perturb the neighbor-degree features while the centers keep their
// star-shaped neighborhoods.
Graph two_class_stars(std::uint64_t seed) {
  std::vector<Edge> edges;
  std::vector<NodeId> leaves;
  NodeId next = 0;
  std::vector<NodeId> owner;
  for (int s = 0; s < 40; ++s) {
    const NodeId center = next++;
    owner.push_back(center);
    const int arms = s < 20 ? 3 : 5;
    for (int a = 0; a < arms; ++a) {
      edges.emplace_back(center, next);
      leaves.push_back(next);
      owner.push_back(center);
      ++next;
    }
  }
  std::mt19937_64 rng(seed);
  for (int i = 0; i < 60; ++i) {
    NodeId a = leaves[rng() % leaves.size()], b = leaves[rng() % leaves.size()];
    if (owner[a] != owner[b]) edges.emplace_back(a, b);
  }
  return make_graph(next, edges);
}

}  // namespace

TEST(Training, IdenticalStructureHasFitnessOne) {
  Graph g = cycle_graph(40);
  auto t = FeatureTable::build(g);
  auto r = train_weights(g, t, quick(), 1);
  EXPECT_DOUBLE_EQ(r.fitness, 1.0);
  EXPECT_DOUBLE_EQ(r.initial_fitness, 1.0);
}

TEST(Training, RecordIsMonotoneAndWeightsOnSimplex) {
  Graph g = clustered_powerlaw(200, 3, 0.3, 5);
  auto t = FeatureTable::build(g);
  auto r = train_weights(g, t, quick(), 2);
  ASSERT_EQ(r.best_per_epoch.size(), 15u);
  for (std::size_t i = 1; i < r.best_per_epoch.size(); ++i) EXPECT_GE(r.best_per_epoch[i], r.best_per_epoch[i - 1]);
  EXPECT_GE(r.fitness, r.initial_fitness);
  EXPECT_DOUBLE_EQ(r.fitness, r.best_per_epoch.back());
  double sum = 0;
  for (double x : r.weights.w) {
    EXPECT_GE(x, 0.0);
    sum += x;
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(Training, DeterministicPerSeed) {
  Graph g = clustered_powerlaw(150, 2, 0.3, 6);
  auto t = FeatureTable::build(g);
  auto a = train_weights(g, t, quick(), 7);
  auto b = train_weights(g, t, quick(), 7);
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_EQ(a.best_per_epoch, b.best_per_epoch);
}

TEST(Training, TwoClassesSeparatedByDegree) {
  Graph g = two_class_stars(3);
  auto t = FeatureTable::build(g);
  auto r = train_weights(g, t, quick(), 4);
  // Exhaustive nearest-neighbor check over the star centers: the nearest
  // node must come from the same class.
  std::size_t same = 0, total = 0;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (g.degree(v) != 3 && g.degree(v) != 5) continue;
    auto hood = neighborhood(g, v);
    if (hood.edge_count() != g.degree(v)) continue;  // not star-shaped
    std::vector<NodeId> pool;
    for (NodeId u = 0; u < g.num_nodes(); ++u) {
      if (u != v) pool.push_back(u);
    }
    auto best = rank_candidates(t, v, pool, r.weights, 1).nodes.at(0);
    ++total;
    same += g.degree(best) == g.degree(v) ? 1 : 0;
  }
  ASSERT_GT(total, 30u);
  EXPECT_GE(static_cast<double>(same), 0.9 * static_cast<double>(total));
}

TEST(Training, HitRateOfIdenticalGraphIsOne) {
  Graph g = cycle_graph(30);
  auto t = FeatureTable::build(g);
  auto sample = sample_nodes(30, 10, 1);
  EXPECT_DOUBLE_EQ(isomorphism_hit_rate(g, t, DistanceWeights::uniform(), sample, 3), 1.0);
}

TEST(Training, SampleNodes) {
  auto s = sample_nodes(100, 10, 5);
  ASSERT_EQ(s.size(), 10u);
  EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
  EXPECT_EQ(std::adjacent_find(s.begin(), s.end()), s.end());
  EXPECT_EQ(sample_nodes(5, 10, 1).size(), 5u);
  EXPECT_EQ(s, sample_nodes(100, 10, 5));
}

TEST(Training, Errors) {
  Graph g = path_graph(1);
  auto t = FeatureTable::build(g);
  EXPECT_THROW(train_weights(g, t, quick(), 1), ConfigError);
  AnnealingConfig bad = quick();
  bad.cooling = 1.5;
  EXPECT_THROW(bad.validate(), ConfigError);
}
