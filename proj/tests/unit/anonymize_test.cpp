#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "generators.hpp"
#include "kanon/anonymize.hpp"
#include "kanon/error.hpp"

using namespace kanon;
using namespace kanon::testing;

namespace {

struct Prepared {
  Graph g;
  FeatureTable table;
  DistanceWeights w;
  RestrictionContext ctx;

  Prepared(Graph graph, std::size_t k, std::uint64_t seed = 1)
      : g(std::move(graph)), table(FeatureTable::build(g)), ctx(build_context(g, k, seed, table, w)) {}

  AnonymizedGraph run(Method m) const { return anonymize(g, m, ctx.k, ctx, table, w, 1); }
};

// Everything eligible, one community; theta as given.
RestrictionContext open_context(const Graph& g, std::size_t k, double theta) {
  RestrictionContext ctx;
  ctx.k = k;
  ctx.partition = make_partition(std::vector<CommunityId>(g.num_nodes(), 0));
  ctx.eligible.assign(g.num_nodes(), 1);
  ctx.theta = theta;
  return ctx;
}

std::vector<std::size_t> group_sizes(const AnonymizedGraph& a) {
  std::vector<std::size_t> out;
  for (const auto& s : a.provenance.supernodes) {
    if (s.size() > 1) out.push_back(s.size());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(Methods, NamesRoundTrip) {
  for (Method m : kAllMethods) EXPECT_EQ(parse_method(method_name(m)), m);
  EXPECT_THROW(parse_method("modif_r_l1"), ConfigError);
  EXPECT_FALSE(is_restricted(Method::kClustGlobal));
  EXPECT_TRUE(is_restricted(Method::kModifLocal2));
  EXPECT_EQ(strategy_of(Method::kClustLocal1), SearchStrategy::kLocal1);
}

TEST(Context, MergingExampleExcludesHubAndBridge) {
  Prepared s(merging_example(), 2);
  EXPECT_EQ(s.ctx.roles.hubs, (std::vector<NodeId>{0}));
  EXPECT_EQ(s.ctx.roles.bridges, (std::vector<NodeId>{4}));
  EXPECT_EQ(s.ctx.eligible_count(), 7u);
  EXPECT_GT(s.ctx.theta, 0.0);
}

TEST(Context, UniformScoresStillBuild) {
  Graph g = cycle_graph(12);
  auto t = FeatureTable::build(g);
  auto ctx = build_context(g, 2, 0, t, {});
  EXPECT_EQ(ctx.roles.hubs.size(), 12u);
  EXPECT_EQ(ctx.eligible_count(), 0u);
}

TEST(Context, EmptyGraphIsInfeasible) {
  Graph g;
  auto t = FeatureTable::build(g);
  EXPECT_THROW(build_context(g, 2, 0, t, {}), InfeasibleError);
}

TEST(Pool, GlobalAndLocal2) {
  Prepared s(planted_partition(3, 12, 0.6, 0.02, 4), 3);
  NodeId first = 0;
  while (!s.ctx.is_eligible(first)) ++first;
  EXPECT_EQ(candidate_pool(s.g, first, SearchStrategy::kGlobal, s.ctx).size(), s.g.num_nodes() - 1);
  auto local = candidate_pool(s.g, first, SearchStrategy::kLocal2, s.ctx);
  std::size_t expect = 0;
  for (NodeId u = 0; u < s.g.num_nodes(); ++u) {
    if (u != first && s.ctx.is_eligible(u) && s.ctx.partition[u] == s.ctx.partition[first]) ++expect;
  }
  EXPECT_EQ(local.size(), expect);
  for (NodeId u : local) {
    EXPECT_TRUE(s.ctx.is_eligible(u));
    EXPECT_EQ(s.ctx.partition[u], s.ctx.partition[first]);
  }
  NodeId role = s.ctx.roles.hubs.front();
  EXPECT_THROW(candidate_pool(s.g, role, SearchStrategy::kLocal2, s.ctx), ContractViolation);
  EXPECT_NO_THROW(candidate_pool(s.g, role, SearchStrategy::kGlobal, s.ctx));
}

TEST(Pool, Local2CommunityOfFive) {
  Graph g = cycle_graph(5);
  auto ctx = open_context(g, 2, 0.1);
  EXPECT_EQ(candidate_pool(g, 0, SearchStrategy::kLocal2, ctx).size(), 4u);
}

TEST(Pool, Local1PrefersNearRings) {
  // On a cycle every node is an exact copy; from node 4 the ring at hop 1
  // ({3, 5}) must come before hop 2 and hop 3 despite the lower ids there.
  Graph g = cycle_graph(8);
  auto t = FeatureTable::build(g);
  auto ctx = open_context(g, 2, 0.1);
  auto pool = candidate_pool(g, 4, SearchStrategy::kLocal1, ctx);
  auto order = local1_order(g, 4, pool, ctx, t, {});
  EXPECT_EQ(order, (std::vector<NodeId>{3, 5, 2, 6, 1, 7, 0}));
  auto pick = select_candidates(g, 4, pool, SearchStrategy::kLocal1, ctx, t, {}, 1);
  EXPECT_EQ(pick.nodes, (std::vector<NodeId>{3}));
  auto pick2 = select_candidates(g, 4, pool, SearchStrategy::kLocal2, ctx, t, {}, 1);
  EXPECT_EQ(pick2.nodes, (std::vector<NodeId>{0}));
}

TEST(Pool, Local1FallsBackBeyondTheta) {
  // With theta = 0 only exact copies qualify in the rings: node 1's copy 3
  // at hop 2 beats its hop-1 neighbors, and the unreachable component is
  // still appended by the fallback.
  Graph g = make_graph(8, {{0, 1}, {1, 2}, {2, 3}, {0, 3}, {0, 2}, {4, 5}, {4, 6}, {4, 7}});
  auto t = FeatureTable::build(g);
  auto ctx = open_context(g, 2, 0.0);
  auto pool = candidate_pool(g, 1, SearchStrategy::kLocal1, ctx);
  auto order = local1_order(g, 1, pool, ctx, t, {});
  EXPECT_EQ(order.front(), 3u);  // exact copy at hop 2
  EXPECT_EQ(order.size(), pool.size());
}

TEST(Clustering, MergingExample) {
  Prepared s(merging_example(), 2);
  for (Method m : {Method::kClustLocal1, Method::kClustLocal2}) {
    auto a = s.run(m);
    EXPECT_EQ(group_sizes(a), (std::vector<std::size_t>{2, 2, 3})) << method_name(m);
    EXPECT_EQ(a.provenance.excluded, (std::vector<NodeId>{0, 4}));
    EXPECT_EQ(a.published.num_nodes(), 5u);
    const double before = 2.0 * s.g.num_edges() / s.g.num_nodes();
    const double after = 2.0 * a.published.num_edges() / a.published.num_nodes();
    EXPECT_DOUBLE_EQ(before, 2.0);
    EXPECT_DOUBLE_EQ(after, 1.6);
    EXPECT_TRUE(verify_k_anonymity(a).passed);
    EXPECT_TRUE(audit_restrictions(s.g, a, s.ctx).passed);
  }
}

TEST(Clustering, TwoKIdenticalNodesSplitInHalf) {
  for (std::size_t k : {2u, 3u, 5u}) {
    Graph g = cycle_graph(2 * k);
    auto t = FeatureTable::build(g);
    auto ctx = open_context(g, k, 0.1);
    for (auto strategy : {SearchStrategy::kGlobal, SearchStrategy::kLocal1, SearchStrategy::kLocal2}) {
      auto a = anonymize_clustering(g, k, strategy, ctx, t, {});
      EXPECT_EQ(group_sizes(a), (std::vector<std::size_t>{k, k}));
    }
  }
}

TEST(Clustering, RandomGraphsAudit) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    for (std::size_t k : {2u, 4u}) {
      Prepared s(random_graph(50, 0.08, seed), k, seed);
      for (Method m : {Method::kClustGlobal, Method::kClustLocal1, Method::kClustLocal2}) {
        auto a = s.run(m);
        auto report = verify_k_anonymity(a);
        EXPECT_TRUE(report.passed) << method_name(m) << " " << (report.failures.empty() ? "" : report.failures[0]);
        EXPECT_TRUE(audit_restrictions(s.g, a, s.ctx).passed);
        std::vector<int> seen(s.g.num_nodes(), 0);
        for (const auto& sn : a.provenance.supernodes) {
          if (sn.size() > 1) {
            EXPECT_GE(sn.size(), k);
            EXPECT_LE(sn.size(), 2 * k - 1);
          }
          for (NodeId v : sn.contents) ++seen[v];
        }
        for (int x : seen) EXPECT_EQ(x, 1);
      }
    }
  }
}

TEST(Verify, UndersizedSupernodeIsReported) {
  Graph g = path_graph(6);
  auto c = contract(g, std::vector<std::vector<NodeId>>{{0, 1, 2}, {3, 4}});
  AnonymizedGraph a;
  a.published = c.graph;
  a.k = 3;
  a.provenance.kind = ProvenanceKind::kClustering;
  a.provenance.original_nodes = 6;
  a.provenance.original_labels = g.labels();
  a.provenance.supernodes = c.supernodes;
  a.provenance.groups = {{0, 1, 2}, {3, 4}};
  auto r = verify_k_anonymity(a);
  EXPECT_FALSE(r.passed);
  EXPECT_NE(std::find(r.violating.begin(), r.violating.end(), c.node_map[3]), r.violating.end());
}

TEST(Modification, AlreadyAnonymousGraphIsUnchanged) {
  Graph g = two_disjoint_triangles();
  auto t = FeatureTable::build(g);
  auto ctx = open_context(g, 3, 0.1);
  auto a = anonymize_modification(g, 3, SearchStrategy::kGlobal, ctx, t, {});
  EXPECT_EQ(a.published, g);
  EXPECT_TRUE(a.provenance.dummies.empty());
}

TEST(Modification, TwoStars) {
  Graph g = make_graph(9, {{0, 1}, {0, 2}, {0, 3}, {4, 5}, {4, 6}, {4, 7}, {4, 8}});
  auto t = FeatureTable::build(g);
  auto ctx = open_context(g, 2, 0.1);
  auto a = anonymize_modification(g, 2, SearchStrategy::kGlobal, ctx, t, {});
  EXPECT_EQ(a.published.num_nodes(), 10u);
  EXPECT_EQ(a.provenance.dummies, (std::vector<NodeId>{9}));
  EXPECT_EQ(a.published.degree(0), 4u);
  EXPECT_TRUE(a.published.has_edge(0, 9));
  EXPECT_EQ(one_hop_signature(a.published, 0), one_hop_signature(a.published, 4));
  EXPECT_TRUE(verify_k_anonymity(a).passed);
}

TEST(Modification, RandomGraphsAudit) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    for (std::size_t k : {2u, 4u}) {
      Prepared s(random_graph(50, 0.08, seed), k, seed);
      for (Method m : {Method::kModifGlobal, Method::kModifLocal2}) {
        auto a = s.run(m);
        auto report = verify_k_anonymity(a);
        EXPECT_TRUE(report.passed) << method_name(m) << " " << (report.failures.empty() ? "" : report.failures[0]);
        EXPECT_TRUE(audit_restrictions(s.g, a, s.ctx).passed);
        EXPECT_GE(a.published.num_nodes(), s.g.num_nodes());
        // Independent class audit over the population.
        std::map<OneHopSignature, std::size_t> counts;
        std::vector<char> population(a.published.num_nodes(), 0);
        for (const auto& cls : a.provenance.classes) {
          for (NodeId v : cls) population[v] = 1;
        }
        for (NodeId v = 0; v < a.published.num_nodes(); ++v) {
          if (population[v]) ++counts[one_hop_signature(a.published, v)];
        }
        for (const auto& [sig, n] : counts) EXPECT_GE(n, k);
        // Original edges survive.
        for (auto [u, v] : s.g.edges()) EXPECT_TRUE(a.published.has_edge(u, v));
      }
    }
  }
}

TEST(Restrictions, RoleNodesUntouched) {
  Prepared s(clustered_powerlaw(150, 2, 0.4, 3), 4, 2);
  std::set<NodeId> roles(s.ctx.roles.hubs.begin(), s.ctx.roles.hubs.end());
  roles.insert(s.ctx.roles.bridges.begin(), s.ctx.roles.bridges.end());
  ASSERT_FALSE(roles.empty());
  auto a = s.run(Method::kModifLocal2);
  for (NodeId r : roles) EXPECT_EQ(one_hop_signature(a.published, r), one_hop_signature(s.g, r));
  auto c = s.run(Method::kClustLocal2);
  for (const auto& sn : c.provenance.supernodes) {
    if (sn.size() == 1) continue;
    for (NodeId v : sn.contents) EXPECT_FALSE(roles.count(v));
  }
}

TEST(Determinism, SameInputsSameOutput) {
  Prepared s(clustered_powerlaw(120, 2, 0.3, 9), 4, 3);
  for (Method m : kAllMethods) {
    auto a = s.run(m);
    auto b = s.run(m);
    EXPECT_EQ(a.published, b.published);
    EXPECT_EQ(a.provenance.groups, b.provenance.groups);
  }
}
