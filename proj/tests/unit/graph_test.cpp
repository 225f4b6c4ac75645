#include <gtest/gtest.h>

#include <sstream>

#include "generators.hpp"
#include "kanon/error.hpp"
#include "kanon/graph.hpp"

using namespace kanon;
using namespace kanon::testing;

namespace {

Graph parse(const std::string& text, EdgeListStats* stats = nullptr) {
  std::istringstream in(text);
  return parse_edge_list(in, stats);
}

void expect_simple_undirected(const Graph& g) {
  std::size_t total = 0;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    auto nb = g.neighbors(v);
    total += nb.size();
    for (std::size_t i = 0; i < nb.size(); ++i) {
      EXPECT_NE(nb[i], v);
      if (i > 0) {
        EXPECT_LT(nb[i - 1], nb[i]);
      }
      EXPECT_TRUE(g.has_edge(nb[i], v));
    }
  }
  EXPECT_EQ(total, 2 * g.num_edges());
}

}  // namespace

TEST(EdgeList, Triangle) {
  Graph g = parse("1 2\n2 3\n3 1\n");
  EXPECT_EQ(g.num_nodes(), 3u);
  EXPECT_EQ(g.num_edges(), 3u);
  expect_simple_undirected(g);
}

TEST(EdgeList, DuplicatesAndSelfLoops) {
  EdgeListStats stats;
  Graph g = parse("1 2\n2 1\n5 5\n", &stats);
  EXPECT_EQ(g.num_nodes(), 2u);
  EXPECT_EQ(g.num_edges(), 1u);
  EXPECT_EQ(stats.self_loops, 1u);
  EXPECT_EQ(stats.arcs, 2u);
}

TEST(EdgeList, CommentsAndBlankLines) {
  Graph g = parse("# Directed graph\n\n# FromNodeId ToNodeId\n10\t20\n20 30\n");
  EXPECT_EQ(g.num_nodes(), 3u);
  EXPECT_EQ(g.label(0), "10");
  EXPECT_EQ(g.label(2), "30");
}

TEST(EdgeList, EmptyIsLegal) {
  Graph g = parse("# nothing\n");
  EXPECT_TRUE(g.empty());
  EXPECT_EQ(g.num_edges(), 0u);
}

TEST(EdgeList, MalformedLineReportsLineNumber) {
  try {
    parse("1 2\n2 x\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse("1 2 3\n"), ParseError);
  EXPECT_THROW(parse("7\n"), ParseError);
}

TEST(EdgeList, RoundTripKeepsLabelsAndIsolatedNodes) {
  Graph g = Graph::from_edges(4, std::vector<Edge>{{0, 1}, {1, 2}}, {"70", "8", "12", "5"});
  std::stringstream buf;
  write_edge_list(g, buf);
  Graph h = parse_edge_list(buf);
  EXPECT_EQ(h.num_nodes(), 4u);
  EXPECT_EQ(h.num_edges(), 2u);
  EXPECT_EQ(fingerprint(sort_by_label(g)), fingerprint(sort_by_label(h)));
}

TEST(EdgeList, RandomRoundTrip) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Graph g = random_graph(40, 0.1, seed);
    std::stringstream buf;
    write_edge_list(g, buf);
    Graph h = sort_by_label(parse_edge_list(buf));
    EXPECT_EQ(g.edges().size(), h.edges().size());
    EXPECT_EQ(fingerprint(sort_by_label(g)), fingerprint(h));
    expect_simple_undirected(h);
  }
}

TEST(EdgeList, MissingFile) { EXPECT_THROW(load_edge_list("/nonexistent/file.txt"), IoError); }

TEST(Graph, SortByLabelNumeric) {
  Graph g = parse("10 9\n9 100\n");
  Graph s = sort_by_label(g);
  EXPECT_EQ(s.label(0), "9");
  EXPECT_EQ(s.label(1), "10");
  EXPECT_EQ(s.label(2), "100");
  EXPECT_TRUE(s.has_edge(0, 1));
  EXPECT_TRUE(s.has_edge(0, 2));
  EXPECT_FALSE(s.has_edge(1, 2));
}

TEST(Graph, FingerprintDistinguishesGraphs) {
  EXPECT_EQ(fingerprint(path_graph(5)), fingerprint(path_graph(5)));
  EXPECT_NE(fingerprint(path_graph(5)).hash, fingerprint(cycle_graph(5)).hash);
}

TEST(Neighborhood, Star) {
  Graph g = star_graph(4);
  auto s = neighborhood(g, 0);
  EXPECT_EQ(s.size(), 5u);
  EXPECT_EQ(s.edge_count(), 4u);
  for (auto e : s.external_degree) EXPECT_EQ(e, 0u);
}

TEST(Neighborhood, Isolated) {
  Graph g = make_graph(3, {{0, 1}});
  auto s = neighborhood(g, 2);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s.members[0], 2u);
  EXPECT_TRUE(s.internal_edges.empty());
}

TEST(Neighborhood, InternalExternalSplit) {
  // Reference 0 with neighbors 1, 2, 3. Node 1 is also tied to 2 inside and
  // to 4, 5 outside.
  Graph g = make_graph(6, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 4}, {1, 5}});
  auto s = neighborhood(g, 0);
  ASSERT_EQ(s.members[1], 1u);
  EXPECT_EQ(s.internal_degree[1], 2u);
  EXPECT_EQ(s.external_degree[1], 2u);
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(s.internal_degree[i] + s.external_degree[i], g.degree(s.members[i]));
    if (i > 0) {
      EXPECT_TRUE(g.has_edge(s.members[0], s.members[i]));
    }
  }
}

TEST(Neighborhood, UnknownNode) {
  Graph g = path_graph(3);
  EXPECT_THROW(neighborhood(g, 3), LookupError);
}

TEST(Neighborhood, DegreeSplitHoldsOnRandomGraphs) {
  Graph g = random_graph(60, 0.08, 11);
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    auto s = neighborhood(g, v);
    EXPECT_EQ(s.members[0], v);
    EXPECT_EQ(s.size(), g.degree(v) + 1);
    for (std::size_t i = 0; i < s.size(); ++i) {
      EXPECT_EQ(s.internal_degree[i] + s.external_degree[i], g.degree(s.members[i]));
    }
  }
}

TEST(Merge, PathEnds) {
  auto c = merge_nodes(path_graph(3), 0, 2);
  EXPECT_EQ(c.graph.num_nodes(), 2u);
  EXPECT_EQ(c.graph.num_edges(), 1u);
  EXPECT_EQ(c.supernodes[c.node_map[0]].contents, (std::vector<NodeId>{0, 2}));
}

TEST(Merge, TriangleCollapsesSharedNeighbor) {
  auto c = merge_nodes(complete_graph(3), 0, 1);
  EXPECT_EQ(c.graph.num_nodes(), 2u);
  EXPECT_EQ(c.graph.num_edges(), 1u);
}

TEST(Merge, SameNodeRejected) { EXPECT_THROW(merge_nodes(path_graph(3), 1, 1), ContractViolation); }

TEST(Contract, ContentsPartitionTheInput) {
  Graph g = random_graph(30, 0.2, 3);
  std::vector<std::vector<NodeId>> groups{{3, 7, 9}, {0, 29}, {12, 13, 14, 15}};
  auto c = contract(g, groups);
  std::vector<int> seen(g.num_nodes(), 0);
  for (std::size_t i = 0; i < c.supernodes.size(); ++i) {
    EXPECT_EQ(c.supernodes[i].id, i);
    for (NodeId v : c.supernodes[i].contents) {
      ++seen[v];
      EXPECT_EQ(c.node_map[v], i);
    }
  }
  for (int s : seen) EXPECT_EQ(s, 1);
  EXPECT_EQ(c.graph.num_nodes(), 30u - 2 - 1 - 3);
  // An edge survives exactly when it joins two different output nodes.
  for (auto [u, v] : g.edges()) {
    if (c.node_map[u] != c.node_map[v]) {
      EXPECT_TRUE(c.graph.has_edge(c.node_map[u], c.node_map[v]));
    }
  }
}
