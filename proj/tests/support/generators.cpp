#include "generators.hpp"

#include <random>

namespace kanon::testing {

Graph make_graph(std::size_t n, const std::vector<Edge>& edges) { return Graph::from_edges(n, edges); }

Graph path_graph(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId v = 1; v < n; ++v) e.emplace_back(v - 1, v);
  return make_graph(n, e);
}

Graph cycle_graph(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId v = 0; v < n; ++v) e.emplace_back(v, static_cast<NodeId>((v + 1) % n));
  return make_graph(n, e);
}

Graph star_graph(std::size_t leaves) {
  std::vector<Edge> e;
  for (NodeId v = 1; v <= leaves; ++v) e.emplace_back(0, v);
  return make_graph(leaves + 1, e);
}

Graph complete_graph(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) e.emplace_back(u, v);
  }
  return make_graph(n, e);
}

Graph two_triangles_bridged() { return make_graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}}); }

Graph two_disjoint_triangles() { return make_graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}}); }

Graph barbell_graph() {
  return make_graph(7, {{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {4, 6}});
}

Graph random_graph(std::size_t n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::vector<Edge> e;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (coin(rng)) e.emplace_back(u, v);
    }
  }
  return make_graph(n, e);
}

Graph clustered_powerlaw(std::size_t n, std::size_t m, double q, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::vector<NodeId>> adj(n);
  std::vector<NodeId> ends;
  std::vector<Edge> edges;
  auto link = [&](NodeId a, NodeId b) {
    if (a == b) return false;
    for (NodeId x : adj[a]) {
      if (x == b) return false;
    }
    adj[a].push_back(b);
    adj[b].push_back(a);
    ends.push_back(a);
    ends.push_back(b);
    edges.emplace_back(a, b);
    return true;
  };
  const auto seed_nodes = static_cast<NodeId>(std::min(n, m + 1));
  for (NodeId v = 1; v < seed_nodes; ++v) link(v - 1, v);
  for (NodeId v = seed_nodes; v < n; ++v) {
    NodeId last = 0;
    bool have_last = false;
    for (std::size_t j = 0; j < m; ++j) {
      bool done = false;
      if (have_last && unit(rng) < q && !adj[last].empty()) {
        std::uniform_int_distribution<std::size_t> pick(0, adj[last].size() - 1);
        done = link(v, adj[last][pick(rng)]);
      }
      for (int tries = 0; !done && tries < 20; ++tries) {
        std::uniform_int_distribution<std::size_t> pick(0, ends.size() - 1);
        const NodeId u = ends[pick(rng)];
        done = link(v, u);
        if (done) {
          last = u;
          have_last = true;
        }
      }
    }
  }
  return make_graph(n, edges);
}

Graph planted_partition(std::size_t blocks, std::size_t size, double p_in, double p_out, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t n = blocks * size;
  std::vector<Edge> e;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      const double p = (u / size == v / size) ? p_in : p_out;
      if (unit(rng) < p) e.emplace_back(u, v);
    }
  }
  return make_graph(n, e);
}

Graph merging_example() {
  return make_graph(9, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {0, 4}, {4, 5}, {5, 6}, {5, 7}, {7, 8}});
}

}  // namespace kanon::testing
