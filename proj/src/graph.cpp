#include "kanon/graph.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <numeric>

#include "kanon/error.hpp"

namespace kanon {

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges, std::vector<std::string> labels) {
  if (n > std::numeric_limits<NodeId>::max()) {
    throw ContractViolation("graph too large for 32-bit node ids");
  }
  if (!labels.empty() && labels.size() != n) {
    throw ContractViolation("label count " + std::to_string(labels.size()) +
                            " does not match node count " + std::to_string(n));
  }
  std::vector<Edge> arcs;
  arcs.reserve(edges.size() * 2);
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) {
      throw LookupError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                        ") references a node outside 0.." + std::to_string(n));
    }
    if (u == v) continue;
    arcs.emplace_back(u, v);
    arcs.emplace_back(v, u);
  }
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

  Graph g;
  g.offsets_.assign(n + 1, 0);
  for (const auto& a : arcs) ++g.offsets_[a.first + 1];
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
  g.targets_.reserve(arcs.size());
  for (const auto& a : arcs) g.targets_.push_back(a.second);

  if (labels.empty()) {
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  }
  g.labels_ = std::move(labels);
  return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  auto adj = neighbors(u);
  return std::binary_search(adj.begin(), adj.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (NodeId u = 0; u < num_nodes(); ++u) {
    for (NodeId v : neighbors(u)) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

void Graph::require_node(NodeId v) const {
  if (v >= num_nodes()) {
    throw LookupError("unknown node id " + std::to_string(v) + " (graph has " +
                      std::to_string(num_nodes()) + " nodes)");
  }
}

GraphFingerprint fingerprint(const Graph& g) {
  // FNV-1a over the node count and the canonical edge list.
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t x) {
    for (int i = 0; i < 8; ++i) {
      h ^= (x >> (8 * i)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  mix(g.num_nodes());
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    for (NodeId v : g.neighbors(u)) {
      if (u < v) mix((static_cast<std::uint64_t>(u) << 32) | v);
    }
  }
  return {g.num_nodes(), g.num_edges(), h};
}

NeighborhoodSubgraph neighborhood(const Graph& g, NodeId v) {
  g.require_node(v);
  NeighborhoodSubgraph sub;
  sub.reference = v;
  auto adj = g.neighbors(v);
  sub.members.reserve(adj.size() + 1);
  sub.members.push_back(v);
  sub.members.insert(sub.members.end(), adj.begin(), adj.end());

  const std::size_t n = sub.members.size();
  sub.internal_degree.assign(n, 0);
  sub.external_degree.assign(n, 0);

  // Local index of a host node, or -1 when it is not a member.
  auto local = [&](NodeId x) -> std::int64_t {
    if (x == v) return 0;
    auto it = std::lower_bound(adj.begin(), adj.end(), x);
    if (it == adj.end() || *it != x) return -1;
    return 1 + (it - adj.begin());
  };

  for (std::uint32_t i = 0; i < n; ++i) {
    const NodeId m = sub.members[i];
    for (NodeId x : g.neighbors(m)) {
      const auto j = local(x);
      if (j < 0) {
        ++sub.external_degree[i];
        continue;
      }
      ++sub.internal_degree[i];
      if (static_cast<std::uint32_t>(j) > i) sub.internal_edges.emplace_back(i, static_cast<std::uint32_t>(j));
    }
  }
  return sub;
}

Contraction contract(const Graph& g, std::span<const std::vector<NodeId>> groups) {
  const std::size_t n = g.num_nodes();
  constexpr NodeId kNone = std::numeric_limits<NodeId>::max();
  std::vector<NodeId> group_of(n, kNone);
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    if (groups[gi].empty()) throw ContractViolation("empty group in contraction");
    for (NodeId v : groups[gi]) {
      g.require_node(v);
      if (group_of[v] != kNone) {
        throw ContractViolation("node " + std::to_string(v) + " appears in two groups");
      }
      group_of[v] = static_cast<NodeId>(gi);
    }
  }

  std::vector<std::vector<NodeId>> units;
  units.reserve(n);
  for (const auto& grp : groups) {
    auto sorted = grp;
    std::sort(sorted.begin(), sorted.end());
    units.push_back(std::move(sorted));
  }
  for (NodeId v = 0; v < n; ++v) {
    if (group_of[v] == kNone) units.push_back({v});
  }
  std::sort(units.begin(), units.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });

  Contraction out;
  out.node_map.assign(n, kNone);
  out.supernodes.reserve(units.size());
  for (NodeId id = 0; id < units.size(); ++id) {
    for (NodeId v : units[id]) out.node_map[v] = id;
    out.supernodes.push_back({id, std::move(units[id])});
  }

  std::vector<Edge> edges;
  edges.reserve(g.num_edges());
  for (auto [u, v] : g.edges()) {
    const NodeId a = out.node_map[u];
    const NodeId b = out.node_map[v];
    if (a != b) edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  out.graph = Graph::from_edges(out.supernodes.size(), edges);
  return out;
}

Graph sort_by_label(const Graph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<long long> numeric(n);
  bool all_numeric = true;
  for (NodeId v = 0; v < n && all_numeric; ++v) {
    const auto& s = g.label(v);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), numeric[v]);
    all_numeric = res.ec == std::errc() && res.ptr == s.data() + s.size();
  }
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), 0U);
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    return all_numeric ? numeric[a] < numeric[b] : g.label(a) < g.label(b);
  });
  std::vector<NodeId> new_id(n);
  std::vector<std::string> labels(n);
  for (NodeId i = 0; i < n; ++i) {
    new_id[order[i]] = i;
    labels[i] = g.label(order[i]);
  }
  std::vector<Edge> edges;
  edges.reserve(g.num_edges());
  for (auto [u, v] : g.edges()) edges.emplace_back(new_id[u], new_id[v]);
  return Graph::from_edges(n, edges, std::move(labels));
}

Contraction merge_nodes(const Graph& g, NodeId a, NodeId b) {
  g.require_node(a);
  g.require_node(b);
  if (a == b) throw ContractViolation("cannot merge node " + std::to_string(a) + " with itself");
  const std::vector<std::vector<NodeId>> groups{{a, b}};
  return contract(g, groups);
}

}  // namespace kanon
