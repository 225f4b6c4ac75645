#include <algorithm>
#include <limits>

#include "kanon/anonymize.hpp"
#include "kanon/error.hpp"

namespace kanon {
namespace {

constexpr std::size_t kNoGroup = std::numeric_limits<std::size_t>::max();

double group_distance(const FeatureTable& table, const DistanceWeights& w, NodeId v, const std::vector<NodeId>& group) {
  double best = std::numeric_limits<double>::infinity();
  for (NodeId u : group) best = std::min(best, distance(table[v], table[u], w));
  return best;
}

/// Splits a group of 2k members into two groups of k: the seed keeps its
/// k-1 nearest members, the rest form a new group.
std::vector<NodeId> split_group(std::vector<NodeId>& group, std::size_t k, const FeatureTable& table,
                                const DistanceWeights& w) {
  const NodeId seed = group.front();
  std::sort(group.begin() + 1, group.end(),
            [&](NodeId a, NodeId b) { return closer_candidate(table, seed, w, a, b); });
  std::vector<NodeId> rest(group.begin() + static_cast<std::ptrdiff_t>(k), group.end());
  group.resize(k);
  return rest;
}

}  // namespace

AnonymizedGraph anonymize_clustering(const Graph& g, std::size_t k, SearchStrategy strategy,
                                     const RestrictionContext& ctx, const FeatureTable& table,
                                     const DistanceWeights& w) {
  if (k < 2) throw ConfigError("anonymity level k must be at least 2");
  const std::size_t n = g.num_nodes();
  if (n < k) throw InfeasibleError("graph has fewer than k nodes");
  if (table.size() != n) throw ContractViolation("feature table does not match graph");
  const bool restricted = strategy != SearchStrategy::kGlobal;
  if (restricted && (ctx.eligible.size() != n || ctx.partition.assignment.size() != n)) {
    throw ContractViolation("restriction context does not match graph");
  }

  // Candidate scopes: one per community when restricted, a single one otherwise.
  const std::size_t scopes = restricted ? ctx.partition.count : 1;
  auto scope_of = [&](NodeId v) -> std::size_t { return restricted ? ctx.partition[v] : 0; };
  std::vector<std::vector<NodeId>> scope_nodes(scopes);
  std::vector<char> available(n, 0);
  for (NodeId v = 0; v < n; ++v) {
    if (restricted && !ctx.is_eligible(v)) continue;
    available[v] = 1;
    scope_nodes[scope_of(v)].push_back(v);
  }

  std::vector<std::vector<NodeId>> groups;
  std::vector<std::size_t> group_scope;
  std::vector<NodeId> pool;
  for (NodeId v = 0; v < n; ++v) {
    if (!available[v]) continue;
    pool.clear();
    for (NodeId u : scope_nodes[scope_of(v)]) {
      if (u != v && available[u]) pool.push_back(u);
    }
    if (pool.size() < k - 1) continue;
    const auto picked = select_candidates(g, v, pool, strategy, ctx, table, w, k - 1);
    std::vector<NodeId> group{v};
    group.insert(group.end(), picked.nodes.begin(), picked.nodes.end());
    for (NodeId u : group) available[u] = 0;
    groups.push_back(std::move(group));
    group_scope.push_back(scope_of(v));
  }

  // Leftovers join the nearest group of their scope; a group reaching 2k splits.
  for (NodeId v = 0; v < n; ++v) {
    if (!available[v]) continue;
    std::size_t best = kNoGroup;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      if (group_scope[gi] != scope_of(v)) continue;
      const double d = group_distance(table, w, v, groups[gi]);
      if (d < best_d || best == kNoGroup) {
        best_d = d;
        best = gi;
      }
    }
    if (best == kNoGroup) {
      throw ContractViolation("community of node " + g.label(v) + " has fewer than k = " + std::to_string(k) +
                              " eligible nodes");
    }
    groups[best].push_back(v);
    available[v] = 0;
    if (groups[best].size() == 2 * k) {
      auto rest = split_group(groups[best], k, table, w);
      groups.push_back(std::move(rest));
      group_scope.push_back(group_scope[best]);
    }
  }

  auto contraction = contract(g, groups);
  AnonymizedGraph out;
  out.published = std::move(contraction.graph);
  out.method = strategy == SearchStrategy::kGlobal   ? Method::kClustGlobal
               : strategy == SearchStrategy::kLocal1 ? Method::kClustLocal1
                                                     : Method::kClustLocal2;
  out.k = k;
  auto& prov = out.provenance;
  prov.kind = ProvenanceKind::kClustering;
  prov.original_nodes = n;
  prov.original_labels = g.labels();
  prov.supernodes = std::move(contraction.supernodes);
  for (auto& grp : groups) std::sort(grp.begin(), grp.end());
  std::sort(groups.begin(), groups.end());
  prov.groups = std::move(groups);
  if (restricted) {
    for (NodeId v = 0; v < n; ++v) {
      if (!ctx.is_eligible(v)) prov.excluded.push_back(v);
    }
  }
  return out;
}

}  // namespace kanon
