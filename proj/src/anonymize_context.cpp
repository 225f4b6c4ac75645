#include <algorithm>
#include <queue>
#include <random>

#include "kanon/anonymize.hpp"
#include "kanon/error.hpp"

namespace kanon {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::kClustGlobal: return "clust_g";
    case Method::kClustLocal1: return "clust_r_l1";
    case Method::kClustLocal2: return "clust_r_l2";
    case Method::kModifGlobal: return "modif_g";
    case Method::kModifLocal2: return "modif_r_l2";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  for (Method m : kAllMethods) {
    if (method_name(m) == name) return m;
  }
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

bool is_clustering(Method m) {
  return m == Method::kClustGlobal || m == Method::kClustLocal1 || m == Method::kClustLocal2;
}

bool is_restricted(Method m) { return m != Method::kClustGlobal && m != Method::kModifGlobal; }

SearchStrategy strategy_of(Method m) {
  switch (m) {
    case Method::kClustLocal1: return SearchStrategy::kLocal1;
    case Method::kClustLocal2:
    case Method::kModifLocal2: return SearchStrategy::kLocal2;
    default: return SearchStrategy::kGlobal;
  }
}

std::size_t RestrictionContext::eligible_count() const {
  return static_cast<std::size_t>(std::count(eligible.begin(), eligible.end(), 1));
}

RestrictionContext build_context(const Graph& g, std::size_t k, std::uint64_t seed, const FeatureTable& table,
                                 const DistanceWeights& w, const ContextOptions& options) {
  if (k < 2) throw ConfigError("anonymity level k must be at least 2");
  const std::size_t n = g.num_nodes();
  if (n < k) {
    throw InfeasibleError("graph has " + std::to_string(n) + " nodes, fewer than k = " + std::to_string(k));
  }
  if (table.size() != n) throw ContractViolation("feature table does not match graph");

  RestrictionContext ctx;
  ctx.k = k;
  const auto hub = hits_hub_scores(g).hub;
  const auto bridge = bridging_centrality(g);
  ctx.roles = role_sets(hub, bridge, options.hub_pct, options.bridge_pct);
  ctx.eligible.assign(n, 1);
  for (NodeId v : ctx.roles.hubs) ctx.eligible[v] = 0;
  for (NodeId v : ctx.roles.bridges) ctx.eligible[v] = 0;
  ctx.partition = partition_with_min_size(g, k, seed, ctx.eligible);

  const std::uint64_t all_pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  double sum = 0.0;
  std::uint64_t pairs = 0;
  if (all_pairs <= options.theta_pairs) {
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = u + 1; v < n; ++v) sum += distance(table[u], table[v], w);
    }
    pairs = all_pairs;
  } else {
    std::mt19937_64 rng(seed ^ 0xd1b54a32d192ed03ULL);
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
    while (pairs < options.theta_pairs) {
      const NodeId u = pick(rng);
      const NodeId v = pick(rng);
      if (u == v) continue;
      sum += distance(table[u], table[v], w);
      ++pairs;
    }
  }
  ctx.theta = pairs == 0 ? 0.0 : sum / static_cast<double>(pairs);
  return ctx;
}

std::vector<NodeId> candidate_pool(const Graph& g, NodeId v, SearchStrategy strategy, const RestrictionContext& ctx) {
  g.require_node(v);
  std::vector<NodeId> pool;
  if (strategy == SearchStrategy::kGlobal) {
    pool.reserve(g.num_nodes() - 1);
    for (NodeId u = 0; u < g.num_nodes(); ++u) {
      if (u != v) pool.push_back(u);
    }
    return pool;
  }
  if (!ctx.is_eligible(v)) {
    throw ContractViolation("node " + g.label(v) + " is a hub or bridge and cannot be anonymized under restrictions");
  }
  const CommunityId c = ctx.partition[v];
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    if (u != v && ctx.is_eligible(u) && ctx.partition[u] == c) pool.push_back(u);
  }
  return pool;
}

std::vector<NodeId> local1_order(const Graph& g, NodeId v, std::span<const NodeId> pool, const RestrictionContext& ctx,
                                 const FeatureTable& table, const DistanceWeights& w) {
  const std::size_t n = g.num_nodes();
  std::vector<char> in_pool(n, 0);
  for (NodeId u : pool) in_pool[u] = 1;
  const CommunityId c = ctx.partition[v];
  auto closer = [&](NodeId a, NodeId b) { return closer_candidate(table, v, w, a, b); };

  std::vector<NodeId> order;
  order.reserve(pool.size());
  std::vector<char> seen(n, 0);
  std::vector<char> taken(n, 0);
  std::vector<NodeId> ring{v};
  seen[v] = 1;
  while (!ring.empty()) {
    std::vector<NodeId> next;
    for (NodeId x : ring) {
      for (NodeId y : g.neighbors(x)) {
        if (!seen[y] && ctx.partition[y] == c) {
          seen[y] = 1;
          next.push_back(y);
        }
      }
    }
    std::vector<NodeId> accepted;
    for (NodeId y : next) {
      if (in_pool[y] && distance(table[v], table[y], w) <= ctx.theta) accepted.push_back(y);
    }
    std::sort(accepted.begin(), accepted.end(), closer);
    for (NodeId y : accepted) {
      taken[y] = 1;
      order.push_back(y);
    }
    ring = std::move(next);
  }
  std::vector<NodeId> rest;
  for (NodeId u : pool) {
    if (!taken[u]) rest.push_back(u);
  }
  std::sort(rest.begin(), rest.end(), closer);
  order.insert(order.end(), rest.begin(), rest.end());
  return order;
}

RankedCandidates select_candidates(const Graph& g, NodeId v, std::span<const NodeId> pool, SearchStrategy strategy,
                                   const RestrictionContext& ctx, const FeatureTable& table, const DistanceWeights& w,
                                   std::size_t count) {
  if (strategy != SearchStrategy::kLocal1) return rank_candidates(table, v, pool, w, count);
  auto order = local1_order(g, v, pool, ctx, table, w);
  RankedCandidates out;
  out.shortfall = order.size() < count;
  order.resize(std::min(order.size(), count));
  out.nodes = std::move(order);
  return out;
}

AnonymizedGraph anonymize(const Graph& g, Method method, std::size_t k, const RestrictionContext& ctx,
                          const FeatureTable& table, const DistanceWeights& w, std::uint64_t seed) {
  AnonymizedGraph out = is_clustering(method)
                            ? anonymize_clustering(g, k, strategy_of(method), ctx, table, w)
                            : anonymize_modification(g, k, strategy_of(method), ctx, table, w);
  out.method = method;
  out.seed = seed;
  return out;
}

void AuditReport::fail(std::string message, std::vector<NodeId> nodes) {
  passed = false;
  failures.push_back(std::move(message));
  violating.insert(violating.end(), nodes.begin(), nodes.end());
}

}  // namespace kanon
