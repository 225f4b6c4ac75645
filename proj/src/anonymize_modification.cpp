#include <algorithm>
#include <limits>
#include <map>
#include <numeric>

#include "kanon/anonymize.hpp"
#include "kanon/error.hpp"

namespace kanon {

OneHopSignature one_hop_signature(const Graph& g, NodeId v) {
  g.require_node(v);
  OneHopSignature sig;
  const auto adj = g.neighbors(v);
  sig.degree = static_cast<std::uint32_t>(adj.size());
  sig.neighbor_internal.reserve(adj.size());
  for (NodeId u : adj) {
    // Sorted-list intersection of N(u) and N(v).
    const auto nu = g.neighbors(u);
    std::uint32_t common = 0;
    auto a = nu.begin();
    auto b = adj.begin();
    while (a != nu.end() && b != adj.end()) {
      if (*a < *b) {
        ++a;
      } else if (*b < *a) {
        ++b;
      } else {
        ++common;
        ++a;
        ++b;
      }
    }
    sig.neighbor_internal.push_back(1 + common);
  }
  std::sort(sig.neighbor_internal.begin(), sig.neighbor_internal.end());
  return sig;
}

namespace {

using Multiset = std::vector<std::uint32_t>;  // sorted ascending

Multiset max_union(const Multiset& a, const Multiset& b) {
  Multiset out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Multiset difference(const Multiset& a, const Multiset& b) {
  Multiset out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

/// Erdos-Gallai test.
bool graphical(std::vector<std::uint32_t> d) {
  std::sort(d.begin(), d.end(), std::greater<>());
  std::uint64_t total = std::accumulate(d.begin(), d.end(), std::uint64_t{0});
  if (total % 2 != 0) return false;
  std::uint64_t left = 0;
  const std::size_t n = d.size();
  for (std::size_t r = 1; r <= n; ++r) {
    left += d[r - 1];
    std::uint64_t right = static_cast<std::uint64_t>(r) * (r - 1);
    for (std::size_t i = r; i < n; ++i) right += std::min<std::uint64_t>(d[i], r);
    if (left > right) return false;
  }
  return true;
}

/// Dummy-to-dummy degrees needed to lift `real` to `target`: a dummy whose
/// internal degree is x shares x-1 neighbors with the reference, all dummies.
std::vector<std::uint32_t> gadget_degrees(const Multiset& target, const Multiset& real) {
  std::vector<std::uint32_t> d;
  for (auto x : difference(target, real)) d.push_back(x - 1);
  return d;
}

/// Smallest common target over the members' real parts for which every
/// member's gadget is realizable. Dummy-to-dummy degree sums have the same
/// parity for all members (the real parts contribute twice the number of
/// edges among neighbors), so one parity fix serves all; pairs of leaves
/// then make every sequence graphical eventually.
Multiset make_target(const std::vector<NodeId>& members, const std::vector<Multiset>& real) {
  Multiset t;
  for (NodeId m : members) t = max_union(t, real[m]);
  std::uint64_t parity = 0;
  for (auto x : t) parity += x - 1;
  auto add = [&t](std::uint32_t x) { t.insert(std::upper_bound(t.begin(), t.end(), x), x); };
  if (parity % 2 != 0) add(2);
  while (!std::all_of(members.begin(), members.end(),
                      [&](NodeId m) { return graphical(gadget_degrees(t, real[m])); })) {
    add(2);
    add(2);
  }
  return t;
}

/// Havel-Hakimi realization; returns local index pairs.
std::vector<std::pair<std::size_t, std::size_t>> realize(std::vector<std::uint32_t> d) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::size_t> idx(d.size());
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return d[a] > d[b]; });
    if (idx.empty() || d[idx[0]] == 0) break;
    const std::size_t head = idx[0];
    const std::uint32_t need = d[head];
    d[head] = 0;
    for (std::uint32_t j = 1; j <= need; ++j) {
      if (j >= idx.size() || d[idx[j]] == 0) throw ContractViolation("degree sequence is not graphical");
      --d[idx[j]];
      edges.emplace_back(std::min(head, idx[j]), std::max(head, idx[j]));
    }
  }
  return edges;
}

struct ModGroup {
  std::vector<NodeId> members;
  std::size_t scope = 0;
  Multiset target;
};

class Modifier {
 public:
  Modifier(const Graph& g, std::size_t k, SearchStrategy strategy, const RestrictionContext& ctx,
           const FeatureTable& table, const DistanceWeights& w)
      : g_(g), k_(k), restricted_(strategy != SearchStrategy::kGlobal), ctx_(ctx), table_(table), w_(w) {
    const std::size_t n = g.num_nodes();
    population_.assign(n, 0);
    real_.resize(n);
    sig_id_.assign(n, 0);
    processed_.assign(n, 0);
    for (NodeId v = 0; v < n; ++v) {
      population_[v] = restricted_ ? ctx.eligible[v] : 1;
      const auto sig = one_hop_signature(g, v);
      real_[v] = sig.neighbor_internal;
      if (population_[v]) {
        sig_id_[v] = intern(sig);
        ++count_[sig_id_[v]];
      }
    }
  }

  void run() {
    const std::size_t n = g_.num_nodes();
    std::vector<NodeId> order;
    for (NodeId v = 0; v < n; ++v) {
      if (population_[v]) order.push_back(v);
    }
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return g_.degree(a) > g_.degree(b); });

    while (true) {
      for (NodeId s : order) {
        if (processed_[s] || satisfied(s)) continue;
        std::vector<NodeId> pool;
        for (NodeId u = 0; u < n; ++u) {
          if (u != s && open(u) && scope(u) == scope(s)) pool.push_back(u);
        }
        if (pool.size() < k_ - 1) continue;
        auto picked = rank_candidates(table_, s, pool, w_, k_ - 1);
        std::vector<NodeId> members{s};
        members.insert(members.end(), picked.nodes.begin(), picked.nodes.end());
        new_group(std::move(members), scope(s));
      }

      std::vector<NodeId> leftovers;
      for (NodeId v = 0; v < n; ++v) {
        if (open(v)) leftovers.push_back(v);
      }
      if (leftovers.empty()) break;
      for (NodeId v : leftovers) {
        if (open(v)) absorb(v);
      }
    }
  }

  AnonymizedGraph finish() {
    const std::size_t n = g_.num_nodes();
    std::vector<Edge> edges = g_.edges();
    NodeId next = static_cast<NodeId>(n);
    std::vector<NodeId> dummies;
    for (const auto& grp : groups_) {
      for (NodeId c : grp.members) {
        const auto degrees = gadget_degrees(grp.target, real_[c]);
        const NodeId base = next;
        for (std::size_t i = 0; i < degrees.size(); ++i) {
          dummies.push_back(next);
          edges.emplace_back(c, next++);
        }
        for (auto [a, b] : realize(degrees)) {
          edges.emplace_back(base + static_cast<NodeId>(a), base + static_cast<NodeId>(b));
        }
      }
    }

    AnonymizedGraph out;
    out.published = Graph::from_edges(next, edges);
    out.method = restricted_ ? Method::kModifLocal2 : Method::kModifGlobal;
    out.k = k_;
    auto& prov = out.provenance;
    prov.kind = ProvenanceKind::kModification;
    prov.original_nodes = n;
    prov.original_labels = g_.labels();
    prov.dummies = std::move(dummies);
    std::map<std::size_t, std::vector<NodeId>> by_sig;
    for (NodeId v = 0; v < n; ++v) {
      if (population_[v]) {
        by_sig[sig_id_[v]].push_back(v);
      } else {
        prov.excluded.push_back(v);
      }
    }
    for (auto& [id, members] : by_sig) prov.classes.push_back(std::move(members));
    std::sort(prov.classes.begin(), prov.classes.end());
    for (auto& grp : groups_) {
      std::sort(grp.members.begin(), grp.members.end());
      prov.groups.push_back(grp.members);
    }
    return out;
  }

 private:
  std::size_t intern(const OneHopSignature& sig) {
    auto [it, inserted] = ids_.try_emplace(sig, ids_.size());
    if (inserted) count_.push_back(0);
    return it->second;
  }

  std::size_t scope(NodeId v) const { return restricted_ ? ctx_.partition[v] : 0; }
  bool satisfied(NodeId v) const { return count_[sig_id_[v]] >= k_; }
  bool open(NodeId v) const { return population_[v] && !processed_[v] && !satisfied(v); }

  void retarget(std::size_t gi) {
    auto& grp = groups_[gi];
    grp.target = make_target(grp.members, real_);
    OneHopSignature sig{static_cast<std::uint32_t>(grp.target.size()), grp.target};
    const std::size_t id = intern(sig);
    for (NodeId m : grp.members) {
      --count_[sig_id_[m]];
      sig_id_[m] = id;
      ++count_[id];
    }
  }

  void new_group(std::vector<NodeId> members, std::size_t sc) {
    for (NodeId m : members) processed_[m] = 1;
    groups_.push_back({std::move(members), sc, {}});
    retarget(groups_.size() - 1);
  }

  double nearest(NodeId v, const std::vector<NodeId>& members) const {
    double best = std::numeric_limits<double>::infinity();
    for (NodeId u : members) best = std::min(best, distance(table_[v], table_[u], w_));
    return best;
  }

  /// Leftover node whose scope cannot supply k-1 open partners.
  void absorb(NodeId v) {
    const std::size_t sc = scope(v);
    // Join the nearest group of the scope.
    std::size_t best = groups_.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t gi = 0; gi < groups_.size(); ++gi) {
      if (groups_[gi].scope != sc) continue;
      const double d = nearest(v, groups_[gi].members);
      if (best == groups_.size() || d < best_d) {
        best = gi;
        best_d = d;
      }
    }
    if (best < groups_.size()) {
      processed_[v] = 1;
      groups_[best].members.push_back(v);
      retarget(best);
      return;
    }

    std::vector<NodeId> members;
    const std::size_t n = g_.num_nodes();
    for (NodeId u = 0; u < n; ++u) {
      if (open(u) && scope(u) == sc) members.push_back(u);
    }
    // Borrow surplus members of satisfied classes without breaking them.
    std::vector<NodeId> donors;
    for (NodeId u = 0; u < n; ++u) {
      if (population_[u] && !processed_[u] && satisfied(u) && scope(u) == sc && count_[sig_id_[u]] > k_) {
        donors.push_back(u);
      }
    }
    std::sort(donors.begin(), donors.end(), [&](NodeId a, NodeId b) { return closer_candidate(table_, v, w_, a, b); });
    std::map<std::size_t, std::size_t> spare;
    std::vector<NodeId> borrowed;
    for (NodeId u : donors) {
      if (members.size() + borrowed.size() >= k_) break;
      auto [it, inserted] = spare.try_emplace(sig_id_[u], count_[sig_id_[u]] - k_);
      if (it->second == 0) continue;
      --it->second;
      borrowed.push_back(u);
    }
    if (members.size() + borrowed.size() < k_) {
      // No group and not enough surplus: take every unprocessed node of the
      // scope. Classes losing members are revisited by the next pass.
      borrowed.clear();
      for (NodeId u = 0; u < n; ++u) {
        if (population_[u] && !processed_[u] && satisfied(u) && scope(u) == sc) borrowed.push_back(u);
      }
    }
    members.insert(members.end(), borrowed.begin(), borrowed.end());
    if (members.size() < k_) {
      throw ContractViolation("scope of node " + g_.label(v) + " has fewer than k = " + std::to_string(k_) +
                              " nodes to anonymize");
    }
    std::sort(members.begin(), members.end());
    new_group(std::move(members), sc);
  }

  const Graph& g_;
  std::size_t k_;
  bool restricted_;
  const RestrictionContext& ctx_;
  const FeatureTable& table_;
  const DistanceWeights& w_;
  std::vector<char> population_;
  std::vector<Multiset> real_;
  std::map<OneHopSignature, std::size_t> ids_;
  std::vector<std::size_t> count_;
  std::vector<std::size_t> sig_id_;
  std::vector<char> processed_;
  std::vector<ModGroup> groups_;
};

}  // namespace

AnonymizedGraph anonymize_modification(const Graph& g, std::size_t k, SearchStrategy strategy,
                                       const RestrictionContext& ctx, const FeatureTable& table,
                                       const DistanceWeights& w) {
  if (k < 2) throw ConfigError("anonymity level k must be at least 2");
  if (strategy == SearchStrategy::kLocal1) throw ConfigError("modification supports the global and local2 searches only");
  const std::size_t n = g.num_nodes();
  if (n < k) throw InfeasibleError("graph has fewer than k nodes");
  if (table.size() != n) throw ContractViolation("feature table does not match graph");
  if (strategy != SearchStrategy::kGlobal && (ctx.eligible.size() != n || ctx.partition.assignment.size() != n)) {
    throw ContractViolation("restriction context does not match graph");
  }
  Modifier m(g, k, strategy, ctx, table, w);
  m.run();
  return m.finish();
}

}  // namespace kanon
