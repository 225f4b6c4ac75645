#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kanon/community.hpp"
#include "kanon/graph.hpp"
#include "kanon/metrics.hpp"
#include "kanon/similarity.hpp"

namespace kanon {

enum class Method { kClustGlobal, kClustLocal1, kClustLocal2, kModifGlobal, kModifLocal2 };

inline constexpr Method kAllMethods[] = {Method::kClustGlobal, Method::kClustLocal1, Method::kClustLocal2,
                                         Method::kModifGlobal, Method::kModifLocal2};

std::string_view method_name(Method m);
/// Throws ConfigError for an unknown name.
Method parse_method(std::string_view name);
bool is_clustering(Method m);
bool is_restricted(Method m);

enum class SearchStrategy { kGlobal, kLocal1, kLocal2 };

SearchStrategy strategy_of(Method m);

struct ContextOptions {
  double hub_pct = 12.0;
  double bridge_pct = 10.0;
  std::size_t theta_pairs = 10000;
};

/// Everything the restricted methods need: excluded roles, a partition with
/// at least k eligible nodes per community, and the local1 threshold.
struct RestrictionContext {
  std::size_t k = 0;
  StructuralRoleSets roles;
  CommunityPartition partition;
  double theta = 0.0;          // mean distance over sampled node pairs
  std::vector<char> eligible;  // neither hub nor bridge

  bool is_eligible(NodeId v) const { return eligible[v] != 0; }
  std::size_t eligible_count() const;
};

/// Role sets, a min-size partition and theta. Throws InfeasibleError when the
/// graph cannot host groups of k eligible nodes.
RestrictionContext build_context(const Graph& g, std::size_t k, std::uint64_t seed, const FeatureTable& table,
                                 const DistanceWeights& w, const ContextOptions& options = {});

/// Nodes `v` may be grouped with, ascending. Global: every other node.
/// Local1 and local2: eligible nodes of v's community. Throws
/// ContractViolation for a restricted strategy on an excluded node.
std::vector<NodeId> candidate_pool(const Graph& g, NodeId v, SearchStrategy strategy, const RestrictionContext& ctx);

/// Local1 search order over `pool`: breadth-first rings from v inside its
/// community, each ring contributing its members within theta (nearest
/// first), followed by the rest of the pool nearest first.
std::vector<NodeId> local1_order(const Graph& g, NodeId v, std::span<const NodeId> pool, const RestrictionContext& ctx,
                                 const FeatureTable& table, const DistanceWeights& w);

/// Up to `count` partners for `v` drawn from `pool` with the given strategy.
RankedCandidates select_candidates(const Graph& g, NodeId v, std::span<const NodeId> pool, SearchStrategy strategy,
                                   const RestrictionContext& ctx, const FeatureTable& table, const DistanceWeights& w,
                                   std::size_t count);

enum class ProvenanceKind { kClustering, kModification };

/// Private side of a published graph.
///
/// Clustering: `supernodes[p]` lists the original nodes merged into published
/// node p. Modification: original node v keeps published id v, `classes`
/// holds the equivalence classes (published ids) of the anonymized
/// population and `dummies` the added nodes. `groups` are the sets of
/// original nodes perturbed together; `excluded` the untouched role nodes.
struct Provenance {
  ProvenanceKind kind = ProvenanceKind::kClustering;
  std::size_t original_nodes = 0;
  std::vector<std::string> original_labels;
  std::vector<Supernode> supernodes;
  std::vector<std::vector<NodeId>> classes;
  std::vector<std::vector<NodeId>> groups;
  std::vector<NodeId> dummies;
  std::vector<NodeId> excluded;
};

struct AnonymizedGraph {
  Graph published;
  Method method = Method::kClustGlobal;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  Provenance provenance;
};

/// Groups eligible nodes into supernodes of k..2k-1 members.
AnonymizedGraph anonymize_clustering(const Graph& g, std::size_t k, SearchStrategy strategy,
                                     const RestrictionContext& ctx, const FeatureTable& table,
                                     const DistanceWeights& w);

/// Adds dummy nodes until every node of the population shares its
/// 1-hop signature (degree plus internal degree sequence) with k-1 others.
AnonymizedGraph anonymize_modification(const Graph& g, std::size_t k, SearchStrategy strategy,
                                       const RestrictionContext& ctx, const FeatureTable& table,
                                       const DistanceWeights& w);

/// Dispatches on the method. `seed` is recorded in the result.
AnonymizedGraph anonymize(const Graph& g, Method method, std::size_t k, const RestrictionContext& ctx,
                          const FeatureTable& table, const DistanceWeights& w, std::uint64_t seed = 0);

/// 1-hop signature used by the modification equality test: the degree and the
/// sorted internal degrees of the neighbors inside the 1-hop subgraph.
struct OneHopSignature {
  std::uint32_t degree = 0;
  std::vector<std::uint32_t> neighbor_internal;  // sorted; each is 1 + common neighbors

  auto operator<=>(const OneHopSignature&) const = default;
};

OneHopSignature one_hop_signature(const Graph& g, NodeId v);

struct AuditReport {
  bool passed = true;
  std::vector<std::string> failures;
  std::vector<NodeId> violating;  // original or published ids as described in the failure text

  void fail(std::string message, std::vector<NodeId> nodes = {});
};

/// Checks the provenance invariants (supernode sizes, class sizes and
/// signatures) and that every anonymized node's H1 candidate set has at
/// least k members.
AuditReport verify_k_anonymity(const AnonymizedGraph& a);

/// Restricted methods only: no role node perturbed or merged, no group
/// spanning two communities. Always passes for global methods.
AuditReport audit_restrictions(const Graph& original, const AnonymizedGraph& a, const RestrictionContext& ctx);

}  // namespace kanon
