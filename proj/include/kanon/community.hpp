#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "kanon/graph.hpp"

namespace kanon {

using CommunityId = std::uint32_t;

/// Total function node -> community. Community ids are dense and numbered by
/// first appearance in node order.
struct CommunityPartition {
  std::vector<CommunityId> assignment;
  std::uint32_t count = 0;
  double resolution = 1.0;
  std::size_t min_size = 0;  // nodes in the smallest community

  // Diagnostics from partition_with_min_size.
  int resolution_steps = 0;
  std::size_t fallback_merges = 0;

  CommunityId operator[](NodeId v) const { return assignment[v]; }
  std::vector<std::vector<NodeId>> members() const;
};

/// Rebuilds count/min_size and renumbers ids by first appearance.
CommunityPartition make_partition(std::vector<CommunityId> assignment, double resolution = 1.0);

/// Modularity with the resolution convention used by louvain():
/// Q = sum_c [ r * L_c / m - (tot_c / 2m)^2 ].
double modularity(const Graph& g, std::span<const CommunityId> assignment, double resolution = 1.0);

/// Louvain local-move + aggregation. `resolution` > 1 favors larger
/// communities. Node visit order is shuffled from `seed`, so the result is
/// deterministic for a given seed. Throws ConfigError when resolution <= 0.
CommunityPartition louvain(const Graph& g, double resolution = 1.0, std::uint64_t seed = 0);

/// Partition in which every community holds at least `k` eligible nodes.
///
/// Louvain is rerun with the resolution raised geometrically (x1.5 from 1.0,
/// at most 20 runs); if that is not enough, each undersized community is
/// merged into the community it shares the most edges with. An empty
/// `eligible` mask means every node is eligible. When no node is eligible the
/// resolution-1 partition is returned unchanged. Throws InfeasibleError when
/// the graph has fewer than k nodes or fewer than k eligible nodes.
CommunityPartition partition_with_min_size(const Graph& g, std::size_t k, std::uint64_t seed,
                                           std::span<const char> eligible = {});

inline constexpr double kResolutionGrowth = 1.5;
inline constexpr int kMaxResolutionSteps = 20;

/// CSV `node_id,community_id`, node_id being the graph label.
void write_partition_csv(const Graph& g, const CommunityPartition& p, std::ostream& out);

/// Reads a partition written by write_partition_csv for graph `g`.
CommunityPartition read_partition_csv(const Graph& g, std::istream& in);

}  // namespace kanon
