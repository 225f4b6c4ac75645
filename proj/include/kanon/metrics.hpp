#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "kanon/graph.hpp"

namespace kanon {

enum class MetricId { kDegree, kClustering, kPathLength, kHub, kBridge };

std::string_view metric_name(MetricId id);

struct NodeMetricVector {
  MetricId metric = MetricId::kDegree;
  std::vector<double> values;
};

double clustering_coefficient(const Graph& g, NodeId v);

struct PathStatistics {
  double average_path_length = 0.0;  // over reachable ordered pairs
  std::uint32_t diameter = 0;        // largest finite distance
  std::uint64_t reachable_pairs = 0;
  std::vector<double> per_node;      // mean distance from each node to the nodes it reaches
};

/// All-pairs BFS. Unreachable pairs are left out of the mean. Throws
/// UndefinedMetric when the graph has fewer than two nodes.
PathStatistics path_statistics(const Graph& g);
double average_path_length(const Graph& g);

struct HitsResult {
  std::vector<double> hub;  // L2-normalized
  bool converged = false;
  int iterations = 0;
};

/// HITS hub scores. On a symmetric adjacency the hub and authority vectors
/// coincide with the principal eigenvector of A; the iteration is run on
/// A + I so that bipartite components converge instead of oscillating.
/// Isolated nodes score 0. Returns the last iterate with converged = false
/// when `max_iter` is reached.
HitsResult hits_hub_scores(const Graph& g, double tol = 1e-8, int max_iter = 200);

/// Betweenness normalized by (n-1)(n-2)/2; raw pair counts when !normalized.
std::vector<double> betweenness_centrality(const Graph& g, bool normalized = true);

/// (1/deg v) / sum over neighbors i of (1/deg i); 0 for isolated nodes.
std::vector<double> bridging_coefficient(const Graph& g);

/// Betweenness times bridging coefficient.
std::vector<double> bridging_centrality(const Graph& g);

struct StructuralRoleSets {
  std::vector<NodeId> hubs;     // sorted
  std::vector<NodeId> bridges;  // sorted
  double hub_threshold = 0.0;
  double bridge_threshold = 0.0;

  bool is_hub(NodeId v) const;
  bool is_bridge(NodeId v) const;
};

/// Nodes in the top `pct` percent of `scores`: the cut is the value of the
/// m-th largest score, m = max(1, floor(pct * n / 100)), and every node at or
/// above it is selected (ties included). A zero score never qualifies.
std::vector<NodeId> top_percentile(std::span<const double> scores, double pct, double* threshold = nullptr);

/// Throws ConfigError when a percentile is outside (0, 100).
StructuralRoleSets role_sets(std::span<const double> hub_scores, std::span<const double> bridge_scores,
                             double hub_pct = 12.0, double bridge_pct = 10.0);

/// The five per-node metric vectors used for information loss.
struct NodeMetrics {
  NodeMetricVector degree{MetricId::kDegree, {}};
  NodeMetricVector clustering{MetricId::kClustering, {}};
  NodeMetricVector path_length{MetricId::kPathLength, {}};
  NodeMetricVector hub{MetricId::kHub, {}};
  NodeMetricVector bridge{MetricId::kBridge, {}};

  const NodeMetricVector& get(MetricId id) const;
};

NodeMetrics compute_node_metrics(const Graph& g);

/// CSV `node_id,degree,cc,hub,bridge`, node_id being the graph label.
void write_metrics_csv(const Graph& g, const NodeMetrics& m, std::ostream& out);

}  // namespace kanon
