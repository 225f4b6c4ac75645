#include "kanon/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "kanon/error.hpp"
#include "kanon/kernels.hpp"
#include "kernels_detail.hpp"

namespace kanon {

std::string_view metric_name(MetricId id) {
  switch (id) {
    case MetricId::kDegree: return "degree";
    case MetricId::kClustering: return "cc";
    case MetricId::kPathLength: return "apl";
    case MetricId::kHub: return "hub";
    case MetricId::kBridge: return "bridge";
  }
  return "?";
}

double clustering_coefficient(const Graph& g, NodeId v) {
  g.require_node(v);
  return kernels::detail::local_clustering(g, v);
}

PathStatistics path_statistics(const Graph& g) {
  if (g.num_nodes() < 2) throw UndefinedMetric("average path length needs at least two nodes");
  const auto sums = kernels::omp::all_sources_bfs(g);
  PathStatistics st;
  std::uint64_t total = 0;
  st.per_node.resize(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    total += sums.distance_sum[v];
    st.reachable_pairs += sums.reachable[v];
    st.diameter = std::max(st.diameter, sums.eccentricity[v]);
    st.per_node[v] = sums.reachable[v] == 0
                         ? 0.0
                         : static_cast<double>(sums.distance_sum[v]) / sums.reachable[v];
  }
  st.average_path_length =
      st.reachable_pairs == 0 ? 0.0 : static_cast<double>(total) / static_cast<double>(st.reachable_pairs);
  return st;
}

double average_path_length(const Graph& g) { return path_statistics(g).average_path_length; }

HitsResult hits_hub_scores(const Graph& g, double tol, int max_iter) {
  const std::size_t n = g.num_nodes();
  if (n == 0) throw UndefinedMetric("HITS needs a non-empty graph");
  HitsResult r;
  std::vector<double> x(n);
  for (NodeId v = 0; v < n; ++v) x[v] = g.degree(v) > 0 ? 1.0 : 0.0;
  auto normalize = [](std::vector<double>& y) {
    double s = 0.0;
    for (double a : y) s += a * a;
    s = std::sqrt(s);
    if (s > 0.0) {
      for (double& a : y) a /= s;
    }
  };
  normalize(x);
  if (g.num_edges() == 0) {
    r.hub = std::move(x);
    r.converged = true;
    return r;
  }
  std::vector<double> y(n);
  for (r.iterations = 1; r.iterations <= max_iter; ++r.iterations) {
    kernels::omp::shifted_matvec(g, x, y);
    for (NodeId v = 0; v < n; ++v) {
      if (g.degree(v) == 0) y[v] = 0.0;
    }
    normalize(y);
    double change = 0.0;
    for (NodeId v = 0; v < n; ++v) change += (y[v] - x[v]) * (y[v] - x[v]);
    x.swap(y);
    if (std::sqrt(change) < tol) {
      r.converged = true;
      break;
    }
  }
  r.iterations = std::min(r.iterations, max_iter);
  r.hub = std::move(x);
  return r;
}

std::vector<double> betweenness_centrality(const Graph& g, bool normalized) {
  auto bc = kernels::omp::betweenness(g);
  const double n = static_cast<double>(g.num_nodes());
  if (normalized && n > 2) {
    const double scale = 2.0 / ((n - 1.0) * (n - 2.0));
    for (double& x : bc) x *= scale;
  }
  return bc;
}

std::vector<double> bridging_coefficient(const Graph& g) {
  std::vector<double> out(g.num_nodes(), 0.0);
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (g.degree(v) == 0) continue;
    double denom = 0.0;
    for (NodeId u : g.neighbors(v)) denom += 1.0 / static_cast<double>(g.degree(u));
    out[v] = (1.0 / static_cast<double>(g.degree(v))) / denom;
  }
  return out;
}

std::vector<double> bridging_centrality(const Graph& g) {
  auto bc = betweenness_centrality(g, true);
  const auto coef = bridging_coefficient(g);
  for (NodeId v = 0; v < g.num_nodes(); ++v) bc[v] *= coef[v];
  return bc;
}

bool StructuralRoleSets::is_hub(NodeId v) const {
  return std::binary_search(hubs.begin(), hubs.end(), v);
}

bool StructuralRoleSets::is_bridge(NodeId v) const {
  return std::binary_search(bridges.begin(), bridges.end(), v);
}

std::vector<NodeId> top_percentile(std::span<const double> scores, double pct, double* threshold) {
  if (!(pct > 0.0 && pct < 100.0)) {
    throw ConfigError("percentile must lie in (0, 100), got " + std::to_string(pct));
  }
  std::vector<NodeId> out;
  if (threshold != nullptr) *threshold = 0.0;
  const std::size_t n = scores.size();
  if (n == 0) return out;
  const auto m = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(pct * n / 100.0 + 1e-9)));
  std::vector<double> sorted(scores.begin(), scores.end());
  std::nth_element(sorted.begin(), sorted.begin() + (m - 1), sorted.end(), std::greater<>());
  const double cut = sorted[m - 1];
  if (threshold != nullptr) *threshold = cut;
  for (NodeId v = 0; v < n; ++v) {
    if (scores[v] >= cut && scores[v] > 0.0) out.push_back(v);
  }
  return out;
}

StructuralRoleSets role_sets(std::span<const double> hub_scores, std::span<const double> bridge_scores,
                             double hub_pct, double bridge_pct) {
  if (hub_scores.size() != bridge_scores.size()) {
    throw ContractViolation("hub and bridge score vectors cover different node sets");
  }
  StructuralRoleSets r;
  r.hubs = top_percentile(hub_scores, hub_pct, &r.hub_threshold);
  r.bridges = top_percentile(bridge_scores, bridge_pct, &r.bridge_threshold);
  return r;
}

const NodeMetricVector& NodeMetrics::get(MetricId id) const {
  switch (id) {
    case MetricId::kDegree: return degree;
    case MetricId::kClustering: return clustering;
    case MetricId::kPathLength: return path_length;
    case MetricId::kHub: return hub;
    case MetricId::kBridge: return bridge;
  }
  return degree;
}

NodeMetrics compute_node_metrics(const Graph& g) {
  NodeMetrics m;
  const std::size_t n = g.num_nodes();
  m.degree.values.resize(n);
  for (NodeId v = 0; v < n; ++v) m.degree.values[v] = static_cast<double>(g.degree(v));
  m.clustering.values = kernels::omp::clustering(g);
  if (n >= 2) {
    m.path_length.values = path_statistics(g).per_node;
  } else {
    m.path_length.values.assign(n, 0.0);
  }
  if (n > 0) m.hub.values = hits_hub_scores(g).hub;
  m.bridge.values = bridging_centrality(g);
  return m;
}

void write_metrics_csv(const Graph& g, const NodeMetrics& m, std::ostream& out) {
  out << "node_id,degree,cc,hub,bridge\n";
  out.precision(10);
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    out << g.label(v) << ',' << m.degree.values[v] << ',' << m.clustering.values[v] << ','
        << m.hub.values[v] << ',' << m.bridge.values[v] << '\n';
  }
}

}  // namespace kanon
