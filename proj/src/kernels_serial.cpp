#include "kanon/kernels.hpp"

#include "kernels_detail.hpp"

namespace kanon::kernels::serial {

PathSums all_sources_bfs(const Graph& g) {
  const std::size_t n = g.num_nodes();
  PathSums out{std::vector<std::uint64_t>(n), std::vector<std::uint32_t>(n),
               std::vector<std::uint32_t>(n)};
  std::vector<std::uint32_t> dist(n, detail::kUnreached);
  std::vector<NodeId> queue;
  queue.reserve(n);
  for (NodeId s = 0; s < n; ++s) {
    const auto r = detail::bfs_from(g, s, dist, queue);
    out.distance_sum[s] = r.distance_sum;
    out.reachable[s] = r.reachable;
    out.eccentricity[s] = r.eccentricity;
  }
  return out;
}

std::vector<double> betweenness(const Graph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<double> bc(n, 0.0);
  detail::BrandesScratch scratch(n);
  for (NodeId s = 0; s < n; ++s) detail::brandes_source(g, s, scratch, bc.data());
  for (double& x : bc) x /= 2.0;
  return bc;
}

std::vector<double> clustering(const Graph& g) {
  std::vector<double> cc(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) cc[v] = detail::local_clustering(g, v);
  return cc;
}

void shifted_matvec(const Graph& g, std::span<const double> x, std::span<double> y) {
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    double acc = x[v];
    for (NodeId u : g.neighbors(v)) acc += x[u];
    y[v] = acc;
  }
}

}  // namespace kanon::kernels::serial
