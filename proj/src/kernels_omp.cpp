#include <omp.h>

#include <algorithm>

#include "kanon/kernels.hpp"
#include "kernels_detail.hpp"

namespace kanon::kernels {

int max_threads() { return omp_get_max_threads(); }
void set_threads(int n) { omp_set_num_threads(n); }

namespace omp {

PathSums all_sources_bfs(const Graph& g) {
  const std::int64_t n = static_cast<std::int64_t>(g.num_nodes());
  PathSums out{std::vector<std::uint64_t>(n), std::vector<std::uint32_t>(n),
               std::vector<std::uint32_t>(n)};
#pragma omp parallel
  {
    std::vector<std::uint32_t> dist(n, detail::kUnreached);
    std::vector<NodeId> queue;
    queue.reserve(n);
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t s = 0; s < n; ++s) {
      const auto r = detail::bfs_from(g, static_cast<NodeId>(s), dist, queue);
      out.distance_sum[s] = r.distance_sum;
      out.reachable[s] = r.reachable;
      out.eccentricity[s] = r.eccentricity;
    }
  }
  return out;
}

std::vector<double> betweenness(const Graph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<double> bc(n, 0.0);
  if (n == 0) return bc;
  const std::size_t blocks = (n + kBetweennessBlock - 1) / kBetweennessBlock;
  std::vector<double> partial(kBetweennessWave * n);

  for (std::size_t wave = 0; wave < blocks; wave += kBetweennessWave) {
    const std::int64_t in_wave = static_cast<std::int64_t>(std::min(kBetweennessWave, blocks - wave));
    std::fill(partial.begin(), partial.begin() + in_wave * n, 0.0);
#pragma omp parallel
    {
      detail::BrandesScratch scratch(n);
#pragma omp for schedule(dynamic, 1)
      for (std::int64_t b = 0; b < in_wave; ++b) {
        const std::size_t first = (wave + b) * kBetweennessBlock;
        const std::size_t last = std::min(first + kBetweennessBlock, n);
        double* acc = partial.data() + b * n;
        for (std::size_t s = first; s < last; ++s) {
          detail::brandes_source(g, static_cast<NodeId>(s), scratch, acc);
        }
      }
    }
    // Fixed block order per node keeps the sum independent of the schedule.
#pragma omp parallel for schedule(static)
    for (std::int64_t v = 0; v < static_cast<std::int64_t>(n); ++v) {
      double acc = bc[v];
      for (std::int64_t b = 0; b < in_wave; ++b) acc += partial[b * n + v];
      bc[v] = acc;
    }
  }
  for (double& x : bc) x /= 2.0;
  return bc;
}

std::vector<double> clustering(const Graph& g) {
  const std::int64_t n = static_cast<std::int64_t>(g.num_nodes());
  std::vector<double> cc(n);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t v = 0; v < n; ++v) cc[v] = detail::local_clustering(g, static_cast<NodeId>(v));
  return cc;
}

void shifted_matvec(const Graph& g, std::span<const double> x, std::span<double> y) {
  const std::int64_t n = static_cast<std::int64_t>(g.num_nodes());
#pragma omp parallel for schedule(dynamic, 256)
  for (std::int64_t v = 0; v < n; ++v) {
    double acc = x[v];
    for (NodeId u : g.neighbors(static_cast<NodeId>(v))) acc += x[u];
    y[v] = acc;
  }
}

}  // namespace omp
}  // namespace kanon::kernels
