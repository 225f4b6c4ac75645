#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "kanon/graph.hpp"

namespace kanon::kernels::detail {

inline constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();

/// Scratch space for one BFS / Brandes source; reused across sources.
struct BrandesScratch {
  explicit BrandesScratch(std::size_t n) : dist(n, kUnreached), sigma(n, 0.0), delta(n, 0.0) {
    order.reserve(n);
  }
  std::vector<std::uint32_t> dist;
  std::vector<double> sigma;
  std::vector<double> delta;
  std::vector<NodeId> order;
};

struct BfsResult {
  std::uint64_t distance_sum = 0;
  std::uint32_t reachable = 0;
  std::uint32_t eccentricity = 0;
};

/// Plain BFS from `s`; `dist` must be all kUnreached on entry and is restored.
inline BfsResult bfs_from(const Graph& g, NodeId s, std::vector<std::uint32_t>& dist,
                          std::vector<NodeId>& queue) {
  BfsResult r;
  queue.clear();
  queue.push_back(s);
  dist[s] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId v = queue[head];
    const std::uint32_t dv = dist[v];
    for (NodeId w : g.neighbors(v)) {
      if (dist[w] != kUnreached) continue;
      dist[w] = dv + 1;
      r.distance_sum += dv + 1;
      ++r.reachable;
      r.eccentricity = dv + 1;
      queue.push_back(w);
    }
  }
  for (NodeId v : queue) dist[v] = kUnreached;
  return r;
}

/// Single-source dependency accumulation; adds delta_s(v) into `acc`.
inline void brandes_source(const Graph& g, NodeId s, BrandesScratch& sc, double* acc) {
  auto& dist = sc.dist;
  auto& sigma = sc.sigma;
  auto& delta = sc.delta;
  auto& order = sc.order;
  order.clear();
  order.push_back(s);
  dist[s] = 0;
  sigma[s] = 1.0;
  for (std::size_t head = 0; head < order.size(); ++head) {
    const NodeId v = order[head];
    for (NodeId w : g.neighbors(v)) {
      if (dist[w] == kUnreached) {
        dist[w] = dist[v] + 1;
        order.push_back(w);
      }
      if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
    }
  }
  for (std::size_t i = order.size(); i-- > 0;) {
    const NodeId w = order[i];
    for (NodeId v : g.neighbors(w)) {
      if (dist[v] + 1 == dist[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
    }
    if (w != s) acc[w] += delta[w];
  }
  for (NodeId v : order) {
    dist[v] = kUnreached;
    sigma[v] = 0.0;
    delta[v] = 0.0;
  }
}

inline double local_clustering(const Graph& g, NodeId v) {
  const auto adj = g.neighbors(v);
  const std::size_t d = adj.size();
  if (d < 2) return 0.0;
  std::uint64_t links = 0;  // each triangle at v counted twice
  for (NodeId u : adj) {
    const auto nu = g.neighbors(u);
    auto a = adj.begin();
    auto b = nu.begin();
    while (a != adj.end() && b != nu.end()) {
      if (*a < *b) {
        ++a;
      } else if (*b < *a) {
        ++b;
      } else {
        ++links;
        ++a;
        ++b;
      }
    }
  }
  return static_cast<double>(links) / (static_cast<double>(d) * static_cast<double>(d - 1));
}

}  // namespace kanon::kernels::detail
