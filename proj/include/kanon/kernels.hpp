#pragma once

// Data-parallel graph kernels. Each kernel has a serial reference version,
// kept for testing and benchmarking, and an OpenMP version used by the rest
// of the library. The OpenMP versions produce bit-identical results for any
// thread count: work is split into fixed-size blocks that do not depend on
// the number of workers, and floating-point partials are reduced in block
// order.

#include <cstdint>
#include <span>
#include <vector>

#include "kanon/graph.hpp"

namespace kanon::kernels {

/// Per-source shortest-path summary from a BFS out of every node.
struct PathSums {
  std::vector<std::uint64_t> distance_sum;  // sum of distances to reachable nodes
  std::vector<std::uint32_t> reachable;     // reachable nodes, source excluded
  std::vector<std::uint32_t> eccentricity;  // largest finite distance
};

namespace serial {

PathSums all_sources_bfs(const Graph& g);

/// Brandes betweenness; each unordered pair counted once, not normalized.
std::vector<double> betweenness(const Graph& g);

/// Local clustering coefficient; 0 for degree < 2.
std::vector<double> clustering(const Graph& g);

/// y = x + A x, the identity-shifted adjacency product.
void shifted_matvec(const Graph& g, std::span<const double> x, std::span<double> y);

}  // namespace serial

namespace omp {

PathSums all_sources_bfs(const Graph& g);
std::vector<double> betweenness(const Graph& g);
std::vector<double> clustering(const Graph& g);
void shifted_matvec(const Graph& g, std::span<const double> x, std::span<double> y);

}  // namespace omp

/// Sources handled sequentially by one task in the blocked Brandes kernel.
inline constexpr std::size_t kBetweennessBlock = 16;
/// Blocks whose partial sums are held in memory at once.
inline constexpr std::size_t kBetweennessWave = 64;

int max_threads();
void set_threads(int n);

}  // namespace kanon::kernels
