#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kanon/graph.hpp"
#include "kanon/similarity.hpp"
#include "kanon/vf2.hpp"

namespace kanon {

struct AnnealingConfig {
  double initial_temperature = 1.0;
  double cooling = 0.95;  // per epoch
  int epochs = 100;
  int proposals_per_epoch = 50;
  std::size_t sample_size = 200;
  std::size_t pool_cap = 2000;   // candidates considered per sampled node
  double concentration = 80.0;   // Dirichlet proposal sharpness
  double concentration_floor = 0.5;
  FidelityOptions fidelity;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

struct TrainingResult {
  DistanceWeights weights;
  double fitness = 0.0;
  double initial_fitness = 0.0;           // uniform weights
  std::vector<double> best_per_epoch;     // non-decreasing
  std::size_t evaluations = 0;
  std::vector<NodeId> sample;
};

/// Simulated annealing over the weight simplex. The fitness of a weight
/// vector is the mean, over the sampled nodes, of the VF2-D score between
/// each node and its nearest candidate under that vector. Deterministic for
/// a given seed. Throws ConfigError when the graph has fewer than two nodes.
TrainingResult train_weights(const Graph& g, const FeatureTable& table, const AnnealingConfig& config,
                             std::uint64_t seed);

/// `count` distinct nodes drawn with the given seed (all nodes when count >= n),
/// returned in ascending order.
std::vector<NodeId> sample_nodes(std::size_t n, std::size_t count, std::uint64_t seed);

/// Fraction of the top-`top` ranked candidates (whole graph as pool) that are
/// rooted-isomorphic to their sampled reference node.
double isomorphism_hit_rate(const Graph& g, const FeatureTable& table, const DistanceWeights& w,
                            std::span<const NodeId> sample, std::size_t top);

}  // namespace kanon
