#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "kanon/graph.hpp"

namespace kanon {

/// Feature order used by SubgraphFeatures and DistanceWeights.
enum Feature : std::size_t { kDegreeFeature, kEdgeCountFeature, kClusteringFeature, kMeanNeighborDegree, kNeighborDegreeStd };
inline constexpr std::size_t kFeatureCount = 5;

using FeatureArray = std::array<double, kFeatureCount>;

/// Unnormalized features of the 1-hop subgraph around `v`: reference degree,
/// subgraph edge count, clustering coefficient, mean and (population) standard
/// deviation of the neighbor degrees.
FeatureArray raw_features(const Graph& g, NodeId v);

struct SubgraphFeatures {
  FeatureArray values{};
  std::uint64_t table_id = 0;  // identifies the normalization table

  double operator[](std::size_t i) const { return values[i]; }
};

/// Per-node features min-max normalized against the whole graph. A feature
/// whose minimum equals its maximum normalizes to 0 everywhere.
class FeatureTable {
 public:
  FeatureTable() = default;
  static FeatureTable build(const Graph& g);

  std::size_t size() const noexcept { return rows_.size(); }
  const SubgraphFeatures& operator[](NodeId v) const { return rows_[v]; }
  std::uint64_t id() const noexcept { return id_; }
  const FeatureArray& min() const noexcept { return min_; }
  const FeatureArray& max() const noexcept { return max_; }

  /// Normalizes a raw vector with this table's ranges (values are clamped).
  SubgraphFeatures normalize(const FeatureArray& raw) const;

 private:
  std::uint64_t id_ = 0;
  FeatureArray min_{};
  FeatureArray max_{};
  std::vector<SubgraphFeatures> rows_;
};

SubgraphFeatures features(const Graph& g, NodeId v, const FeatureTable& norm);

struct DistanceWeights {
  FeatureArray w{0.2, 0.2, 0.2, 0.2, 0.2};

  static DistanceWeights uniform() { return {}; }
  /// Throws ConfigError on a negative entry or an all-zero vector.
  void validate() const;
  /// Rescales to sum 1.
  void normalize();

  friend bool operator==(const DistanceWeights&, const DistanceWeights&) = default;
};

/// Weighted L1 distance. Throws ContractViolation when the two vectors come
/// from different normalization tables.
double distance(const SubgraphFeatures& a, const SubgraphFeatures& b, const DistanceWeights& w);

struct RankedCandidates {
  std::vector<NodeId> nodes;
  bool shortfall = false;  // pool held fewer than `count` nodes
};

/// The `count` pool members closest to `v`, ordered by distance, then exact
/// feature equality first, then node id. Throws ContractViolation when `v` is
/// in the pool.
RankedCandidates rank_candidates(const FeatureTable& table, NodeId v, std::span<const NodeId> pool,
                                 const DistanceWeights& w, std::size_t count);

/// Sort key used by rank_candidates: (distance, not-equal, id).
bool closer_candidate(const FeatureTable& table, NodeId v, const DistanceWeights& w, NodeId a, NodeId b);

// Weights file:
//   # nodes=<n> edges=<m> hash=<h>
//   w_dr w_ne w_cc w_adan w_sdan
void write_weights(const DistanceWeights& w, const GraphFingerprint& fp, std::ostream& out);
void write_weights(const DistanceWeights& w, const GraphFingerprint& fp, const std::filesystem::path& path);

/// Reads a weights file. When `expected` is given and differs from the file's
/// fingerprint the weights are stale and ConfigError is thrown.
DistanceWeights read_weights(std::istream& in, const GraphFingerprint* expected = nullptr);
DistanceWeights read_weights(const std::filesystem::path& path, const GraphFingerprint* expected = nullptr);

}  // namespace kanon
