#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kanon/anonymize.hpp"
#include "kanon/graph.hpp"
#include "kanon/metrics.hpp"

namespace kanon {

// Information loss.

/// 1 - Pearson correlation of the two value distributions. Both vectors are
/// sorted and the longer one is resampled (linear interpolation) at the
/// shorter one's quantiles. Identical inputs give 0; otherwise a constant
/// side gives 1. Throws UndefinedMetric on an empty vector.
double information_loss(std::span<const double> original, std::span<const double> perturbed);

struct CommunityLoss {
  double raw = 0.0;         // |nc - nc'|
  double normalized = 0.0;  // raw / nc
};

/// Throws ContractViolation unless both counts are at least 1.
CommunityLoss community_loss(std::uint32_t nc, std::uint32_t nc_after);

inline constexpr MetricId kLossMetrics[] = {MetricId::kDegree, MetricId::kClustering, MetricId::kPathLength,
                                            MetricId::kHub, MetricId::kBridge};

struct LossReport {
  std::string method;
  std::size_t k = 0;
  std::array<double, 5> metric{};  // indexed like kLossMetrics
  std::uint32_t communities_before = 0;
  std::uint32_t communities_after = 0;
  CommunityLoss community;
};

LossReport loss_report(const NodeMetrics& original, const NodeMetrics& perturbed, std::uint32_t nc,
                       std::uint32_t nc_after);

// Adversary queries.

enum class QueryId { kH1, kH2, kSG, kFH2, kFB2 };

inline constexpr QueryId kAllQueries[] = {QueryId::kH1, QueryId::kH2, QueryId::kSG, QueryId::kFH2, QueryId::kFB2};
inline constexpr std::size_t kFingerprintSize = 10;
inline constexpr std::uint32_t kFingerprintHorizon = 2;

std::string_view query_name(QueryId q);
QueryId parse_query(std::string_view name);

/// H1: {degree}. H2: sorted neighbor degrees. SG: {edges of the 1-hop
/// subgraph}. FH2/FB2: distances to the fixed targets, 0 beyond the horizon.
struct QuerySignature {
  QueryId query = QueryId::kH1;
  std::vector<std::uint64_t> value;

  auto operator<=>(const QuerySignature&) const = default;
};

/// Top nodes of a graph by HITS hub score and by bridging centrality, ties
/// to the lower id. Lists are shorter than `count` on small graphs.
struct FingerprintTargets {
  std::vector<NodeId> hubs;
  std::vector<NodeId> bridges;
};

FingerprintTargets fingerprint_targets(const Graph& g, std::size_t count = kFingerprintSize);

QuerySignature signature(const Graph& g, NodeId x, QueryId q, const FingerprintTargets& targets);

/// Signatures of every node (parallel over nodes).
std::vector<QuerySignature> all_signatures(const Graph& g, QueryId q, const FingerprintTargets& targets);

/// How published nodes map to the people an adversary is trying to find.
/// Published node p belongs to counting unit `unit[p]`, whose weight is the
/// number of original nodes it stands for. `population[p]` marks the nodes
/// whose risk is reported (anonymized originals; not role nodes or dummies).
struct CandidateModel {
  std::vector<char> population;
  std::vector<std::uint32_t> unit;
  std::vector<std::size_t> unit_weight;
  std::size_t excluded = 0;
  std::size_t dummies = 0;
};

/// Clustering: one unit per published node, weighted by its content size.
/// Modification: one unit per equivalence class, singletons otherwise.
CandidateModel candidate_model(const AnonymizedGraph& a);

/// Per published node: total weight of the units that contain a node with
/// the same query answer.
std::vector<std::size_t> candidate_set_sizes(const Graph& published, const CandidateModel& model, QueryId q,
                                             const FingerprintTargets& targets);

/// Bucket labels of a query, smallest candidate sets first.
std::span<const std::string_view> bucket_labels(QueryId q);
std::size_t bucket_index(QueryId q, std::size_t candidate_set_size);

struct RiskDistribution {
  QueryId query = QueryId::kH1;
  std::vector<std::size_t> counts;  // per bucket
  std::vector<double> fractions;    // per bucket, sums to 1 (0s for an empty population)
  std::size_t population = 0;
};

struct RiskReport {
  std::vector<RiskDistribution> queries;
  std::size_t excluded = 0;
  std::size_t dummies = 0;
};

RiskDistribution risk_distribution(const Graph& published, const CandidateModel& model, QueryId q,
                                   const FingerprintTargets& targets);
RiskReport risk_report(const AnonymizedGraph& a);

/// The original graph published as is: each node its own supernode.
AnonymizedGraph identity_anonymization(const Graph& g);

struct LeakEstimate {
  std::size_t roles = 0;
  double role_density = 0.0;       // |V^h u V^b| / N
  double unmatched_fraction = 0.0; // mean share of role-node neighbors with no in-community substitute
  double probability = 0.0;        // product of the two
  double diversity_reduction = 0.0;// N / (N / N_c) = N_c
};

LeakEstimate leak_estimate(const RestrictionContext& ctx, const Graph& g);

}  // namespace kanon
