#include "kanon/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "kanon/error.hpp"

namespace kanon {

namespace {

std::vector<double> resample(const std::vector<double>& sorted, std::size_t m) {
  const std::size_t len = sorted.size();
  if (m == len) return sorted;
  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double pos = m == 1 ? 0.0 : static_cast<double>(i) * static_cast<double>(len - 1) / static_cast<double>(m - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, len - 1);
    const double frac = pos - static_cast<double>(lo);
    out[i] = sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
  }
  return out;
}

}  // namespace

double information_loss(std::span<const double> original, std::span<const double> perturbed) {
  if (original.empty() || perturbed.empty()) throw UndefinedMetric("information loss of an empty metric vector");
  std::vector<double> a(original.begin(), original.end());
  std::vector<double> b(perturbed.begin(), perturbed.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a == b) return 0.0;
  const std::size_t m = std::min(a.size(), b.size());
  a = resample(a, m);
  b = resample(b, m);
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(m);
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / static_cast<double>(m);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa <= 0.0 || sbb <= 0.0) return 1.0;
  const double r = std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
  return 1.0 - r;
}

CommunityLoss community_loss(std::uint32_t nc, std::uint32_t nc_after) {
  if (nc < 1 || nc_after < 1) throw ContractViolation("community counts must be at least 1");
  CommunityLoss out;
  out.raw = std::abs(static_cast<double>(nc) - static_cast<double>(nc_after));
  out.normalized = out.raw / static_cast<double>(nc);
  return out;
}

LossReport loss_report(const NodeMetrics& original, const NodeMetrics& perturbed, std::uint32_t nc,
                       std::uint32_t nc_after) {
  LossReport r;
  for (std::size_t i = 0; i < std::size(kLossMetrics); ++i) {
    r.metric[i] = information_loss(original.get(kLossMetrics[i]).values, perturbed.get(kLossMetrics[i]).values);
  }
  r.communities_before = nc;
  r.communities_after = nc_after;
  r.community = community_loss(nc, nc_after);
  return r;
}

std::string_view query_name(QueryId q) {
  switch (q) {
    case QueryId::kH1: return "H1";
    case QueryId::kH2: return "H2";
    case QueryId::kSG: return "SG";
    case QueryId::kFH2: return "FH2";
    case QueryId::kFB2: return "FB2";
  }
  return "?";
}

QueryId parse_query(std::string_view name) {
  for (QueryId q : kAllQueries) {
    if (query_name(q) == name) return q;
  }
  throw ConfigError("unknown query '" + std::string(name) + "'");
}

namespace {

std::vector<NodeId> top_by(std::span<const double> scores, std::size_t count) {
  std::vector<NodeId> ids(scores.size());
  std::iota(ids.begin(), ids.end(), 0U);
  const std::size_t take = std::min(count, ids.size());
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(take), ids.end(), [&](NodeId a, NodeId b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
  ids.resize(take);
  return ids;
}

/// Distances up to the horizon from `source`; entries beyond it stay 0.
std::vector<std::uint32_t> horizon_bfs(const Graph& g, NodeId source) {
  std::vector<std::uint32_t> dist(g.num_nodes(), 0);
  std::vector<char> seen(g.num_nodes(), 0);
  std::vector<NodeId> frontier{source};
  seen[source] = 1;
  for (std::uint32_t d = 1; d <= kFingerprintHorizon && !frontier.empty(); ++d) {
    std::vector<NodeId> next;
    for (NodeId x : frontier) {
      for (NodeId y : g.neighbors(x)) {
        if (!seen[y]) {
          seen[y] = 1;
          dist[y] = d;
          next.push_back(y);
        }
      }
    }
    frontier = std::move(next);
  }
  return dist;
}

std::uint64_t one_hop_edges(const Graph& g, NodeId x) {
  const auto adj = g.neighbors(x);
  std::uint64_t links = 0;
  for (NodeId u : adj) {
    for (NodeId y : g.neighbors(u)) {
      if (y > u && std::binary_search(adj.begin(), adj.end(), y)) ++links;
    }
  }
  return adj.size() + links;
}

QuerySignature local_signature(const Graph& g, NodeId x, QueryId q) {
  QuerySignature s{q, {}};
  switch (q) {
    case QueryId::kH1:
      s.value.push_back(g.degree(x));
      break;
    case QueryId::kH2:
      for (NodeId u : g.neighbors(x)) s.value.push_back(g.degree(u));
      std::sort(s.value.begin(), s.value.end());
      break;
    case QueryId::kSG:
      s.value.push_back(one_hop_edges(g, x));
      break;
    default:
      break;
  }
  return s;
}

const std::vector<NodeId>& fingerprint_list(QueryId q, const FingerprintTargets& t) {
  return q == QueryId::kFH2 ? t.hubs : t.bridges;
}

}  // namespace

FingerprintTargets fingerprint_targets(const Graph& g, std::size_t count) {
  FingerprintTargets t;
  if (g.empty()) return t;
  t.hubs = top_by(hits_hub_scores(g).hub, count);
  t.bridges = top_by(bridging_centrality(g), count);
  return t;
}

QuerySignature signature(const Graph& g, NodeId x, QueryId q, const FingerprintTargets& targets) {
  g.require_node(x);
  if (q != QueryId::kFH2 && q != QueryId::kFB2) return local_signature(g, x, q);
  QuerySignature s{q, std::vector<std::uint64_t>(kFingerprintSize, 0)};
  const auto& list = fingerprint_list(q, targets);
  for (std::size_t i = 0; i < list.size() && i < kFingerprintSize; ++i) s.value[i] = horizon_bfs(g, list[i])[x];
  return s;
}

std::vector<QuerySignature> all_signatures(const Graph& g, QueryId q, const FingerprintTargets& targets) {
  const std::size_t n = g.num_nodes();
  std::vector<QuerySignature> out(n);
  if (q == QueryId::kFH2 || q == QueryId::kFB2) {
    const auto& list = fingerprint_list(q, targets);
    std::vector<std::vector<std::uint32_t>> dist;
    for (std::size_t i = 0; i < list.size() && i < kFingerprintSize; ++i) dist.push_back(horizon_bfs(g, list[i]));
    for (NodeId x = 0; x < n; ++x) {
      out[x].query = q;
      out[x].value.assign(kFingerprintSize, 0);
      for (std::size_t i = 0; i < dist.size(); ++i) out[x].value[i] = dist[i][x];
    }
    return out;
  }
#pragma omp parallel for schedule(dynamic, 256)
  for (std::size_t x = 0; x < n; ++x) out[x] = local_signature(g, static_cast<NodeId>(x), q);
  return out;
}

CandidateModel candidate_model(const AnonymizedGraph& a) {
  const auto& prov = a.provenance;
  const std::size_t n = a.published.num_nodes();
  CandidateModel m;
  m.population.assign(n, 0);
  m.unit.assign(n, 0);
  if (prov.kind == ProvenanceKind::kClustering) {
    if (prov.supernodes.size() != n) throw ContractViolation("provenance does not cover the published graph");
    std::vector<char> excluded(prov.original_nodes, 0);
    for (NodeId v : prov.excluded) excluded.at(v) = 1;
    m.unit_weight.resize(n);
    for (NodeId p = 0; p < n; ++p) {
      const auto& sn = prov.supernodes[p];
      m.unit[p] = p;
      m.unit_weight[p] = sn.size();
      m.population[p] = !(sn.size() == 1 && excluded.at(sn.contents[0]));
    }
    m.excluded = prov.excluded.size();
    return m;
  }
  constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();
  std::fill(m.unit.begin(), m.unit.end(), kUnset);
  for (const auto& cls : prov.classes) {
    const auto id = static_cast<std::uint32_t>(m.unit_weight.size());
    m.unit_weight.push_back(cls.size());
    for (NodeId p : cls) {
      if (p >= n) throw ContractViolation("provenance class names an unknown published node");
      m.unit[p] = id;
      m.population[p] = 1;
    }
  }
  for (NodeId p = 0; p < n; ++p) {
    if (m.unit[p] == kUnset) {
      m.unit[p] = static_cast<std::uint32_t>(m.unit_weight.size());
      m.unit_weight.push_back(1);
    }
  }
  m.excluded = prov.excluded.size();
  m.dummies = prov.dummies.size();
  return m;
}

std::vector<std::size_t> candidate_set_sizes(const Graph& published, const CandidateModel& model, QueryId q,
                                             const FingerprintTargets& targets) {
  const std::size_t n = published.num_nodes();
  if (model.unit.size() != n) throw ContractViolation("candidate model does not match the published graph");
  const auto sigs = all_signatures(published, q, targets);
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), 0U);
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    if (sigs[a].value != sigs[b].value) return sigs[a].value < sigs[b].value;
    return a < b;
  });
  std::vector<std::size_t> sizes(n, 0);
  std::vector<std::uint32_t> units;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    units.clear();
    while (j < n && sigs[order[j]].value == sigs[order[i]].value) units.push_back(model.unit[order[j++]]);
    std::sort(units.begin(), units.end());
    units.erase(std::unique(units.begin(), units.end()), units.end());
    std::size_t total = 0;
    for (auto u : units) total += model.unit_weight[u];
    for (std::size_t t = i; t < j; ++t) sizes[order[t]] = total;
    i = j;
  }
  return sizes;
}

namespace {

constexpr std::string_view kDegreeBuckets[] = {"=1", "2-4", "5-10", "11-20", ">20"};
constexpr std::string_view kSubgraphBuckets[] = {"=1", "2-10", "11-100", "101-1000", ">1000"};

}  // namespace

std::span<const std::string_view> bucket_labels(QueryId q) {
  if (q == QueryId::kSG) return kSubgraphBuckets;
  return kDegreeBuckets;
}

std::size_t bucket_index(QueryId q, std::size_t size) {
  static constexpr std::size_t kDegreeUpper[] = {1, 4, 10, 20};
  static constexpr std::size_t kSubgraphUpper[] = {1, 10, 100, 1000};
  const auto& upper = q == QueryId::kSG ? kSubgraphUpper : kDegreeUpper;
  for (std::size_t i = 0; i < 4; ++i) {
    if (size <= upper[i]) return i;
  }
  return 4;
}

RiskDistribution risk_distribution(const Graph& published, const CandidateModel& model, QueryId q,
                                   const FingerprintTargets& targets) {
  RiskDistribution r;
  r.query = q;
  r.counts.assign(bucket_labels(q).size(), 0);
  const auto sizes = candidate_set_sizes(published, model, q, targets);
  for (NodeId p = 0; p < published.num_nodes(); ++p) {
    if (!model.population[p]) continue;
    ++r.counts[bucket_index(q, sizes[p])];
    ++r.population;
  }
  r.fractions.assign(r.counts.size(), 0.0);
  if (r.population > 0) {
    for (std::size_t b = 0; b < r.counts.size(); ++b) {
      r.fractions[b] = static_cast<double>(r.counts[b]) / static_cast<double>(r.population);
    }
  }
  return r;
}

RiskReport risk_report(const AnonymizedGraph& a) {
  const auto model = candidate_model(a);
  const auto targets = fingerprint_targets(a.published);
  RiskReport r;
  r.excluded = model.excluded;
  r.dummies = model.dummies;
  for (QueryId q : kAllQueries) r.queries.push_back(risk_distribution(a.published, model, q, targets));
  return r;
}

AnonymizedGraph identity_anonymization(const Graph& g) {
  AnonymizedGraph a;
  a.published = g;
  a.k = 1;
  a.provenance.kind = ProvenanceKind::kClustering;
  a.provenance.original_nodes = g.num_nodes();
  a.provenance.original_labels = g.labels();
  for (NodeId v = 0; v < g.num_nodes(); ++v) a.provenance.supernodes.push_back({v, {v}});
  return a;
}

LeakEstimate leak_estimate(const RestrictionContext& ctx, const Graph& g) {
  const std::size_t n = g.num_nodes();
  if (ctx.eligible.size() != n || ctx.partition.assignment.size() != n) {
    throw ContractViolation("restriction context does not match graph");
  }
  LeakEstimate e;
  e.diversity_reduction = static_cast<double>(ctx.partition.count);
  if (n == 0) return e;
  std::vector<std::size_t> eligible_in(ctx.partition.count, 0);
  for (NodeId v = 0; v < n; ++v) {
    if (ctx.is_eligible(v)) ++eligible_in[ctx.partition[v]];
  }
  double sum = 0.0;
  std::size_t counted = 0;
  for (NodeId r = 0; r < n; ++r) {
    if (ctx.is_eligible(r)) continue;
    ++e.roles;
    if (g.degree(r) == 0) continue;
    std::size_t unmatched = 0;
    for (NodeId u : g.neighbors(r)) {
      const bool role = !ctx.is_eligible(u);
      const std::size_t others = eligible_in[ctx.partition[u]] - (role ? 0 : 1);
      if (role || others == 0) ++unmatched;
    }
    sum += static_cast<double>(unmatched) / static_cast<double>(g.degree(r));
    ++counted;
  }
  e.role_density = static_cast<double>(e.roles) / static_cast<double>(n);
  e.unmatched_fraction = counted == 0 ? 0.0 : sum / static_cast<double>(counted);
  e.probability = e.role_density * e.unmatched_fraction;
  return e;
}

}  // namespace kanon
