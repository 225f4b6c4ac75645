#include "kanon/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "kanon/error.hpp"
#include "kanon/metrics.hpp"

namespace kanon {

FeatureArray raw_features(const Graph& g, NodeId v) {
  g.require_node(v);
  FeatureArray f{};
  const auto adj = g.neighbors(v);
  const double d = static_cast<double>(adj.size());
  f[kDegreeFeature] = d;
  if (adj.empty()) return f;

  std::size_t links = 0;
  double sum = 0.0;
  for (NodeId u : adj) {
    sum += static_cast<double>(g.degree(u));
    // Neighbors of u that are also neighbors of v, counted from the smaller id.
    for (NodeId x : g.neighbors(u)) {
      if (x > u && std::binary_search(adj.begin(), adj.end(), x)) ++links;
    }
  }
  f[kEdgeCountFeature] = d + static_cast<double>(links);
  f[kClusteringFeature] = adj.size() < 2 ? 0.0 : 2.0 * static_cast<double>(links) / (d * (d - 1.0));
  const double mean = sum / d;
  double var = 0.0;
  for (NodeId u : adj) {
    const double diff = static_cast<double>(g.degree(u)) - mean;
    var += diff * diff;
  }
  f[kMeanNeighborDegree] = mean;
  f[kNeighborDegreeStd] = std::sqrt(var / d);
  return f;
}

FeatureTable FeatureTable::build(const Graph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<FeatureArray> raw(n);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::size_t v = 0; v < n; ++v) raw[v] = raw_features(g, static_cast<NodeId>(v));

  FeatureTable t;
  t.id_ = fingerprint(g).hash;
  if (n > 0) {
    t.min_ = raw[0];
    t.max_ = raw[0];
  }
  for (const auto& r : raw) {
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      t.min_[i] = std::min(t.min_[i], r[i]);
      t.max_[i] = std::max(t.max_[i], r[i]);
    }
  }
  t.rows_.reserve(n);
  for (const auto& r : raw) t.rows_.push_back(t.normalize(r));
  return t;
}

SubgraphFeatures FeatureTable::normalize(const FeatureArray& raw) const {
  SubgraphFeatures out;
  out.table_id = id_;
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    const double span = max_[i] - min_[i];
    out.values[i] = span > 0.0 ? std::clamp((raw[i] - min_[i]) / span, 0.0, 1.0) : 0.0;
  }
  return out;
}

SubgraphFeatures features(const Graph& g, NodeId v, const FeatureTable& norm) {
  if (norm.id() != fingerprint(g).hash) throw ContractViolation("feature table was built from another graph");
  return norm.normalize(raw_features(g, v));
}

void DistanceWeights::validate() const {
  double sum = 0.0;
  for (double x : w) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw ConfigError("distance weights must be finite and non-negative");
    sum += x;
  }
  if (sum <= 0.0) throw ConfigError("distance weights are all zero");
}

void DistanceWeights::normalize() {
  validate();
  double sum = 0.0;
  for (double x : w) sum += x;
  for (double& x : w) x /= sum;
}

double distance(const SubgraphFeatures& a, const SubgraphFeatures& b, const DistanceWeights& w) {
  if (a.table_id != b.table_id) throw ContractViolation("features normalized by different tables");
  double d = 0.0;
  for (std::size_t i = 0; i < kFeatureCount; ++i) d += w.w[i] * std::abs(a.values[i] - b.values[i]);
  return d;
}

bool closer_candidate(const FeatureTable& table, NodeId v, const DistanceWeights& w, NodeId a, NodeId b) {
  const double da = distance(table[v], table[a], w);
  const double db = distance(table[v], table[b], w);
  if (da != db) return da < db;
  const bool ea = table[v].values == table[a].values;
  const bool eb = table[v].values == table[b].values;
  if (ea != eb) return ea;
  return a < b;
}

RankedCandidates rank_candidates(const FeatureTable& table, NodeId v, std::span<const NodeId> pool,
                                 const DistanceWeights& w, std::size_t count) {
  if (v >= table.size()) throw LookupError("unknown node id " + std::to_string(v));
  struct Keyed {
    double dist;
    bool differs;
    NodeId id;
    auto operator<=>(const Keyed&) const = default;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(pool.size());
  for (NodeId u : pool) {
    if (u == v) throw ContractViolation("candidate pool contains the reference node");
    if (u >= table.size()) throw LookupError("unknown node id " + std::to_string(u));
    keyed.push_back({distance(table[v], table[u], w), table[v].values != table[u].values, u});
  }
  RankedCandidates out;
  out.shortfall = keyed.size() < count;
  const std::size_t take = std::min(count, keyed.size());
  std::partial_sort(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(take), keyed.end());
  out.nodes.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.nodes.push_back(keyed[i].id);
  return out;
}

void write_weights(const DistanceWeights& w, const GraphFingerprint& fp, std::ostream& out) {
  out << "# nodes=" << fp.nodes << " edges=" << fp.edges << " hash=" << fp.hash << '\n';
  out << std::setprecision(17);
  for (std::size_t i = 0; i < kFeatureCount; ++i) out << (i ? " " : "") << w.w[i];
  out << '\n';
}

void write_weights(const DistanceWeights& w, const GraphFingerprint& fp, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_weights(w, fp, out);
  if (!out) throw IoError("write failed for " + path.string());
}

DistanceWeights read_weights(std::istream& in, const GraphFingerprint* expected) {
  std::string line;
  std::size_t line_no = 0;
  bool have_fp = false;
  GraphFingerprint fp;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hdr(line.substr(1));
      std::string tok;
      while (hdr >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        try {
          if (key == "nodes") fp.nodes = std::stoull(val);
          else if (key == "edges") fp.edges = std::stoull(val);
          else if (key == "hash") fp.hash = std::stoull(val);
          else continue;
        } catch (const std::exception&) {
          throw ParseError("bad fingerprint field '" + tok + "'", line_no);
        }
        have_fp = true;
      }
      continue;
    }
    std::istringstream body(line);
    DistanceWeights w;
    for (double& x : w.w) {
      if (!(body >> x)) throw ParseError("expected five weights", line_no);
    }
    std::string extra;
    if (body >> extra) throw ParseError("expected five weights", line_no);
    w.validate();
    if (expected != nullptr) {
      if (!have_fp) throw ConfigError("weights file has no graph fingerprint");
      if (!(fp == *expected)) {
        throw ConfigError("weights were trained on another graph (nodes=" + std::to_string(fp.nodes) +
                          " edges=" + std::to_string(fp.edges) + ")");
      }
    }
    return w;
  }
  throw ParseError("weights file holds no weight line", 0);
}

DistanceWeights read_weights(const std::filesystem::path& path, const GraphFingerprint* expected) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_weights(in, expected);
}

}  // namespace kanon
