#include "kanon/community.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <string>
#include <unordered_map>

#include "kanon/error.hpp"

namespace kanon {
namespace {

constexpr CommunityId kNoCommunity = std::numeric_limits<CommunityId>::max();

/// Weighted graph used between Louvain levels. Self-loop weight is kept
/// apart from the adjacency and only enters through node strength.
struct LevelGraph {
  std::vector<std::size_t> offsets;
  std::vector<std::uint32_t> targets;
  std::vector<double> weights;
  std::vector<double> strength;
  double total = 0.0;  // 2m

  std::size_t size() const { return strength.size(); }
};

LevelGraph level_from(const Graph& g) {
  LevelGraph lg;
  lg.offsets = g.offsets();
  lg.targets.assign(g.targets().begin(), g.targets().end());
  lg.weights.assign(lg.targets.size(), 1.0);
  lg.strength.resize(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) lg.strength[v] = static_cast<double>(g.degree(v));
  lg.total = 2.0 * static_cast<double>(g.num_edges());
  return lg;
}

/// Local-move phase. Returns true when any node changed community.
bool local_moves(const LevelGraph& lg, double resolution, std::mt19937_64& rng,
                 std::vector<std::uint32_t>& comm) {
  const std::size_t n = lg.size();
  comm.resize(n);
  std::iota(comm.begin(), comm.end(), 0U);
  std::vector<double> tot = lg.strength;
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0U);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<double> link(n, -1.0);
  std::vector<std::uint32_t> touched;
  const double two_m = lg.total;
  bool any_move = false;
  for (int pass = 0; pass < 1000; ++pass) {
    bool moved = false;
    for (std::uint32_t i : order) {
      const std::uint32_t own = comm[i];
      const double ki = lg.strength[i];
      touched.clear();
      link[own] = 0.0;
      touched.push_back(own);
      for (std::size_t e = lg.offsets[i]; e < lg.offsets[i + 1]; ++e) {
        const std::uint32_t j = lg.targets[e];
        if (j == i) continue;
        const std::uint32_t c = comm[j];
        if (link[c] < 0.0) {
          link[c] = 0.0;
          touched.push_back(c);
        }
        link[c] += lg.weights[e];
      }
      tot[own] -= ki;
      std::uint32_t best = own;
      double best_gain = resolution * link[own] - tot[own] * ki / two_m;
      for (std::uint32_t c : touched) {
        const double gain = resolution * link[c] - tot[c] * ki / two_m;
        if (gain > best_gain + 1e-12) {
          best_gain = gain;
          best = c;
        }
      }
      tot[best] += ki;
      if (best != own) {
        comm[i] = best;
        moved = true;
      }
      for (std::uint32_t c : touched) link[c] = -1.0;
    }
    if (!moved) break;
    any_move = true;
  }
  return any_move;
}

/// Renumbers `comm` densely by first appearance; returns the number of ids.
std::uint32_t renumber(std::vector<std::uint32_t>& comm) {
  const std::uint32_t top = comm.empty() ? 0 : *std::max_element(comm.begin(), comm.end());
  std::vector<std::uint32_t> remap(comm.empty() ? 0 : std::size_t{top} + 1, kNoCommunity);
  std::uint32_t next = 0;
  for (auto& c : comm) {
    if (remap[c] == kNoCommunity) remap[c] = next++;
    c = remap[c];
  }
  return next;
}

LevelGraph aggregate(const LevelGraph& lg, const std::vector<std::uint32_t>& comm, std::uint32_t count) {
  std::vector<std::unordered_map<std::uint32_t, double>> rows(count);
  LevelGraph out;
  out.strength.assign(count, 0.0);
  out.total = lg.total;
  for (std::uint32_t i = 0; i < lg.size(); ++i) {
    out.strength[comm[i]] += lg.strength[i];
    for (std::size_t e = lg.offsets[i]; e < lg.offsets[i + 1]; ++e) {
      const std::uint32_t a = comm[i];
      const std::uint32_t b = comm[lg.targets[e]];
      if (a != b) rows[a][b] += lg.weights[e];
    }
  }
  out.offsets.assign(count + 1, 0);
  for (std::uint32_t c = 0; c < count; ++c) {
    std::vector<std::pair<std::uint32_t, double>> sorted(rows[c].begin(), rows[c].end());
    std::sort(sorted.begin(), sorted.end());
    for (const auto& [t, w] : sorted) {
      out.targets.push_back(t);
      out.weights.push_back(w);
    }
    out.offsets[c + 1] = out.targets.size();
  }
  return out;
}

}  // namespace

std::vector<std::vector<NodeId>> CommunityPartition::members() const {
  std::vector<std::vector<NodeId>> out(count);
  for (NodeId v = 0; v < assignment.size(); ++v) out[assignment[v]].push_back(v);
  return out;
}

CommunityPartition make_partition(std::vector<CommunityId> assignment, double resolution) {
  CommunityPartition p;
  p.count = renumber(assignment);
  p.assignment = std::move(assignment);
  p.resolution = resolution;
  std::vector<std::size_t> sizes(p.count, 0);
  for (auto c : p.assignment) ++sizes[c];
  p.min_size = sizes.empty() ? 0 : *std::min_element(sizes.begin(), sizes.end());
  return p;
}

double modularity(const Graph& g, std::span<const CommunityId> assignment, double resolution) {
  if (assignment.size() != g.num_nodes()) throw ContractViolation("assignment size mismatch");
  const double m = static_cast<double>(g.num_edges());
  if (m == 0.0) return 0.0;
  CommunityId top = 0;
  for (auto c : assignment) top = std::max(top, c);
  std::vector<double> inside(top + 1, 0.0);
  std::vector<double> tot(top + 1, 0.0);
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    tot[assignment[v]] += static_cast<double>(g.degree(v));
    for (NodeId u : g.neighbors(v)) {
      if (v < u && assignment[u] == assignment[v]) inside[assignment[v]] += 1.0;
    }
  }
  double q = 0.0;
  for (std::size_t c = 0; c <= top; ++c) {
    q += resolution * inside[c] / m - (tot[c] / (2.0 * m)) * (tot[c] / (2.0 * m));
  }
  return q;
}

CommunityPartition louvain(const Graph& g, double resolution, std::uint64_t seed) {
  if (!(resolution > 0.0)) throw ConfigError("Louvain resolution must be positive");
  const std::size_t n = g.num_nodes();
  std::vector<CommunityId> assignment(n);
  std::iota(assignment.begin(), assignment.end(), 0U);
  if (g.num_edges() == 0) return make_partition(std::move(assignment), resolution);

  std::mt19937_64 rng(seed);
  LevelGraph level = level_from(g);
  std::vector<std::uint32_t> comm;
  while (true) {
    const bool moved = local_moves(level, resolution, rng, comm);
    const std::uint32_t count = renumber(comm);
    for (auto& c : assignment) c = comm[c];
    if (!moved || count == level.size()) break;
    level = aggregate(level, comm, count);
  }
  return make_partition(std::move(assignment), resolution);
}

namespace {

std::vector<std::size_t> eligible_counts(const CommunityPartition& p, std::span<const char> eligible) {
  std::vector<std::size_t> counts(p.count, 0);
  for (NodeId v = 0; v < p.assignment.size(); ++v) {
    if (eligible[v]) ++counts[p.assignment[v]];
  }
  return counts;
}

bool meets_minimum(const CommunityPartition& p, std::span<const char> eligible, std::size_t k) {
  const auto counts = eligible_counts(p, eligible);
  return std::all_of(counts.begin(), counts.end(), [k](std::size_t c) { return c >= k; });
}

/// Folds each community with fewer than k eligible nodes into the community
/// it is most connected to (then: most eligible nodes, then: lowest id).
void merge_undersized(const Graph& g, CommunityPartition& p, std::span<const char> eligible, std::size_t k) {
  while (true) {
    const auto counts = eligible_counts(p, eligible);
    CommunityId worst = kNoCommunity;
    for (CommunityId c = 0; c < p.count; ++c) {
      if (counts[c] < k && (worst == kNoCommunity || counts[c] < counts[worst])) worst = c;
    }
    if (worst == kNoCommunity || p.count < 2) return;

    std::vector<std::size_t> links(p.count, 0);
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      if (p.assignment[v] != worst) continue;
      for (NodeId u : g.neighbors(v)) ++links[p.assignment[u]];
    }
    CommunityId target = kNoCommunity;
    for (CommunityId c = 0; c < p.count; ++c) {
      if (c == worst) continue;
      if (target == kNoCommunity || links[c] > links[target] ||
          (links[c] == links[target] && counts[c] > counts[target])) {
        target = c;
      }
    }
    for (auto& c : p.assignment) {
      if (c == worst) c = target;
    }
    const double resolution = p.resolution;
    const int steps = p.resolution_steps;
    const std::size_t merges = p.fallback_merges + 1;
    p = make_partition(std::move(p.assignment), resolution);
    p.resolution_steps = steps;
    p.fallback_merges = merges;
  }
}

}  // namespace

CommunityPartition partition_with_min_size(const Graph& g, std::size_t k, std::uint64_t seed,
                                           std::span<const char> eligible) {
  if (k < 2) throw ConfigError("anonymity level k must be at least 2");
  if (g.num_nodes() < k) {
    throw InfeasibleError("graph has " + std::to_string(g.num_nodes()) + " nodes, fewer than k = " +
                          std::to_string(k));
  }
  std::vector<char> all;
  if (eligible.empty()) {
    all.assign(g.num_nodes(), 1);
    eligible = all;
  }
  if (eligible.size() != g.num_nodes()) throw ContractViolation("eligibility mask size mismatch");
  const auto total = static_cast<std::size_t>(std::count(eligible.begin(), eligible.end(), 1));
  if (total == 0) return louvain(g, 1.0, seed);
  if (total < k) {
    throw InfeasibleError("only " + std::to_string(total) + " eligible nodes, fewer than k = " +
                          std::to_string(k));
  }

  double resolution = 1.0;
  CommunityPartition p;
  for (int step = 0; step < kMaxResolutionSteps; ++step) {
    p = louvain(g, resolution, seed);
    p.resolution_steps = step;
    if (meets_minimum(p, eligible, k)) return p;
    resolution *= kResolutionGrowth;
  }
  merge_undersized(g, p, eligible, k);
  return p;
}

void write_partition_csv(const Graph& g, const CommunityPartition& p, std::ostream& out) {
  out << "node_id,community_id\n";
  for (NodeId v = 0; v < g.num_nodes(); ++v) out << g.label(v) << ',' << p.assignment[v] << '\n';
}

CommunityPartition read_partition_csv(const Graph& g, std::istream& in) {
  std::unordered_map<std::string, NodeId> ids;
  for (NodeId v = 0; v < g.num_nodes(); ++v) ids.emplace(g.label(v), v);
  std::vector<CommunityId> assignment(g.num_nodes(), kNoCommunity);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || (line_no == 1 && line.starts_with("node_id"))) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError("expected 'node_id,community_id'", line_no);
    const auto it = ids.find(line.substr(0, comma));
    if (it == ids.end()) throw LookupError("partition names unknown node '" + line.substr(0, comma) + "'");
    try {
      assignment[it->second] = static_cast<CommunityId>(std::stoul(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw ParseError("bad community id '" + line.substr(comma + 1) + "'", line_no);
    }
  }
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (assignment[v] == kNoCommunity) throw ParseError("node '" + g.label(v) + "' has no community", 0);
  }
  return make_partition(std::move(assignment));
}

}  // namespace kanon
