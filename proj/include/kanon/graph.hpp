#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace kanon {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Immutable simple undirected graph in CSR form.
///
/// Node ids are dense (0..n-1). Every node carries an external label, which is
/// the token used for it in edge-list files. Construction normalizes the input:
/// self-loops are dropped, both directions are stored, duplicates collapse.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph over `n` nodes. Labels default to the decimal node id.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges,
                          std::vector<std::string> labels = {});

  std::size_t num_nodes() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t num_edges() const noexcept { return targets_.size() / 2; }
  bool empty() const noexcept { return num_nodes() == 0; }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }
  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
  bool has_edge(NodeId u, NodeId v) const;

  const std::string& label(NodeId v) const { return labels_[v]; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  /// Edge list with u < v, sorted lexicographically.
  std::vector<Edge> edges() const;

  /// Throws LookupError when `v` is not a node of this graph.
  void require_node(NodeId v) const;

  const std::vector<std::size_t>& offsets() const noexcept { return offsets_; }
  const std::vector<NodeId>& targets() const noexcept { return targets_; }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> targets_;
  std::vector<std::string> labels_;
};

/// Node/edge counts plus a content hash; used to reject stale artifacts.
struct GraphFingerprint {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::uint64_t hash = 0;

  friend bool operator==(const GraphFingerprint&, const GraphFingerprint&) = default;
};

GraphFingerprint fingerprint(const Graph& g);

/// 1-hop rooted subgraph around `reference`.
///
/// `members[0]` is the reference; the remaining members are its neighbors in
/// ascending id order. Local indices below refer to positions in `members`.
struct NeighborhoodSubgraph {
  NodeId reference = 0;
  std::vector<NodeId> members;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> internal_edges;
  std::vector<std::uint32_t> internal_degree;
  std::vector<std::uint32_t> external_degree;

  std::size_t size() const noexcept { return members.size(); }
  std::size_t edge_count() const noexcept { return internal_edges.size(); }
};

NeighborhoodSubgraph neighborhood(const Graph& g, NodeId v);

struct Supernode {
  NodeId id = 0;
  std::vector<NodeId> contents;  // sorted

  std::size_t size() const noexcept { return contents.size(); }
};

/// Result of collapsing groups of nodes. `node_map[v]` is the id of the node
/// that absorbed input node `v`. `supernodes[i].id == i` and its contents are
/// input node ids; every output node has an entry (singletons included).
struct Contraction {
  Graph graph;
  std::vector<Supernode> supernodes;
  std::vector<NodeId> node_map;
};

/// Quotient graph: each group becomes one node, edges inside a group vanish,
/// parallel edges collapse. Nodes outside every group stay as singletons.
/// Output ids are ordered by the smallest input id each node contains.
Contraction contract(const Graph& g, std::span<const std::vector<NodeId>> groups);

/// Same graph with node ids reassigned so that labels ascend (numerically
/// when every label is an integer, lexicographically otherwise).
Graph sort_by_label(const Graph& g);

/// Merges `a` and `b` into one node. Throws ContractViolation when a == b.
Contraction merge_nodes(const Graph& g, NodeId a, NodeId b);

// SNAP edge-list text.

struct EdgeListStats {
  std::size_t lines = 0;
  std::size_t self_loops = 0;
  std::size_t arcs = 0;  // distinct ordered (u, v) pairs, u != v
};

/// Parses "u<ws>v" lines; '#' lines are comments except "# isolated <label>",
/// which declares a node without edges (written by write_edge_list).
Graph parse_edge_list(std::istream& in, EdgeListStats* stats = nullptr);

/// Reads a file; ".gz" files are decompressed transparently.
Graph load_edge_list(const std::filesystem::path& path, EdgeListStats* stats = nullptr);

void write_edge_list(const Graph& g, std::ostream& out);
void write_edge_list(const Graph& g, const std::filesystem::path& path);

}  // namespace kanon
