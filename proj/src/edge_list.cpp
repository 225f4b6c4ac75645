#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>
#include <unordered_map>

#include "kanon/error.hpp"
#include "kanon/graph.hpp"

namespace kanon {
namespace {

constexpr std::string_view kIsolatedTag = "# isolated ";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool parse_int(std::string_view token, std::int64_t& out) {
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

class LabelTable {
 public:
  NodeId intern(std::int64_t value) {
    auto [it, inserted] = ids_.try_emplace(value, static_cast<NodeId>(labels_.size()));
    if (inserted) labels_.push_back(std::to_string(value));
    return it->second;
  }
  std::vector<std::string> release() { return std::move(labels_); }
  std::size_t size() const { return labels_.size(); }

 private:
  std::unordered_map<std::int64_t, NodeId> ids_;
  std::vector<std::string> labels_;
};

std::string read_gzip(const std::filesystem::path& path) {
  gzFile file = gzopen(path.c_str(), "rb");
  if (file == nullptr) throw IoError("cannot open " + path.string());
  std::string content;
  char buffer[1 << 16];
  int got = 0;
  while ((got = gzread(file, buffer, sizeof buffer)) > 0) content.append(buffer, got);
  const bool failed = got < 0;
  gzclose(file);
  if (failed) throw IoError("corrupt gzip stream in " + path.string());
  return content;
}

}  // namespace

Graph parse_edge_list(std::istream& in, EdgeListStats* stats) {
  LabelTable labels;
  std::vector<Edge> edges;
  EdgeListStats local;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (line.starts_with(kIsolatedTag)) {
        std::int64_t value = 0;
        if (!parse_int(trim(line.substr(kIsolatedTag.size())), value)) {
          throw ParseError("bad isolated-node declaration '" + std::string(line) + "'", line_no);
        }
        labels.intern(value);
      }
      continue;
    }
    ++local.lines;
    std::string_view tokens[3];
    std::size_t count = 0;
    std::size_t pos = 0;
    while (pos < line.size() && count < 3) {
      const auto start = line.find_first_not_of(" \t", pos);
      if (start == std::string_view::npos) break;
      const auto stop = std::min(line.find_first_of(" \t", start), line.size());
      tokens[count++] = line.substr(start, stop - start);
      pos = stop;
    }
    std::int64_t a = 0;
    std::int64_t b = 0;
    if (count != 2 || !parse_int(tokens[0], a) || !parse_int(tokens[1], b)) {
      throw ParseError("expected two integer node ids, got '" + std::string(line) + "'", line_no);
    }
    if (a == b) {
      ++local.self_loops;
      continue;
    }
    const NodeId u = labels.intern(a);
    const NodeId v = labels.intern(b);
    edges.emplace_back(u, v);
  }
  if (in.bad()) throw IoError("read failure after line " + std::to_string(line_no));

  auto arcs = edges;
  std::sort(arcs.begin(), arcs.end());
  local.arcs = static_cast<std::size_t>(std::unique(arcs.begin(), arcs.end()) - arcs.begin());
  if (stats != nullptr) *stats = local;

  const std::size_t n = labels.size();
  return Graph::from_edges(n, edges, labels.release());
}

Graph load_edge_list(const std::filesystem::path& path, EdgeListStats* stats) {
  if (!std::filesystem::exists(path)) throw IoError("no such file: " + path.string());
  if (path.extension() == ".gz") {
    std::istringstream in(read_gzip(path));
    return parse_edge_list(in, stats);
  }
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return parse_edge_list(in, stats);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

void write_edge_list(const Graph& g, std::ostream& out) {
  // Labels are integers by construction when read from disk; fall back to
  // lexicographic order for anything else.
  std::vector<std::int64_t> value(g.num_nodes());
  bool numeric = true;
  for (NodeId v = 0; v < g.num_nodes(); ++v) numeric = numeric && parse_int(g.label(v), value[v]);
  auto less = [&](NodeId a, NodeId b) {
    return numeric ? value[a] < value[b] : g.label(a) < g.label(b);
  };

  std::vector<Edge> edges = g.edges();
  for (auto& [u, v] : edges) {
    if (less(v, u)) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end(), [&](const Edge& x, const Edge& y) {
    if (x.first != y.first) return less(x.first, y.first);
    return less(x.second, y.second);
  });

  out << "# Nodes: " << g.num_nodes() << " Edges: " << g.num_edges() << '\n';
  std::vector<NodeId> isolated;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (g.degree(v) == 0) isolated.push_back(v);
  }
  std::sort(isolated.begin(), isolated.end(), less);
  for (NodeId v : isolated) out << kIsolatedTag << g.label(v) << '\n';
  for (auto [u, v] : edges) out << g.label(u) << '\t' << g.label(v) << '\n';
}

void write_edge_list(const Graph& g, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_edge_list(g, out);
  if (!out) throw IoError("write failure on " + path.string());
}

}  // namespace kanon
