#include "kanon/provenance.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>

#include "kanon/error.hpp"

namespace kanon {
namespace {

template <typename T, typename F>
void join(std::ostream& out, const std::vector<T>& items, F&& fmt) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out << ',';
    out << fmt(items[i]);
  }
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) out.push_back(item);
  return out;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

void write_provenance(const AnonymizedGraph& a, std::ostream& out) {
  const auto& prov = a.provenance;
  const bool clustering = prov.kind == ProvenanceKind::kClustering;
  out << "# kind=" << (clustering ? "clustering" : "modification") << '\n';
  out << "# method=" << method_name(a.method) << '\n';
  out << "# k=" << a.k << '\n';
  out << "# seed=" << a.seed << '\n';
  out << "# original_nodes=" << prov.original_nodes << '\n';
  out << "labels: ";
  join(out, prov.original_labels, [](const std::string& s) { return s; });
  out << '\n';
  auto label = [&](NodeId v) { return prov.original_labels.at(v); };
  auto id = [](NodeId v) { return std::to_string(v); };
  if (clustering) {
    for (const auto& sn : prov.supernodes) {
      out << sn.id << ": ";
      join(out, sn.contents, label);
      out << '\n';
    }
    out << "excluded: ";
    join(out, prov.excluded, label);
    out << '\n';
    return;
  }
  for (std::size_t c = 0; c < prov.classes.size(); ++c) {
    out << c << ": ";
    join(out, prov.classes[c], id);
    out << '\n';
  }
  out << "excluded: ";
  join(out, prov.excluded, id);
  out << '\n';
  out << "dummy: ";
  join(out, prov.dummies, id);
  out << '\n';
  for (const auto& grp : prov.groups) {
    out << "group: ";
    join(out, grp, id);
    out << '\n';
  }
}

void write_provenance(const AnonymizedGraph& a, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_provenance(a, out);
  if (!out) throw IoError("write failed for " + path.string());
}

AnonymizedGraph read_provenance(std::istream& in, Graph published) {
  AnonymizedGraph a;
  a.published = std::move(published);
  auto& prov = a.provenance;
  std::string kind;
  std::unordered_map<std::string, NodeId> by_label;
  std::string line;
  std::size_t line_no = 0;

  auto parse_id = [&](const std::string& tok) -> NodeId {
    try {
      std::size_t pos = 0;
      const auto v = std::stoul(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument(tok);
      return static_cast<NodeId>(v);
    } catch (const std::exception&) {
      throw ParseError("bad node id '" + tok + "'", line_no);
    }
  };
  auto parse_label = [&](const std::string& tok) -> NodeId {
    const auto it = by_label.find(tok);
    if (it == by_label.end()) throw ParseError("unknown original label '" + tok + "'", line_no);
    return it->second;
  };
  auto parse_list = [&](const std::string& body, bool labels) {
    std::vector<NodeId> out;
    for (const auto& tok : split(body)) out.push_back(labels ? parse_label(trim(tok)) : parse_id(trim(tok)));
    return out;
  };

  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = trim(line.substr(1, eq - 1));
      const std::string val = trim(line.substr(eq + 1));
      try {
        if (key == "kind") kind = val;
        else if (key == "method") a.method = parse_method(val);
        else if (key == "k") a.k = std::stoull(val);
        else if (key == "seed") a.seed = std::stoull(val);
        else if (key == "original_nodes") prov.original_nodes = std::stoull(val);
      } catch (const ConfigError&) {
        throw ParseError("unknown method '" + val + "'", line_no);
      } catch (const std::exception&) {
        throw ParseError("bad header value for '" + key + "'", line_no);
      }
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw ParseError("expected '<key>: <list>'", line_no);
    const std::string key = trim(line.substr(0, colon));
    const std::string body = trim(line.substr(colon + 1));
    const bool clustering = kind == "clustering";
    if (kind != "clustering" && kind != "modification") throw ParseError("sidecar has no kind header", line_no);
    if (key == "labels") {
      prov.original_labels = split(body);
      for (NodeId v = 0; v < prov.original_labels.size(); ++v) by_label.emplace(prov.original_labels[v], v);
    } else if (key == "excluded") {
      prov.excluded = parse_list(body, clustering);
    } else if (key == "dummy") {
      prov.dummies = parse_list(body, false);
    } else if (key == "group") {
      prov.groups.push_back(parse_list(body, false));
    } else if (clustering) {
      Supernode sn{parse_id(key), parse_list(body, true)};
      std::sort(sn.contents.begin(), sn.contents.end());
      prov.supernodes.push_back(std::move(sn));
    } else {
      const NodeId c = parse_id(key);
      if (c != prov.classes.size()) throw ParseError("class ids must be consecutive from 0", line_no);
      prov.classes.push_back(parse_list(body, false));
    }
  }
  if (kind.empty()) throw ParseError("sidecar has no kind header", 0);
  prov.kind = kind == "clustering" ? ProvenanceKind::kClustering : ProvenanceKind::kModification;
  if (prov.original_labels.size() != prov.original_nodes) {
    throw ContractViolation("sidecar lists " + std::to_string(prov.original_labels.size()) + " labels for " +
                            std::to_string(prov.original_nodes) + " original nodes");
  }
  for (NodeId p = 0; p < a.published.num_nodes(); ++p) {
    if (a.published.label(p) != std::to_string(p)) {
      throw ContractViolation("published node " + std::to_string(p) + " is labelled '" + a.published.label(p) +
                              "'; expected dense ids (see sort_by_label)");
    }
  }
  if (prov.kind == ProvenanceKind::kClustering) {
    std::sort(prov.supernodes.begin(), prov.supernodes.end(),
              [](const Supernode& x, const Supernode& y) { return x.id < y.id; });
    for (NodeId p = 0; p < prov.supernodes.size(); ++p) {
      if (prov.supernodes[p].id != p) throw ContractViolation("supernode ids must be 0..n-1");
    }
    if (prov.supernodes.size() != a.published.num_nodes()) {
      throw ContractViolation("sidecar describes " + std::to_string(prov.supernodes.size()) +
                              " published nodes, graph has " + std::to_string(a.published.num_nodes()));
    }
    for (const auto& sn : prov.supernodes) {
      if (sn.size() > 1) prov.groups.push_back(sn.contents);
    }
  } else if (a.published.num_nodes() < prov.original_nodes) {
    throw ContractViolation("published graph is smaller than the original");
  }
  return a;
}

AnonymizedGraph read_provenance(const std::filesystem::path& path, Graph published) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_provenance(in, std::move(published));
}

}  // namespace kanon
