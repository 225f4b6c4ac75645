#include "kanon/vf2.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <vector>

namespace kanon {
namespace {

class BitMatrix {
 public:
  explicit BitMatrix(std::size_t n) : words_((n + 63) / 64), bits_(n * words_, 0) {}
  void set(std::size_t i, std::size_t j) { bits_[i * words_ + j / 64] |= std::uint64_t{1} << (j % 64); }
  bool get(std::size_t i, std::size_t j) const { return (bits_[i * words_ + j / 64] >> (j % 64)) & 1U; }

 private:
  std::size_t words_;
  std::vector<std::uint64_t> bits_;
};

struct Local {
  std::size_t n;
  BitMatrix adj;
  std::vector<std::vector<std::uint32_t>> nbr;
  std::vector<std::uint32_t> ext;

  explicit Local(const NeighborhoodSubgraph& s) : n(s.size()), adj(s.size()), nbr(s.size()), ext(s.external_degree) {
    for (auto [a, b] : s.internal_edges) {
      adj.set(a, b);
      adj.set(b, a);
      nbr[a].push_back(b);
      nbr[b].push_back(a);
    }
  }
};

/// Joint color refinement over both subgraphs. Returns false when the color
/// histograms differ, which rules out an isomorphism.
bool refine(const Local& a, const Local& b, std::vector<std::uint32_t>& ca, std::vector<std::uint32_t>& cb) {
  ca.assign(a.n, 0);
  cb.assign(b.n, 0);
  for (std::size_t i = 0; i < a.n; ++i) ca[i] = (i == 0 ? 1U << 31 : 0U) | static_cast<std::uint32_t>(a.nbr[i].size());
  for (std::size_t i = 0; i < b.n; ++i) cb[i] = (i == 0 ? 1U << 31 : 0U) | static_cast<std::uint32_t>(b.nbr[i].size());

  std::size_t classes = 0;
  while (true) {
    std::map<std::vector<std::uint32_t>, std::uint32_t> ids;
    auto signature = [](const Local& g, const std::vector<std::uint32_t>& c, std::size_t i) {
      std::vector<std::uint32_t> sig;
      sig.reserve(g.nbr[i].size() + 1);
      for (auto j : g.nbr[i]) sig.push_back(c[j]);
      std::sort(sig.begin(), sig.end());
      sig.insert(sig.begin(), c[i]);
      return sig;
    };
    std::vector<std::uint32_t> na(a.n), nb(b.n);
    for (std::size_t i = 0; i < a.n; ++i) na[i] = ids.try_emplace(signature(a, ca, i), ids.size()).first->second;
    for (std::size_t i = 0; i < b.n; ++i) nb[i] = ids.try_emplace(signature(b, cb, i), ids.size()).first->second;
    std::vector<std::uint32_t> ha(ids.size(), 0), hb(ids.size(), 0);
    for (auto c : na) ++ha[c];
    for (auto c : nb) ++hb[c];
    if (ha != hb) return false;
    ca = std::move(na);
    cb = std::move(nb);
    if (ids.size() == classes) return true;
    classes = ids.size();
  }
}

/// Depth-first matcher over color-compatible candidates. In optimizing mode
/// it is a branch-and-bound on the external-degree mismatch.
class Matcher {
 public:
  Matcher(const Local& a, const Local& b, std::vector<std::uint32_t> ca, std::vector<std::uint32_t> cb,
          bool optimize, std::size_t budget)
      : a_(a), b_(b), ca_(std::move(ca)), cb_(std::move(cb)), optimize_(optimize), budget_(budget) {
    build_order();
    map_.assign(a_.n, kNone);
    used_.assign(b_.n, 0);
  }

  void run() {
    if (optimize_) {
      global_bound_ = remaining_bound(0);
    }
    search(0, 0);
  }

  bool found() const { return best_ != kInfinite; }
  std::uint64_t best_cost() const { return best_; }
  bool exhausted() const { return exhausted_; }

 private:
  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  static constexpr std::uint64_t kInfinite = std::numeric_limits<std::uint64_t>::max();

  void build_order() {
    // Root first, then repeatedly the unplaced node with most placed
    // neighbors, ties by smaller color class, then lower index.
    std::vector<std::size_t> class_size;
    for (auto c : ca_) {
      if (c >= class_size.size()) class_size.resize(c + 1, 0);
      ++class_size[c];
    }
    std::vector<char> placed(a_.n, 0);
    std::vector<std::uint32_t> links(a_.n, 0);
    order_.reserve(a_.n);
    for (std::size_t step = 0; step < a_.n; ++step) {
      std::size_t pick = a_.n;
      for (std::size_t i = 0; i < a_.n; ++i) {
        if (placed[i]) continue;
        if (step == 0) {
          pick = 0;
          break;
        }
        if (pick == a_.n || links[i] > links[pick] ||
            (links[i] == links[pick] && class_size[ca_[i]] < class_size[ca_[pick]])) {
          pick = i;
        }
      }
      placed[pick] = 1;
      order_.push_back(static_cast<std::uint32_t>(pick));
      for (auto j : a_.nbr[pick]) ++links[j];
    }
    if (optimize_) {
      candidates_.resize(a_.n);
      for (std::size_t i = 0; i < a_.n; ++i) {
        for (std::uint32_t j = 0; j < b_.n; ++j) {
          if (cb_[j] == ca_[i]) candidates_[i].push_back(j);
        }
        const auto e = a_.ext[i];
        std::stable_sort(candidates_[i].begin(), candidates_[i].end(), [&](std::uint32_t x, std::uint32_t y) {
          return diff(e, b_.ext[x]) < diff(e, b_.ext[y]);
        });
      }
    } else {
      candidates_.resize(a_.n);
      for (std::size_t i = 0; i < a_.n; ++i) {
        for (std::uint32_t j = 0; j < b_.n; ++j) {
          if (cb_[j] == ca_[i]) candidates_[i].push_back(j);
        }
      }
    }
  }

  static std::uint64_t diff(std::uint32_t x, std::uint32_t y) { return x > y ? x - y : y - x; }

  /// Lower bound on the mismatch of the unplaced nodes: per color class,
  /// matching sorted external degrees is optimal when structure is ignored.
  std::uint64_t remaining_bound(std::size_t depth) const {
    std::map<std::uint32_t, std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>> by_class;
    for (std::size_t d = depth; d < order_.size(); ++d) by_class[ca_[order_[d]]].first.push_back(a_.ext[order_[d]]);
    for (std::uint32_t j = 0; j < b_.n; ++j) {
      if (!used_[j]) {
        auto it = by_class.find(cb_[j]);
        if (it != by_class.end()) it->second.second.push_back(b_.ext[j]);
      }
    }
    std::uint64_t bound = 0;
    for (auto& [c, lists] : by_class) {
      auto& [x, y] = lists;
      std::sort(x.begin(), x.end());
      std::sort(y.begin(), y.end());
      for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) bound += diff(x[i], y[i]);
    }
    return bound;
  }

  bool feasible(std::uint32_t i, std::uint32_t j) const {
    for (std::size_t d = 0; d < depth_; ++d) {
      const auto pi = order_[d];
      if (a_.adj.get(i, pi) != b_.adj.get(j, map_[pi])) return false;
    }
    return true;
  }

  /// Returns true when the search should stop.
  bool search(std::size_t depth, std::uint64_t cost) {
    if (depth == a_.n) {
      best_ = std::min(best_, cost);
      return !optimize_ || best_ == global_bound_;
    }
    if (++states_ > budget_) {
      exhausted_ = true;
      return true;
    }
    if (optimize_ && best_ != kInfinite && cost + remaining_bound(depth) >= best_) return false;
    const auto i = order_[depth];
    depth_ = depth;
    for (auto j : candidates_[i]) {
      if (used_[j] || !feasible(i, j)) continue;
      map_[i] = j;
      used_[j] = 1;
      const bool stop = search(depth + 1, cost + diff(a_.ext[i], b_.ext[j]));
      used_[j] = 0;
      map_[i] = kNone;
      depth_ = depth;
      if (stop) return true;
    }
    return false;
  }

  const Local& a_;
  const Local& b_;
  std::vector<std::uint32_t> ca_, cb_;
  bool optimize_;
  std::size_t budget_;
  std::vector<std::uint32_t> order_;
  std::vector<std::vector<std::uint32_t>> candidates_;
  std::vector<std::uint32_t> map_;
  std::vector<char> used_;
  std::size_t depth_ = 0;
  std::size_t states_ = 0;
  bool exhausted_ = false;
  std::uint64_t best_ = kInfinite;
  std::uint64_t global_bound_ = 0;
};

bool cheap_reject(const NeighborhoodSubgraph& s1, const NeighborhoodSubgraph& s2) {
  if (s1.size() != s2.size() || s1.edge_count() != s2.edge_count()) return true;
  if (s1.internal_degree.empty()) return false;
  if (s1.internal_degree[0] != s2.internal_degree[0]) return true;
  auto d1 = s1.internal_degree;
  auto d2 = s2.internal_degree;
  std::sort(d1.begin(), d1.end());
  std::sort(d2.begin(), d2.end());
  return d1 != d2;
}

}  // namespace

bool vf2_isomorphic(const NeighborhoodSubgraph& s1, const NeighborhoodSubgraph& s2) {
  if (cheap_reject(s1, s2)) return false;
  if (s1.size() == 0) return true;
  Local a(s1), b(s2);
  std::vector<std::uint32_t> ca, cb;
  if (!refine(a, b, ca, cb)) return false;
  Matcher m(a, b, std::move(ca), std::move(cb), false, std::numeric_limits<std::size_t>::max());
  m.run();
  return m.found();
}

MatchScore vf2d_score(const NeighborhoodSubgraph& s1, const NeighborhoodSubgraph& s2, const FidelityOptions& options) {
  MatchScore out;
  if (cheap_reject(s1, s2)) return out;
  if (s1.size() == 0) {
    out.isomorphic = true;
    out.degree_fidelity = 1.0;
    return out;
  }
  Local a(s1), b(s2);
  std::vector<std::uint32_t> ca, cb;
  if (!refine(a, b, ca, cb)) return out;

  Matcher opt(a, b, ca, cb, true, options.state_budget);
  opt.run();
  std::uint64_t cost = 0;
  if (opt.found()) {
    cost = opt.best_cost();
    out.exhaustive = !opt.exhausted();
  } else if (opt.exhausted()) {
    // No mapping within budget: fall back to the first isomorphism found.
    out.exhaustive = false;
    Matcher any(a, b, std::move(ca), std::move(cb), false, std::numeric_limits<std::size_t>::max());
    any.run();
    if (!any.found()) return out;
    cost = any.best_cost();
  } else {
    return out;
  }

  out.isomorphic = true;
  double denom = 0.0;
  if (options.norm == FidelityNorm::kExternalSum) {
    for (auto e : a.ext) denom += e;
    for (auto e : b.ext) denom += e;
  } else {
    denom = static_cast<double>(a.n) * options.max_spread;
  }
  out.degree_fidelity = denom > 0.0 ? std::clamp(1.0 - static_cast<double>(cost) / denom, 0.0, 1.0) : 1.0;
  return out;
}

}  // namespace kanon
