#include <algorithm>
#include <map>
#include <string>

#include "kanon/anonymize.hpp"
#include "kanon/evaluate.hpp"

namespace kanon {
namespace {

void check_clustering(const AnonymizedGraph& a, AuditReport& r) {
  const auto& prov = a.provenance;
  if (prov.supernodes.size() != a.published.num_nodes()) {
    r.fail("provenance lists " + std::to_string(prov.supernodes.size()) + " supernodes for " +
           std::to_string(a.published.num_nodes()) + " published nodes");
    return;
  }
  std::vector<int> seen(prov.original_nodes, 0);
  std::vector<char> excluded(prov.original_nodes, 0);
  for (NodeId v : prov.excluded) {
    if (v < prov.original_nodes) excluded[v] = 1;
  }
  for (const auto& sn : prov.supernodes) {
    for (NodeId v : sn.contents) {
      if (v >= prov.original_nodes) {
        r.fail("supernode " + std::to_string(sn.id) + " holds unknown node " + std::to_string(v), {sn.id});
        continue;
      }
      ++seen[v];
    }
    const bool excluded_singleton = sn.size() == 1 && excluded[sn.contents[0]];
    if (excluded_singleton) continue;
    for (NodeId v : sn.contents) {
      if (v < prov.original_nodes && excluded[v]) {
        r.fail("excluded node " + std::to_string(v) + " was merged into supernode " + std::to_string(sn.id), {sn.id});
      }
    }
    if (sn.size() < a.k || sn.size() > 2 * a.k - 1) {
      r.fail("supernode " + std::to_string(sn.id) + " has " + std::to_string(sn.size()) + " members, outside [" +
                 std::to_string(a.k) + ", " + std::to_string(2 * a.k - 1) + "]",
             {sn.id});
    }
  }
  for (NodeId v = 0; v < prov.original_nodes; ++v) {
    if (seen[v] != 1) r.fail("original node " + std::to_string(v) + " appears in " + std::to_string(seen[v]) + " supernodes");
  }
}

void check_modification(const AnonymizedGraph& a, AuditReport& r) {
  const auto& prov = a.provenance;
  const std::size_t n = a.published.num_nodes();
  if (n < prov.original_nodes) r.fail("modification removed original nodes");
  for (NodeId d : prov.dummies) {
    if (d < prov.original_nodes || d >= n) r.fail("dummy id " + std::to_string(d) + " out of range", {d});
  }
  std::vector<int> seen(prov.original_nodes, 0);
  for (NodeId v : prov.excluded) {
    if (v < prov.original_nodes) ++seen[v];
  }
  for (std::size_t c = 0; c < prov.classes.size(); ++c) {
    const auto& cls = prov.classes[c];
    if (cls.size() < a.k) {
      r.fail("class " + std::to_string(c) + " has " + std::to_string(cls.size()) + " members, fewer than k = " +
                 std::to_string(a.k),
             cls);
    }
    std::map<OneHopSignature, std::size_t> sigs;
    for (NodeId v : cls) {
      if (v >= prov.original_nodes) {
        r.fail("class " + std::to_string(c) + " holds non-original node " + std::to_string(v), {v});
        continue;
      }
      ++seen[v];
      ++sigs[one_hop_signature(a.published, v)];
    }
    if (sigs.size() > 1) r.fail("members of class " + std::to_string(c) + " differ in their 1-hop signature", cls);
  }
  for (NodeId v = 0; v < prov.original_nodes; ++v) {
    if (seen[v] != 1) r.fail("original node " + std::to_string(v) + " is listed " + std::to_string(seen[v]) + " times", {v});
  }
}

}  // namespace

AuditReport verify_k_anonymity(const AnonymizedGraph& a) {
  AuditReport r;
  if (a.k < 2) {
    r.fail("k = " + std::to_string(a.k) + " is below 2");
    return r;
  }
  if (a.provenance.kind == ProvenanceKind::kClustering) {
    check_clustering(a, r);
  } else {
    check_modification(a, r);
  }
  if (!r.passed) return r;

  const auto model = candidate_model(a);
  const auto sizes = candidate_set_sizes(a.published, model, QueryId::kH1, {});
  std::vector<NodeId> small;
  for (NodeId p = 0; p < a.published.num_nodes(); ++p) {
    if (model.population[p] && sizes[p] < a.k) small.push_back(p);
  }
  if (!small.empty()) {
    r.fail(std::to_string(small.size()) + " published nodes have an H1 candidate set smaller than k", small);
  }
  return r;
}

AuditReport audit_restrictions(const Graph& original, const AnonymizedGraph& a, const RestrictionContext& ctx) {
  AuditReport r;
  if (!is_restricted(a.method)) return r;
  const std::size_t n = original.num_nodes();
  if (ctx.eligible.size() != n || a.provenance.original_nodes != n) {
    r.fail("restriction context, provenance and original graph disagree on the node count");
    return r;
  }
  for (const auto& grp : a.provenance.groups) {
    for (NodeId v : grp) {
      if (!ctx.is_eligible(v)) r.fail("role node " + original.label(v) + " was perturbed", {v});
      if (ctx.partition[v] != ctx.partition[grp.front()]) {
        r.fail("group with " + original.label(grp.front()) + " crosses into the community of " + original.label(v),
               {grp.front(), v});
      }
    }
  }
  if (a.provenance.kind == ProvenanceKind::kClustering) {
    for (const auto& sn : a.provenance.supernodes) {
      if (sn.size() < 2) continue;
      for (NodeId v : sn.contents) {
        if (!ctx.is_eligible(v)) r.fail("role node " + original.label(v) + " sits in a supernode", {v});
      }
    }
  } else {
    for (NodeId v = 0; v < n; ++v) {
      if (ctx.is_eligible(v)) continue;
      const auto before = original.neighbors(v);
      const auto after = a.published.neighbors(v);
      if (!std::equal(before.begin(), before.end(), after.begin(), after.end())) {
        r.fail("role node " + original.label(v) + " changed its neighborhood", {v});
      }
    }
  }
  return r;
}

}  // namespace kanon
