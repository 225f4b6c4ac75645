#include "kanon/reports.hpp"

#include <cstdio>
#include <ostream>

#include <json.hpp>

namespace kanon {

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void write_loss_csv(const CellReport& cell, std::ostream& out) {
  out << "method,k,metric,value\n";
  for (std::size_t i = 0; i < std::size(kLossMetrics); ++i) {
    out << cell.method << ',' << cell.k << ',' << metric_name(kLossMetrics[i]) << ','
        << format_number(cell.loss.metric[i]) << '\n';
  }
  out << cell.method << ',' << cell.k << ",communities_raw," << format_number(cell.loss.community.raw) << '\n';
  out << cell.method << ',' << cell.k << ",communities_norm," << format_number(cell.loss.community.normalized) << '\n';
}

void write_risk_csv(std::string_view method, std::size_t k, const RiskReport& risk, std::ostream& out) {
  out << "method,k,query,bucket,fraction\n";
  for (const auto& q : risk.queries) {
    const auto labels = bucket_labels(q.query);
    for (std::size_t b = 0; b < labels.size(); ++b) {
      out << method << ',' << k << ',' << query_name(q.query) << ',' << labels[b] << ','
          << format_number(q.fractions[b]) << '\n';
    }
  }
}

namespace {

nlohmann::ordered_json audit_json(const AuditReport& r) {
  nlohmann::ordered_json j;
  j["passed"] = r.passed;
  j["failures"] = r.failures;
  return j;
}

}  // namespace

void write_report_json(const CellReport& cell, std::ostream& out) {
  nlohmann::ordered_json j;
  j["method"] = cell.method;
  j["k"] = cell.k;
  j["seed"] = cell.seed;
  j["status"] = cell.ok ? "ok" : "failed";
  if (!cell.error.empty()) j["error"] = cell.error;
  j["weights"] = cell.weights.w;
  j["context"] = {{"theta", cell.theta},
                  {"hubs", cell.hubs},
                  {"bridges", cell.bridges},
                  {"communities", cell.context_communities},
                  {"resolution", cell.resolution},
                  {"resolution_steps", cell.resolution_steps},
                  {"fallback_merges", cell.fallback_merges}};
  j["leak"] = {{"roles", cell.leak.roles},
               {"role_density", cell.leak.role_density},
               {"unmatched_fraction", cell.leak.unmatched_fraction},
               {"probability", cell.leak.probability},
               {"diversity_reduction", cell.leak.diversity_reduction}};
  if (cell.ok) {
    j["published"] = {{"nodes", cell.published_nodes}, {"edges", cell.published_edges}};
    nlohmann::ordered_json loss;
    for (std::size_t i = 0; i < std::size(kLossMetrics); ++i) loss[std::string(metric_name(kLossMetrics[i]))] = cell.loss.metric[i];
    loss["communities_before"] = cell.loss.communities_before;
    loss["communities_after"] = cell.loss.communities_after;
    loss["communities_raw"] = cell.loss.community.raw;
    loss["communities_norm"] = cell.loss.community.normalized;
    j["loss"] = loss;
    nlohmann::ordered_json risk;
    risk["excluded"] = cell.risk.excluded;
    risk["dummies"] = cell.risk.dummies;
    for (const auto& q : cell.risk.queries) {
      nlohmann::ordered_json dist;
      const auto labels = bucket_labels(q.query);
      for (std::size_t b = 0; b < labels.size(); ++b) dist[std::string(labels[b])] = q.fractions[b];
      risk[std::string(query_name(q.query))] = {{"population", q.population}, {"fractions", dist}};
    }
    j["risk"] = risk;
    j["verify"] = audit_json(cell.verify);
    j["restrictions"] = audit_json(cell.restrictions);
  }
  out << j.dump(2) << '\n';
}

void write_verify_txt(const CellReport& cell, std::ostream& out) {
  auto section = [&out](std::string_view name, const AuditReport& r) {
    out << name << ": " << (r.passed ? "PASS" : "FAIL") << '\n';
    for (const auto& f : r.failures) out << "  " << f << '\n';
  };
  out << "method=" << cell.method << " k=" << cell.k << " seed=" << cell.seed << '\n';
  if (!cell.ok) {
    out << "error: " << cell.error << '\n';
    return;
  }
  section("k-anonymity", cell.verify);
  section("restrictions", cell.restrictions);
}

}  // namespace kanon
