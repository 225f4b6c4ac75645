#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "kanon/anonymize.hpp"
#include "kanon/evaluate.hpp"
#include "kanon/similarity.hpp"

namespace kanon {

/// Everything recorded for one (method, k) cell of a run.
struct CellReport {
  std::string method;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  std::size_t published_nodes = 0;
  std::size_t published_edges = 0;
  LossReport loss;
  RiskReport risk;
  AuditReport verify;
  AuditReport restrictions;
  LeakEstimate leak;
  double resolution = 1.0;
  int resolution_steps = 0;
  std::size_t fallback_merges = 0;
  std::size_t context_communities = 0;
  double theta = 0.0;
  std::size_t hubs = 0;
  std::size_t bridges = 0;
  DistanceWeights weights;
};

/// `method,k,metric,value`; metrics are the five loss metrics plus
/// communities_raw and communities_norm.
void write_loss_csv(const CellReport& cell, std::ostream& out);

/// `method,k,query,bucket,fraction`.
void write_risk_csv(std::string_view method, std::size_t k, const RiskReport& risk, std::ostream& out);

void write_report_json(const CellReport& cell, std::ostream& out);

/// Human-readable audit summary.
void write_verify_txt(const CellReport& cell, std::ostream& out);

/// Fixed-precision formatting shared by every text report.
std::string format_number(double x);

}  // namespace kanon
