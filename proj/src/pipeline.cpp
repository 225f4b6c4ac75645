#include "kanon/pipeline.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "kanon/community.hpp"
#include "kanon/error.hpp"
#include "kanon/evaluate.hpp"
#include "kanon/kernels.hpp"
#include "kanon/metrics.hpp"
#include "kanon/provenance.hpp"
#include "kanon/reports.hpp"

namespace kanon {

namespace {

constexpr const char* kVersion = "0.1.0";

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value, std::size_t line) {
  std::istringstream in(value);
  T x{};
  if (!(in >> x) || !(in >> std::ws).eof()) {
    throw ConfigError("line " + std::to_string(line) + ": bad value '" + value + "' for " + key);
  }
  return x;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

}  // namespace

void RunConfig::validate() const {
  if (methods.empty()) throw ConfigError("no methods selected");
  for (std::size_t i = 0; i < methods.size(); ++i) {
    for (std::size_t j = i + 1; j < methods.size(); ++j) {
      if (methods[i] == methods[j]) throw ConfigError("method " + std::string(method_name(methods[i])) + " listed twice");
    }
  }
  if (ks.empty()) throw ConfigError("no k values given");
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (ks[i] < 2) throw ConfigError("k values must be at least 2");
    if (i > 0 && ks[i] <= ks[i - 1]) throw ConfigError("k values must be strictly ascending");
  }
  if (!(hub_pct > 0.0 && hub_pct < 100.0)) throw ConfigError("hub_pct must be in (0, 100)");
  if (!(bridge_pct > 0.0 && bridge_pct < 100.0)) throw ConfigError("bridge_pct must be in (0, 100)");
  if (dataset.empty()) throw ConfigError("no dataset given");
  if (output.empty()) throw ConfigError("no output directory given");
  training.validate();
}

RunConfig RunConfig::parse(std::istream& in) {
  RunConfig c;
  bool methods_seen = false;
  bool ks_seen = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "dataset") {
      c.dataset = value;
    } else if (key == "method") {
      if (!methods_seen) c.methods.clear();
      methods_seen = true;
      c.methods.push_back(parse_method(value));
    } else if (key == "k") {
      if (!ks_seen) c.ks.clear();
      ks_seen = true;
      c.ks.push_back(parse_number<std::size_t>(key, value, line_no));
    } else if (key == "hub_pct") {
      c.hub_pct = parse_number<double>(key, value, line_no);
    } else if (key == "bridge_pct") {
      c.bridge_pct = parse_number<double>(key, value, line_no);
    } else if (key == "seed") {
      c.seed = parse_number<std::uint64_t>(key, value, line_no);
    } else if (key == "weights") {
      c.weights = value;
    } else if (key == "output") {
      c.output = value;
    } else if (key == "theta_pairs") {
      c.theta_pairs = parse_number<std::size_t>(key, value, line_no);
    } else if (key == "train_samples") {
      c.training.sample_size = parse_number<std::size_t>(key, value, line_no);
    } else if (key == "train_epochs") {
      c.training.epochs = parse_number<int>(key, value, line_no);
    } else if (key == "train_proposals") {
      c.training.proposals_per_epoch = parse_number<int>(key, value, line_no);
    } else if (key == "train_pool") {
      c.training.pool_cap = parse_number<std::size_t>(key, value, line_no);
    } else if (key == "train_temperature") {
      c.training.initial_temperature = parse_number<double>(key, value, line_no);
    } else if (key == "train_cooling") {
      c.training.cooling = parse_number<double>(key, value, line_no);
    } else {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  return parse(in);
}

void RunConfig::write(std::ostream& out) const {
  out << "dataset=" << dataset.string() << '\n';
  for (Method m : methods) out << "method=" << method_name(m) << '\n';
  for (std::size_t k : ks) out << "k=" << k << '\n';
  out << "hub_pct=" << format_number(hub_pct) << '\n';
  out << "bridge_pct=" << format_number(bridge_pct) << '\n';
  out << "seed=" << seed << '\n';
  if (!weights.empty()) out << "weights=" << weights.string() << '\n';
  out << "output=" << output.string() << '\n';
  out << "theta_pairs=" << theta_pairs << '\n';
  out << "train_samples=" << training.sample_size << '\n';
  out << "train_epochs=" << training.epochs << '\n';
  out << "train_proposals=" << training.proposals_per_epoch << '\n';
  out << "train_pool=" << training.pool_cap << '\n';
  out << "train_temperature=" << format_number(training.initial_temperature) << '\n';
  out << "train_cooling=" << format_number(training.cooling) << '\n';
}

std::filesystem::path resolve_dataset(const std::filesystem::path& path) {
  if (std::filesystem::exists(path)) return path;
  if (const char* dir = std::getenv(kDataDirEnv); dir != nullptr && path.is_relative()) {
    const auto candidate = std::filesystem::path(dir) / path;
    if (std::filesystem::exists(candidate)) return candidate;
  }
  throw IoError("dataset not found: " + path.string() + " (also looked under $" + kDataDirEnv + ")");
}

GraphStats compute_stats(const Graph& g, std::size_t arcs, std::uint64_t seed) {
  GraphStats s;
  s.nodes = g.num_nodes();
  s.edges = g.num_edges();
  s.arcs = arcs;
  if (s.nodes == 0) return s;
  s.avg_degree = 2.0 * static_cast<double>(s.edges) / static_cast<double>(s.nodes);
  const auto cc = kernels::omp::clustering(g);
  double sum = 0.0;
  for (double x : cc) sum += x;
  s.mean_cc = sum / static_cast<double>(s.nodes);
  if (s.nodes >= 2) {
    const auto ps = path_statistics(g);
    s.apl = ps.average_path_length;
    s.diameter = ps.diameter;
  }
  s.communities = louvain(g, 1.0, seed).count;
  return s;
}

int cmd_stats(const std::filesystem::path& dataset, std::uint64_t seed, std::ostream& out) {
  EdgeListStats file;
  const Graph g = load_edge_list(resolve_dataset(dataset), &file);
  out << "dataset,nodes,edges,arcs,avg_degree,mean_cc,apl,diameter,communities\n";
  if (g.empty()) return kExitOk;
  const auto s = compute_stats(g, file.arcs, seed);
  out << dataset.filename().string() << ',' << s.nodes << ',' << s.edges << ',' << s.arcs << ','
      << format_number(s.avg_degree) << ',' << format_number(s.mean_cc) << ',' << format_number(s.apl) << ','
      << s.diameter << ',' << s.communities << '\n';
  return kExitOk;
}

int cmd_train(const std::filesystem::path& dataset, const std::filesystem::path& weights_out,
              const AnnealingConfig& config, std::uint64_t seed, std::ostream& out) {
  const Graph g = load_edge_list(resolve_dataset(dataset));
  const auto table = FeatureTable::build(g);
  const auto result = train_weights(g, table, config, seed);
  write_weights(result.weights, fingerprint(g), weights_out);
  out << "weights=";
  for (std::size_t i = 0; i < kFeatureCount; ++i) out << (i ? " " : "") << format_number(result.weights.w[i]);
  out << '\n';
  out << "fitness_uniform=" << format_number(result.initial_fitness) << '\n';
  out << "fitness_trained=" << format_number(result.fitness) << '\n';
  out << "evaluations=" << result.evaluations << '\n';
  out << "hit_rate_uniform_top1="
      << format_number(isomorphism_hit_rate(g, table, DistanceWeights::uniform(), result.sample, 1)) << '\n';
  out << "hit_rate_trained_top1=" << format_number(isomorphism_hit_rate(g, table, result.weights, result.sample, 1))
      << '\n';
  return kExitOk;
}

namespace {

void write_cell(const std::filesystem::path& dir, const CellReport& cell, const AnonymizedGraph* a,
                const NodeMetrics* metrics, const CommunityPartition* partition) {
  std::filesystem::create_directories(dir);
  if (a != nullptr) {
    write_edge_list(a->published, dir / "published.txt");
    write_provenance(*a, dir / ".private" / "provenance.txt");
  }
  {
    auto out = open_out(dir / "loss.csv");
    if (cell.ok) {
      write_loss_csv(cell, out);
    } else {
      out << "method,k,metric,value\n";
    }
  }
  {
    auto out = open_out(dir / "risk.csv");
    if (cell.ok) {
      write_risk_csv(cell.method, cell.k, cell.risk, out);
    } else {
      out << "method,k,query,bucket,fraction\n";
    }
  }
  {
    auto out = open_out(dir / "report.json");
    write_report_json(cell, out);
  }
  {
    auto out = open_out(dir / "verify.txt");
    write_verify_txt(cell, out);
  }
  if (a != nullptr && metrics != nullptr) {
    auto out = open_out(dir / "metrics.csv");
    write_metrics_csv(a->published, *metrics, out);
  }
  if (a != nullptr && partition != nullptr) {
    auto out = open_out(dir / "communities.csv");
    write_partition_csv(a->published, *partition, out);
  }
}

constexpr const char* kSummaryHeader =
    "method,k,status,verify,restrictions,degree,cc,apl,hub,bridge,communities_raw,communities_norm,"
    "published_nodes,published_edges,resolution";

void write_summary_row(std::ostream& out, const CellReport& c) {
  out << c.method << ',' << c.k << ',' << (c.ok ? "ok" : "failed") << ',';
  if (!c.ok) {
    out << ",,,,,,,,,,,," << format_number(c.resolution) << '\n';
    return;
  }
  out << (c.verify.passed ? "pass" : "fail") << ',' << (c.restrictions.passed ? "pass" : "fail");
  for (double x : c.loss.metric) out << ',' << format_number(x);
  out << ',' << format_number(c.loss.community.raw) << ',' << format_number(c.loss.community.normalized) << ','
      << c.published_nodes << ',' << c.published_edges << ',' << format_number(c.resolution) << '\n';
}

}  // namespace

int cmd_run(const RunConfig& config, std::ostream& log) {
  config.validate();
  const auto dataset = resolve_dataset(config.dataset);
  EdgeListStats file;
  const Graph g = load_edge_list(dataset, &file);
  if (g.num_nodes() < 2) throw ConfigError("dataset " + dataset.string() + " has fewer than two nodes");
  const auto fp = fingerprint(g);
  std::filesystem::create_directories(config.output);
  {
    auto out = open_out(config.output / "run.cfg");
    out << "# kanon " << kVersion << '\n';
    out << "# graph nodes=" << fp.nodes << " edges=" << fp.edges << " hash=" << fp.hash << '\n';
    config.write(out);
  }

  const auto table = FeatureTable::build(g);
  DistanceWeights w;
  if (!config.weights.empty()) {
    w = read_weights(config.weights, &fp);
    log << "weights: loaded " << config.weights.string() << '\n';
  } else {
    const auto trained = train_weights(g, table, config.training, config.seed);
    w = trained.weights;
    log << "weights: trained, fitness " << format_number(trained.initial_fitness) << " -> "
        << format_number(trained.fitness) << '\n';
  }
  write_weights(w, fp, config.output / "weights.txt");

  const auto original_metrics = compute_node_metrics(g);
  const std::uint32_t nc = louvain(g, 1.0, config.seed).count;
  ContextOptions options;
  options.hub_pct = config.hub_pct;
  options.bridge_pct = config.bridge_pct;
  options.theta_pairs = config.theta_pairs;

  bool verify_failed = false;
  bool cell_failed = false;
  auto summary = open_out(config.output / "summary.csv");
  summary << kSummaryHeader << '\n';
  for (std::size_t k : config.ks) {
    RestrictionContext ctx;
    std::string ctx_error;
    try {
      ctx = build_context(g, k, config.seed, table, w, options);
    } catch (const Error& e) {
      ctx_error = e.what();
    }
    for (Method m : config.methods) {
      CellReport cell;
      cell.method = std::string(method_name(m));
      cell.k = k;
      cell.seed = config.seed;
      cell.weights = w;
      const auto dir = config.output / (cell.method + "_k" + std::to_string(k));
      std::optional<AnonymizedGraph> a;
      std::optional<NodeMetrics> metrics;
      std::optional<CommunityPartition> partition;
      try {
        if (!ctx_error.empty()) throw InfeasibleError(ctx_error);
        cell.resolution = ctx.partition.resolution;
        cell.resolution_steps = ctx.partition.resolution_steps;
        cell.fallback_merges = ctx.partition.fallback_merges;
        cell.context_communities = ctx.partition.count;
        cell.theta = ctx.theta;
        cell.hubs = ctx.roles.hubs.size();
        cell.bridges = ctx.roles.bridges.size();
        cell.leak = leak_estimate(ctx, g);
        a = anonymize(g, m, k, ctx, table, w, config.seed);
        cell.verify = verify_k_anonymity(*a);
        cell.restrictions = audit_restrictions(g, *a, ctx);
        metrics = compute_node_metrics(a->published);
        partition = louvain(a->published, 1.0, config.seed);
        cell.loss = loss_report(original_metrics, *metrics, nc, partition->count);
        cell.loss.method = cell.method;
        cell.loss.k = k;
        cell.risk = risk_report(*a);
        cell.published_nodes = a->published.num_nodes();
        cell.published_edges = a->published.num_edges();
        cell.ok = true;
      } catch (const Error& e) {
        cell.ok = false;
        cell.error = e.what();
      }
      write_cell(dir, cell, a ? &*a : nullptr, metrics ? &*metrics : nullptr, partition ? &*partition : nullptr);
      write_summary_row(summary, cell);
      if (!cell.ok) {
        cell_failed = true;
        log << cell.method << " k=" << k << ": FAILED: " << cell.error << '\n';
      } else {
        const bool pass = cell.verify.passed && cell.restrictions.passed;
        verify_failed = verify_failed || !pass;
        log << cell.method << " k=" << k << ": " << (pass ? "ok" : "VERIFY FAILED") << ", published "
            << cell.published_nodes << " nodes / " << cell.published_edges << " edges\n";
      }
    }
  }
  if (verify_failed) return kExitVerify;
  return cell_failed ? kExitError : kExitOk;
}

std::vector<std::size_t> competition_ranks(std::span<const double> values) {
  std::vector<std::size_t> ranks(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::size_t better = 0;
    for (double v : values) {
      if (v < values[i]) ++better;
    }
    ranks[i] = better + 1;
  }
  return ranks;
}

namespace {

struct SummaryRow {
  std::string method;
  std::size_t k = 0;
  bool ok = false;
  std::map<std::string, double> values;
};

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(line);
  while (std::getline(in, item, ',')) out.push_back(item);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::vector<SummaryRow> read_summary(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": empty summary", 0);
  const auto header = split_csv(trim(line));
  std::vector<SummaryRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    const auto cols = split_csv(line);
    if (cols.size() != header.size()) throw ParseError(path.string() + ": column count mismatch", line_no);
    SummaryRow r;
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (header[i] == "method") r.method = cols[i];
      else if (header[i] == "k") r.k = std::stoull(cols[i]);
      else if (header[i] == "status") r.ok = cols[i] == "ok";
      else if (!cols[i].empty() && header[i] != "verify" && header[i] != "restrictions") {
        try {
          r.values[header[i]] = std::stod(cols[i]);
        } catch (const std::exception&) {
          throw ParseError(path.string() + ": bad number '" + cols[i] + "'", line_no);
        }
      }
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace

int cmd_rank(std::span<const std::filesystem::path> run_dirs, std::ostream& out) {
  static const std::vector<std::string> kRankMetrics{"degree", "cc", "apl", "hub", "bridge", "communities_norm"};
  struct Dataset {
    std::string name;
    std::vector<SummaryRow> rows;
  };
  std::vector<Dataset> datasets;
  std::vector<std::string> methods;
  std::vector<std::size_t> ks;
  for (const auto& dir : run_dirs) {
    Dataset d{dir.filename().empty() ? dir.parent_path().filename().string() : dir.filename().string(),
              read_summary(dir / "summary.csv")};
    for (const auto& r : d.rows) {
      if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) methods.push_back(r.method);
      if (std::find(ks.begin(), ks.end(), r.k) == ks.end()) ks.push_back(r.k);
    }
    datasets.push_back(std::move(d));
  }
  std::sort(ks.begin(), ks.end());

  out << "metric,dataset,method,mean_rank,cases,missing";
  for (std::size_t p = 1; p <= methods.size(); ++p) out << ",place" << p;
  out << '\n';
  for (const auto& metric : kRankMetrics) {
    for (const auto& d : datasets) {
      std::map<std::string, std::vector<std::size_t>> ranks;
      std::map<std::string, std::size_t> missing;
      for (std::size_t k : ks) {
        std::vector<std::string> present;
        std::vector<double> values;
        for (const auto& m : methods) {
          const auto it = std::find_if(d.rows.begin(), d.rows.end(),
                                       [&](const SummaryRow& r) { return r.method == m && r.k == k; });
          if (it == d.rows.end() || !it->ok || !it->values.contains(metric)) {
            ++missing[m];
            continue;
          }
          present.push_back(m);
          values.push_back(it->values.at(metric));
        }
        const auto r = competition_ranks(values);
        for (std::size_t i = 0; i < present.size(); ++i) ranks[present[i]].push_back(r[i]);
      }
      for (const auto& m : methods) {
        const auto& rs = ranks[m];
        out << metric << ',' << d.name << ',' << m << ',';
        if (rs.empty()) {
          out << "-";
        } else {
          double sum = 0.0;
          for (auto r : rs) sum += static_cast<double>(r);
          out << format_number(sum / static_cast<double>(rs.size()));
        }
        out << ',' << rs.size() << ',' << missing[m];
        for (std::size_t p = 1; p <= methods.size(); ++p) out << ',' << std::count(rs.begin(), rs.end(), p);
        out << '\n';
      }
    }
  }
  return kExitOk;
}

int cmd_attack(const std::filesystem::path& published, const std::filesystem::path& provenance, std::ostream& out) {
  Graph g = sort_by_label(load_edge_list(published));
  const auto a = read_provenance(provenance, std::move(g));
  const auto risk = risk_report(a);
  write_risk_csv(method_name(a.method), a.k, risk, out);
  return kExitOk;
}

}  // namespace kanon
