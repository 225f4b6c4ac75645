#include "kanon/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "kanon/error.hpp"

namespace kanon {
namespace {

/// Candidates that can be nearest to one sampled node under some weight
/// vector, with their precomputed VF2-D scores.
struct SampleFront {
  NodeId node = 0;
  std::vector<FeatureArray> gaps;  // |f(node) - f(candidate)| per feature
  std::vector<double> score;
};

bool dominates(const FeatureArray& a, const FeatureArray& b, bool strict) {
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (strict ? !(a[i] < b[i]) : !(a[i] <= b[i])) return false;
  }
  return true;
}

/// Keeps candidates not dominated by another one. A candidate is dropped when
/// another has no larger gap in any feature and wins the rank tie-break, or
/// has a strictly smaller gap in every feature; either way it can never be the
/// nearest for non-negative weights summing to 1.
SampleFront build_front(const Graph& g, const FeatureTable& table, NodeId s, std::vector<NodeId> pool,
                        const FidelityOptions& fidelity) {
  struct Item {
    FeatureArray gap;
    double sum;
    bool differs;
    NodeId id;
  };
  std::vector<Item> items;
  items.reserve(pool.size());
  for (NodeId u : pool) {
    Item it{{}, 0.0, table[s].values != table[u].values, u};
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      it.gap[i] = std::abs(table[s].values[i] - table[u].values[i]);
      it.sum += it.gap[i];
    }
    items.push_back(it);
  }
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    if (a.sum != b.sum) return a.sum < b.sum;
    if (a.differs != b.differs) return !a.differs;
    return a.id < b.id;
  });
  std::vector<const Item*> front;
  for (const auto& it : items) {
    bool dominated = false;
    for (const Item* f : front) {
      const bool wins_tie = f->differs != it.differs ? !f->differs : f->id < it.id;
      if ((wins_tie && dominates(f->gap, it.gap, false)) || dominates(f->gap, it.gap, true)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) front.push_back(&it);
  }
  std::sort(front.begin(), front.end(), [](const Item* a, const Item* b) {
    if (a->differs != b->differs) return !a->differs;
    return a->id < b->id;
  });

  SampleFront out;
  out.node = s;
  const auto ns = neighborhood(g, s);
  for (const Item* f : front) {
    out.gaps.push_back(f->gap);
    out.score.push_back(vf2d_score(ns, neighborhood(g, f->id), fidelity).degree_fidelity);
  }
  return out;
}

/// Score of the nearest front member under `w`. Fronts are ordered by the
/// rank tie-break, so the first minimum wins.
double nearest_score(const SampleFront& f, const DistanceWeights& w) {
  double best = std::numeric_limits<double>::infinity();
  double score = 0.0;
  for (std::size_t i = 0; i < f.gaps.size(); ++i) {
    double d = 0.0;
    for (std::size_t j = 0; j < kFeatureCount; ++j) d += w.w[j] * f.gaps[i][j];
    if (d < best) {
      best = d;
      score = f.score[i];
    }
  }
  return score;
}

double fitness(const std::vector<SampleFront>& fronts, const DistanceWeights& w) {
  std::vector<double> per(fronts.size());
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < fronts.size(); ++i) per[i] = nearest_score(fronts[i], w);
  return fronts.empty() ? 0.0 : std::accumulate(per.begin(), per.end(), 0.0) / static_cast<double>(fronts.size());
}

DistanceWeights propose(const DistanceWeights& w, const AnnealingConfig& c, std::mt19937_64& rng) {
  DistanceWeights out;
  double sum = 0.0;
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    std::gamma_distribution<double> gamma(c.concentration * w.w[i] * kFeatureCount + c.concentration_floor, 1.0);
    out.w[i] = gamma(rng);
    sum += out.w[i];
  }
  if (sum <= 0.0) return w;
  for (double& x : out.w) x /= sum;
  return out;
}

}  // namespace

void AnnealingConfig::validate() const {
  if (!(initial_temperature > 0.0)) throw ConfigError("annealing temperature must be positive");
  if (!(cooling > 0.0 && cooling <= 1.0)) throw ConfigError("cooling factor must be in (0, 1]");
  if (epochs < 0 || proposals_per_epoch < 0) throw ConfigError("epoch counts must be non-negative");
  if (sample_size < 2) throw ConfigError("training sample size must be at least 2");
  if (pool_cap < 1) throw ConfigError("candidate pool cap must be positive");
  if (!(concentration > 0.0) || !(concentration_floor > 0.0)) throw ConfigError("proposal concentration must be positive");
}

std::vector<NodeId> sample_nodes(std::size_t n, std::size_t count, std::uint64_t seed) {
  std::vector<NodeId> all(n);
  std::iota(all.begin(), all.end(), 0U);
  if (count >= n) return all;
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates.
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(all[i], all[pick(rng)]);
  }
  all.resize(count);
  std::sort(all.begin(), all.end());
  return all;
}

TrainingResult train_weights(const Graph& g, const FeatureTable& table, const AnnealingConfig& config,
                             std::uint64_t seed) {
  config.validate();
  const std::size_t n = g.num_nodes();
  if (n < 2) throw ConfigError("graph too small to sample for training");
  if (table.size() != n) throw ContractViolation("feature table does not match graph");

  TrainingResult result;
  result.sample = sample_nodes(n, config.sample_size, seed);

  std::vector<std::vector<NodeId>> pools(result.sample.size());
  for (std::size_t i = 0; i < result.sample.size(); ++i) {
    const NodeId s = result.sample[i];
    auto pool = sample_nodes(n, std::min(n, config.pool_cap + 1), seed ^ (0x9e3779b97f4a7c15ULL * (s + 1)));
    pool.erase(std::remove(pool.begin(), pool.end(), s), pool.end());
    if (pool.size() > config.pool_cap) pool.resize(config.pool_cap);
    pools[i] = std::move(pool);
  }
  std::vector<SampleFront> fronts(result.sample.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t i = 0; i < fronts.size(); ++i) {
    fronts[i] = build_front(g, table, result.sample[i], pools[i], config.fidelity);
  }

  std::mt19937_64 rng(seed + 0x5851f42d4c957f2dULL);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  DistanceWeights current = DistanceWeights::uniform();
  double current_fit = fitness(fronts, current);
  result.initial_fitness = current_fit;
  result.weights = current;
  result.fitness = current_fit;
  result.evaluations = 1;
  double temperature = config.initial_temperature;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (int p = 0; p < config.proposals_per_epoch; ++p) {
      const DistanceWeights next = propose(current, config, rng);
      const double fit = fitness(fronts, next);
      ++result.evaluations;
      const double u = unit(rng);
      if (fit >= current_fit || u < std::exp((fit - current_fit) / temperature)) {
        current = next;
        current_fit = fit;
      }
      if (fit > result.fitness) {
        result.fitness = fit;
        result.weights = next;
      }
    }
    result.best_per_epoch.push_back(result.fitness);
    temperature *= config.cooling;
  }
  return result;
}

double isomorphism_hit_rate(const Graph& g, const FeatureTable& table, const DistanceWeights& w,
                            std::span<const NodeId> sample, std::size_t top) {
  if (top == 0 || sample.empty()) return 0.0;
  const std::size_t n = g.num_nodes();
  std::vector<std::size_t> hits(sample.size(), 0), seen(sample.size(), 0);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const NodeId s = sample[i];
    std::vector<NodeId> pool;
    pool.reserve(n - 1);
    for (NodeId u = 0; u < n; ++u) {
      if (u != s) pool.push_back(u);
    }
    const auto ranked = rank_candidates(table, s, pool, w, top);
    const auto ns = neighborhood(g, s);
    for (NodeId u : ranked.nodes) {
      if (vf2_isomorphic(ns, neighborhood(g, u))) ++hits[i];
    }
    seen[i] = ranked.nodes.size();
  }
  const auto total = std::accumulate(seen.begin(), seen.end(), std::size_t{0});
  const auto hit = std::accumulate(hits.begin(), hits.end(), std::size_t{0});
  return total == 0 ? 0.0 : static_cast<double>(hit) / static_cast<double>(total);
}

}  // namespace kanon
