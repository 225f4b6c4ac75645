#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "kanon/anonymize.hpp"
#include "kanon/training.hpp"

namespace kanon {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitVerify = 3;

/// Environment variable naming the dataset cache directory.
inline constexpr const char* kDataDirEnv = "KANON_DATA_DIR";

struct RunConfig {
  std::filesystem::path dataset;
  std::vector<Method> methods{std::begin(kAllMethods), std::end(kAllMethods)};
  std::vector<std::size_t> ks{2, 4, 8, 16};
  double hub_pct = 12.0;
  double bridge_pct = 10.0;
  std::uint64_t seed = 1;
  std::filesystem::path weights;  // empty: train
  std::filesystem::path output = "kanon-run";
  std::size_t theta_pairs = 10000;
  AnnealingConfig training;

  /// Throws ConfigError on invalid values.
  void validate() const;

  /// key=value lines; '#' comments; `method` and `k` repeat for lists.
  static RunConfig parse(std::istream& in);
  static RunConfig load(const std::filesystem::path& path);
  void write(std::ostream& out) const;
};

/// Resolves a dataset path: as given when it exists, otherwise relative to
/// $KANON_DATA_DIR. Throws IoError when neither exists.
std::filesystem::path resolve_dataset(const std::filesystem::path& path);

struct GraphStats {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t arcs = 0;  // distinct directed pairs in the source file
  double avg_degree = 0.0;
  double mean_cc = 0.0;
  double apl = 0.0;
  std::uint32_t diameter = 0;
  std::uint32_t communities = 0;
};

GraphStats compute_stats(const Graph& g, std::size_t arcs, std::uint64_t seed);

/// Prints a CSV table (header plus one row; no row for an empty graph).
int cmd_stats(const std::filesystem::path& dataset, std::uint64_t seed, std::ostream& out);

int cmd_train(const std::filesystem::path& dataset, const std::filesystem::path& weights_out,
              const AnnealingConfig& config, std::uint64_t seed, std::ostream& out);

/// Runs the method x k grid. Returns kExitVerify when an audit failed,
/// kExitError when a cell failed with an error, kExitOk otherwise.
int cmd_run(const RunConfig& config, std::ostream& log);

/// Ranks methods per metric across run directories (each holding a
/// summary.csv). Output is CSV.
int cmd_rank(std::span<const std::filesystem::path> run_dirs, std::ostream& out);

/// Risk report for a published edge list plus its provenance sidecar.
int cmd_attack(const std::filesystem::path& published, const std::filesystem::path& provenance, std::ostream& out);

/// Competition ranking (1, 1, 3): lower values rank first.
std::vector<std::size_t> competition_ranks(std::span<const double> values);

}  // namespace kanon
