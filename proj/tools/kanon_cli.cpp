#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kanon/error.hpp"
#include "kanon/kernels.hpp"
#include "kanon/pipeline.hpp"

namespace {

struct RunFlags {
  std::string config;
  std::string dataset;
  std::vector<std::string> methods;
  std::vector<std::size_t> ks;
  std::optional<double> hub_pct;
  std::optional<double> bridge_pct;
  std::optional<std::uint64_t> seed;
  std::string weights;
  std::string output;
  std::optional<std::size_t> train_samples;
  std::optional<int> train_epochs;
};

kanon::RunConfig build_config(const RunFlags& f) {
  kanon::RunConfig c = f.config.empty() ? kanon::RunConfig{} : kanon::RunConfig::load(f.config);
  if (!f.dataset.empty()) c.dataset = f.dataset;
  if (!f.methods.empty()) {
    c.methods.clear();
    for (const auto& m : f.methods) c.methods.push_back(kanon::parse_method(m));
  }
  if (!f.ks.empty()) c.ks = f.ks;
  if (f.hub_pct) c.hub_pct = *f.hub_pct;
  if (f.bridge_pct) c.bridge_pct = *f.bridge_pct;
  if (f.seed) c.seed = *f.seed;
  if (!f.weights.empty()) c.weights = f.weights;
  if (!f.output.empty()) c.output = f.output;
  if (f.train_samples) c.training.sample_size = *f.train_samples;
  if (f.train_epochs) c.training.epochs = *f.train_epochs;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph k-anonymization toolkit"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP worker count (0: runtime default)");

  std::string dataset;
  std::uint64_t seed = 1;

  auto* stats = app.add_subcommand("stats", "Print graph statistics");
  stats->add_option("dataset", dataset, "Edge-list file")->required();
  stats->add_option("--seed", seed, "Louvain seed");

  std::string weights_out = "weights.txt";
  kanon::AnnealingConfig annealing;
  auto* train = app.add_subcommand("train", "Train distance weights");
  train->add_option("dataset", dataset, "Edge-list file")->required();
  train->add_option("-o,--output", weights_out, "Weights file to write");
  train->add_option("--seed", seed, "Training seed");
  train->add_option("--samples", annealing.sample_size, "Sampled reference nodes");
  train->add_option("--epochs", annealing.epochs, "Annealing epochs");
  train->add_option("--proposals", annealing.proposals_per_epoch, "Proposals per epoch");
  train->add_option("--pool", annealing.pool_cap, "Candidates per sampled node");

  RunFlags flags;
  auto* run = app.add_subcommand("run", "Anonymize and evaluate a method x k grid");
  run->add_option("-c,--config", flags.config, "key=value config file");
  run->add_option("--dataset", flags.dataset, "Edge-list file");
  run->add_option("--method", flags.methods, "Method (repeatable)");
  run->add_option("--k", flags.ks, "Anonymity level (repeatable)");
  run->add_option("--hub-pct", flags.hub_pct, "Hub percentile");
  run->add_option("--bridge-pct", flags.bridge_pct, "Bridge percentile");
  run->add_option("--seed", flags.seed, "Seed");
  run->add_option("--weights", flags.weights, "Trained weights file");
  run->add_option("-o,--output", flags.output, "Output directory");
  run->add_option("--train-samples", flags.train_samples, "Training sample size");
  run->add_option("--train-epochs", flags.train_epochs, "Training epochs");

  std::vector<std::string> run_dirs;
  auto* rank = app.add_subcommand("rank", "Rank methods across run directories");
  rank->add_option("runs", run_dirs, "Run directories")->required();

  std::string published, provenance;
  auto* attack = app.add_subcommand("attack", "Risk report for a published graph and its provenance");
  attack->add_option("published", published, "Published edge list")->required();
  attack->add_option("provenance", provenance, "Provenance sidecar")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kanon::kExitOk : kanon::kExitConfig;
  }
  if (threads > 0) kanon::kernels::set_threads(threads);

  try {
    if (*stats) return kanon::cmd_stats(dataset, seed, std::cout);
    if (*train) return kanon::cmd_train(dataset, weights_out, annealing, seed, std::cout);
    if (*run) return kanon::cmd_run(build_config(flags), std::cerr);
    if (*rank) {
      std::vector<std::filesystem::path> dirs(run_dirs.begin(), run_dirs.end());
      return kanon::cmd_rank(dirs, std::cout);
    }
    if (*attack) return kanon::cmd_attack(published, provenance, std::cout);
  } catch (const kanon::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kanon::kExitConfig;
  } catch (const kanon::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kanon::kExitError;
  }
  return kanon::kExitOk;
}
