#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "generators.hpp"
#include "kanon/error.hpp"
#include "kanon/pipeline.hpp"
#include "kanon/provenance.hpp"

using namespace kanon;
using namespace kanon::testing;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  fs::path dir = fs::temp_directory_path() / "kanon_tests" / (std::string(info->test_suite_name()) + "_" + info->name());
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

RunConfig small_run(const fs::path& dir, const fs::path& dataset) {
  RunConfig c;
  c.dataset = dataset;
  c.ks = {2, 4};
  c.output = dir / "run";
  c.training.epochs = 3;
  c.training.proposals_per_epoch = 5;
  c.training.sample_size = 20;
  return c;
}

fs::path write_dataset(const fs::path& dir, const Graph& g) {
  auto path = dir / "graph.txt";
  write_edge_list(g, path);
  return path;
}

}  // namespace

TEST(Config, ParseAndValidate) {
  std::istringstream in(
      "# run\n"
      "dataset = data/ca-HepTh.txt\n"
      "method = clust_g\n"
      "method = modif_r_l2\n"
      "k = 4\n"
      "k = 8\n"
      "seed = 9\n"
      "train_epochs = 7\n");
  auto c = RunConfig::parse(in);
  EXPECT_EQ(c.dataset, "data/ca-HepTh.txt");
  EXPECT_EQ(c.methods, (std::vector<Method>{Method::kClustGlobal, Method::kModifLocal2}));
  EXPECT_EQ(c.ks, (std::vector<std::size_t>{4, 8}));
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.training.epochs, 7);
  std::stringstream out;
  c.write(out);
  auto again = RunConfig::parse(out);
  EXPECT_EQ(again.ks, c.ks);
  EXPECT_EQ(again.methods, c.methods);
}

TEST(Config, Errors) {
  std::istringstream unknown("colour = red\n");
  EXPECT_THROW(RunConfig::parse(unknown), ConfigError);
  std::istringstream badk("k = 1\n");
  EXPECT_THROW(RunConfig::parse(badk).validate(), ConfigError);
  std::istringstream badm("method = modif_r_l1\n");
  EXPECT_THROW(RunConfig::parse(badm), ConfigError);
  EXPECT_THROW(resolve_dataset("/no/such/file.txt"), IoError);
}

TEST(Ranks, CompetitionTies) {
  std::vector<double> v{0.3, 0.1, 0.3, 0.5};
  EXPECT_EQ(competition_ranks(v), (std::vector<std::size_t>{2, 1, 2, 4}));
  EXPECT_TRUE(competition_ranks(std::vector<double>{}).empty());
}

TEST(Stats, TriangleAndEmpty) {
  auto dir = scratch();
  std::ofstream(dir / "tri.txt") << "1 2\n2 3\n3 1\n";
  std::ostringstream out;
  EXPECT_EQ(cmd_stats(dir / "tri.txt", 1, out), kExitOk);
  EXPECT_NE(out.str().find("\n"), std::string::npos);
  EXPECT_NE(out.str().find(",3,3,"), std::string::npos);
  std::ofstream(dir / "empty.txt") << "# nothing\n";
  std::ostringstream empty;
  EXPECT_EQ(cmd_stats(dir / "empty.txt", 1, empty), kExitOk);
  const std::string text = empty.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
}

TEST(Stats, ComputeStats) {
  auto s = compute_stats(path_graph(3), 4, 0);
  EXPECT_EQ(s.nodes, 3u);
  EXPECT_EQ(s.edges, 2u);
  EXPECT_DOUBLE_EQ(s.avg_degree, 4.0 / 3.0);
  EXPECT_NEAR(s.apl, 4.0 / 3.0, 1e-15);
  EXPECT_EQ(s.diameter, 2u);
}

TEST(Run, WritesCellsAndIsDeterministic) {
  auto dir = scratch();
  auto data = write_dataset(dir, clustered_powerlaw(120, 2, 0.3, 4));
  auto config = small_run(dir, data);
  std::ostringstream log;
  ASSERT_EQ(cmd_run(config, log), kExitOk) << log.str();
  const fs::path cell = config.output / "clust_r_l2_k4";
  for (const char* f : {"published.txt", "loss.csv", "risk.csv", "report.json", "verify.txt", "metrics.csv",
                        "communities.csv", ".private/provenance.txt"}) {
    EXPECT_TRUE(fs::exists(cell / f)) << f;
  }
  EXPECT_TRUE(fs::exists(config.output / "summary.csv"));
  EXPECT_TRUE(fs::exists(config.output / "weights.txt"));

  auto second = config;
  second.output = dir / "run2";
  std::ostringstream log2;
  ASSERT_EQ(cmd_run(second, log2), kExitOk);
  for (const auto& entry : fs::recursive_directory_iterator(config.output)) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), config.output);
    if (rel == "run.cfg") continue;  // records the output path
    EXPECT_EQ(slurp(entry.path()), slurp(second.output / rel)) << rel;
  }
}

TEST(Run, ReusesWeightsFile) {
  auto dir = scratch();
  Graph g = clustered_powerlaw(80, 2, 0.3, 2);
  auto data = write_dataset(dir, g);
  auto config = small_run(dir, data);
  config.methods = {Method::kClustGlobal};
  config.ks = {2};
  config.weights = dir / "w.txt";
  write_weights(DistanceWeights{{0.5, 0.1, 0.1, 0.2, 0.1}}, fingerprint(load_edge_list(data)), config.weights);
  std::ostringstream log;
  EXPECT_EQ(cmd_run(config, log), kExitOk);
  auto w = read_weights(config.output / "weights.txt");
  EXPECT_DOUBLE_EQ(w.w[0], 0.5);
  write_weights(DistanceWeights{}, fingerprint(path_graph(3)), config.weights);
  EXPECT_THROW(cmd_run(config, log), ConfigError);
}

TEST(Attack, MatchesRunRisk) {
  auto dir = scratch();
  auto data = write_dataset(dir, clustered_powerlaw(100, 2, 0.3, 7));
  auto config = small_run(dir, data);
  config.ks = {4};
  std::ostringstream log;
  ASSERT_EQ(cmd_run(config, log), kExitOk);
  for (Method m : kAllMethods) {
    const fs::path cell = config.output / (std::string(method_name(m)) + "_k4");
    std::ostringstream risk;
    EXPECT_EQ(cmd_attack(cell / "published.txt", cell / ".private" / "provenance.txt", risk), kExitOk);
    EXPECT_EQ(risk.str(), slurp(cell / "risk.csv")) << method_name(m);
  }
}

TEST(Provenance, RejectsMismatchedGraph) {
  auto dir = scratch();
  auto data = write_dataset(dir, clustered_powerlaw(60, 2, 0.3, 1));
  auto config = small_run(dir, data);
  config.methods = {Method::kClustLocal2};
  config.ks = {2};
  std::ostringstream log;
  ASSERT_EQ(cmd_run(config, log), kExitOk);
  std::ifstream in(config.output / "clust_r_l2_k2" / ".private" / "provenance.txt");
  EXPECT_ANY_THROW(read_provenance(in, path_graph(3)));
  std::istringstream garbage("# kind=clustering\nnot a line\n");
  EXPECT_ANY_THROW(read_provenance(garbage, path_graph(3)));
}

TEST(Rank, AcrossRuns) {
  auto dir = scratch();
  fs::create_directories(dir / "a");
  std::ofstream(dir / "a" / "summary.csv")
      << "method,k,status,verify,restrictions,degree,cc,apl,hub,bridge,communities_raw,communities_norm,"
         "published_nodes,published_edges,resolution\n"
      << "clust_g,2,ok,pass,pass,0.1,0.2,0.3,0.4,0.5,3,0.3,10,10,1\n"
      << "clust_r_l2,2,ok,pass,pass,0.1,0.1,0.3,0.4,0.5,1,0.1,10,10,1\n"
      << "modif_g,2,failed,fail,fail,,,,,,,,,,\n";
  std::vector<fs::path> dirs{dir / "a"};
  std::ostringstream out;
  EXPECT_EQ(cmd_rank(dirs, out), kExitOk);
  const std::string text = out.str();
  EXPECT_NE(text.find("degree,a,clust_g,1,1,0,1,0,0"), std::string::npos) << text;
  EXPECT_NE(text.find("degree,a,clust_r_l2,1,1,0,1,0,0"), std::string::npos);
  EXPECT_NE(text.find("cc,a,clust_g,2,1,0,0,1,0"), std::string::npos);
  EXPECT_NE(text.find("degree,a,modif_g,-,0,1,0,0,0"), std::string::npos);
}
