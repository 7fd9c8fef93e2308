#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hitwalk/experiment.hpp"
#include "support/named_graphs.hpp"

using namespace hitwalk;
using namespace hitwalk::testing;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "hitwalk_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("config serializes round trip") {
  ExperimentConfig c;
  c.gnp = {300, 0.25, 2, 77};
  c.suites = {"structure", "mixing"};
  c.pair_count = 42;
  c.seed = 5;
  c.tol.fit_max = 8.0;
  json j = c;
  auto back = j.get<ExperimentConfig>();
  CHECK(back.gnp.n == 300);
  CHECK(back.gnp.seed == 77);
  CHECK(back.suites == c.suites);
  CHECK(back.pair_count == 42);
  CHECK(back.tol.fit_max == 8.0);
  CHECK(j["version"] == kVersion);

  ExperimentConfig bad;
  bad.gnp = {100, 0.2, 2, 1};
  bad.suites = {"nonsense"};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("empty suite selection writes only the config") {
  auto dir = fresh_dir("empty");
  ExperimentConfig c;
  c.gnp = {50, 0.3, 2, 3};
  c.output_dir = dir.string();
  auto result = run(c);
  CHECK(result.pass);
  CHECK(fs::exists(dir / "config.json"));
  CHECK_FALSE(fs::exists(dir / "structure.json"));
  CHECK_FALSE(fs::exists(dir / "predictions.csv"));
}

TEST_CASE("structure suite on a complete graph passes") {
  auto dir = fresh_dir("k4");
  const auto graph_path = dir / "k4.txt";
  save_edge_list(complete_graph(4), graph_path.string());

  ExperimentConfig c;
  c.gnp = {4, 1.0, 2, 0};
  c.graph_file = graph_path.string();
  c.suites = {"structure"};
  c.output_dir = (dir / "out").string();
  auto result = run(c);
  CHECK(result.pass);
  CHECK(result.suite_pass.at("structure"));

  json j = json::parse(slurp(dir / "out" / "structure.json"));
  CHECK(j["in_good_class"] == true);
  CHECK(j["diameter"] == 1);
  CHECK(j["checks"]["degrees"]["pass"] == true);
}

TEST_CASE("full run on a dense sample passes every suite") {
  auto dir = fresh_dir("full");
  ExperimentConfig c;
  c.gnp = {300, 0.3, 2, 21};
  c.suites = ExperimentConfig::known_suites();
  c.output_dir = dir.string();
  c.pair_count = 20;
  c.mc_pairs = 2;
  c.mc_trials = 20000;
  c.seed = 9;
  auto result = run(c);
  for (const auto& [suite, pass] : result.suite_pass) {
    INFO(suite);
    CHECK(pass);
  }
  CHECK(result.pass);
  for (const char* file : {"config.json", "structure.json", "spectrum.json", "mixing.csv",
                           "lemmas.csv", "predictions.csv", "mc.json"})
    CHECK(fs::exists(dir / file));

  // The prediction table has the fixed column set.
  auto csv = slurp(dir / "predictions.csv");
  CHECK(csv.find("w,v,dist,exact,pred_prob,pred_walks,pred_diam2,env_prob,env_walks,"
                 "residual_prob,residual_walks,residual_diam2,in_regime,in_good_class") !=
        std::string::npos);
  CHECK(csv.find("# hitwalk") == 0);
}

TEST_CASE("payload files are identical across thread counts") {
  auto dir1 = fresh_dir("threads1");
  ExperimentConfig c;
  c.gnp = {200, 0.3, 2, 33};
  c.suites = ExperimentConfig::known_suites();
  c.output_dir = dir1.string();
  c.pair_count = 10;
  c.mc_pairs = 2;
  c.mc_trials = 15000;
  c.threads = 1;
  run(c);

  auto dir2 = fresh_dir("threads3");
  c.output_dir = dir2.string();
  c.threads = 3;
  run(c);

  for (const char* file : {"structure.json", "spectrum.json", "mixing.csv", "lemmas.csv",
                           "predictions.csv", "mc.json"})
    CHECK(slurp(dir1 / file) == slurp(dir2 / file));
}

TEST_CASE("lemma checks pass on a sample and report rows") {
  GnpSpec spec{400, 0.25, 2, 15};
  auto g = sample_gnp(spec);
  REQUIRE(is_connected(g));
  auto rows = verify_lemma_checks(g, spec, 3, 5);
  CHECK(rows.size() >= 9);
  for (const auto& r : rows) {
    INFO(r.check << " residual=" << r.residual << " threshold=" << r.threshold);
    CHECK(r.pass);
  }
  auto csv = check_rows_csv(rows, "");
  CHECK(csv.find("neighbor_average") != std::string::npos);
  CHECK(csv.find("mean_return_time") != std::string::npos);
  CHECK(csv.find("first_return_decomposition") != std::string::npos);
}

TEST_CASE("sweep aggregates one row per config and keeps going") {
  auto dir = fresh_dir("sweep");
  ExperimentConfig a;
  a.gnp = {150, 0.3, 2, 5};
  a.suites = {"structure", "mixing"};
  a.output_dir = (dir / "a").string();

  ExperimentConfig b = a;
  b.gnp.p = 0.4;
  b.gnp.seed = 6;
  b.output_dir = (dir / "b").string();

  ExperimentConfig broken = a;
  broken.graph_file = (dir / "missing.txt").string();
  broken.output_dir = (dir / "c").string();

  auto results = sweep({a, b, broken}, (dir / "sweep.csv").string());
  REQUIRE(results.size() == 3);
  CHECK(results[0].pass);
  CHECK(results[1].pass);
  CHECK_FALSE(results[2].pass);
  CHECK_FALSE(results[2].error.empty());

  auto csv = slurp(dir / "sweep.csv");
  CHECK(csv.find("error") != std::string::npos);
  // header + 3 rows
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);

  CHECK_THROWS_AS(sweep({}, ""), std::invalid_argument);
}
