#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kData = DGCLUST_TEST_DATA;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("dgclust_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  // Runs the CLI quietly; stdout lands in out().
  int run(const std::string& args) {
    const std::string cmd = "DGCLUST_LOG=quiet \"" + std::string(DGCLUST_CLI) + "\" " + args + " > \"" +
                            (dir_ / "stdout.txt").string() + "\" 2> \"" + (dir_ / "stderr.txt").string() + "\"";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string out() const { return slurp(dir_ / "stdout.txt"); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(Cli, IngestGolden) {
  ASSERT_EQ(run("ingest " + kData + "/trips_small.csv " + path("g.graph")), 0);
  EXPECT_EQ(slurp(path("g.graph")), slurp(kData + "/trips_small.graph"));
  const auto report = nlohmann::json::parse(slurp(path("g.graph.report.json")));
  EXPECT_EQ(report["rows_read"], 5);
  EXPECT_EQ(report["rows_dropped"], 1);
  EXPECT_EQ(report["nodes"], 3);
  EXPECT_EQ(report["edges"], 3);
  EXPECT_EQ(report["isolated_nodes"], nlohmann::json::array({5}));
  EXPECT_EQ(nlohmann::json::parse(out()), report);
  const auto manifest = nlohmann::json::parse(slurp(path("g.graph.manifest.json")));
  EXPECT_EQ(manifest["command"], "ingest");
  EXPECT_EQ(manifest["inputs"][0]["fnv1a64"].get<std::string>().size(), 16u);
}

TEST_F(Cli, IngestMissingColumnIsUsageError) {
  std::ofstream(path("bad.csv")) << "pickup_community_area,trip_seconds\n8,300\n";
  EXPECT_EQ(run("ingest " + path("bad.csv") + " " + path("g.graph")), 2);
  EXPECT_NE(slurp(path("stderr.txt")).find("dropoff_community_area"), std::string::npos);
  EXPECT_EQ(run("ingest " + path("absent.csv") + " " + path("g.graph")), 4);
}

TEST_F(Cli, ClusterTwoTrianglesGolden) {
  for (const char* alg : {"spectral-norm", "spectral-unnorm", "simple-sym", "leiden", "walktrap", "cdl", "svd"}) {
    const std::string k = std::string(alg) == "leiden" ? "" : " -k 2";
    ASSERT_EQ(run("cluster " + kData + "/two_triangles.graph -a " + alg + k + " -o " + path("a.csv")), 0) << alg;
    EXPECT_EQ(slurp(path("a.csv")), slurp(kData + "/two_triangles.expected.csv")) << alg;
  }
}

TEST_F(Cli, ClusterRerunIsByteIdentical) {
  ASSERT_EQ(run("synth --blocks 20,20 --seed 5 -o " + path("s.graph")), 0);
  for (const char* alg : {"svd", "randwalk", "leiden", "bibliometric"}) {
    const std::string base = "cluster " + path("s.graph") + " -a " + alg + " -k 2 --seed 7 -o ";
    ASSERT_EQ(run(base + path("x.csv") + " --manifest " + path("m.json")), 0) << alg;
    const std::string first = slurp(path("x.csv")), first_manifest = slurp(path("m.json"));
    ASSERT_EQ(run(base + path("x.csv") + " --manifest " + path("m.json")), 0) << alg;
    EXPECT_EQ(slurp(path("x.csv")), first) << alg;
    EXPECT_EQ(slurp(path("m.json")), first_manifest) << alg;
  }
}

TEST_F(Cli, CdlManifestRecordsTeleport) {
  std::ofstream(path("cycles.graph")) << "digraph 6\n1,2,3,4,5,6\n1,2,1,1\n2,3,1,1\n3,1,1,1\n4,5,1,1\n5,6,1,1\n6,4,1,1\n";
  ASSERT_EQ(run("cluster " + path("cycles.graph") + " -a cdl -k 2 -o " + path("a.csv")), 0);
  const auto m = nlohmann::json::parse(slurp(path("a.csv.manifest.json")));
  EXPECT_EQ(m["flags"]["teleport_applied"], true);
  EXPECT_EQ(m["parameters"]["teleport"], 0.15);
  EXPECT_EQ(slurp(path("a.csv")), slurp(kData + "/two_triangles.expected.csv"));
}

TEST_F(Cli, ClusterUsageErrors) {
  const std::string g = kData + "/two_triangles.graph";
  EXPECT_EQ(run("cluster " + g + " -a kmeans -k 2 -o " + path("a.csv")), 2);
  EXPECT_EQ(run("cluster " + g + " -a spectral-norm -k 9 -o " + path("a.csv")), 2);
  EXPECT_EQ(run("cluster " + g + " -a spectral-norm -k two -o " + path("a.csv")), 2);
  EXPECT_EQ(run("cluster " + g + " -a spectral-norm -k 2"), 2);
  EXPECT_EQ(run("cluster " + path("absent.graph") + " -a svd -k 2 -o " + path("a.csv")), 4);
  std::ofstream(path("dup.graph")) << "digraph 2\n1,2\n1,2,1,1\n1,2,1,1\n";
  EXPECT_EQ(run("cluster " + path("dup.graph") + " -a svd -k 2 -o " + path("a.csv")), 4);
  EXPECT_NE(slurp(path("stderr.txt")).find("line 4"), std::string::npos);
  EXPECT_EQ(run("frobnicate"), 2);
}

TEST_F(Cli, CompareIdenticalAssignments) {
  const std::string a = kData + "/two_triangles.expected.csv";
  ASSERT_EQ(run("compare " + a + " " + a + " -o " + path("cmp.json")), 0);
  const auto r = nlohmann::json::parse(slurp(path("cmp.json")));
  EXPECT_EQ(r["ari"], 1.0);
  EXPECT_EQ(r["nmi"], 1.0);
  EXPECT_EQ(r["compared"], 6);
  EXPECT_EQ(nlohmann::json::parse(out()), r);
}

TEST_F(Cli, SynthIsDeterministic) {
  ASSERT_EQ(run("synth --blocks 10,15 --p-in 0.4 --p-out 0.1 --w-in 1,2 --seed 3 -o " + path("a.graph")), 0);
  ASSERT_EQ(run("synth --blocks 10,15 --p-in 0.4 --p-out 0.1 --w-in 1,2 --seed 3 -o " + path("b.graph")), 0);
  EXPECT_EQ(slurp(path("a.graph")), slurp(path("b.graph")));
  EXPECT_EQ(slurp(path("a.graph.truth.csv")), slurp(path("b.graph.truth.csv")));
  EXPECT_EQ(run("synth --p-in 2 -o " + path("c.graph")), 2);
}

TEST_F(Cli, ExportDotGolden) {
  ASSERT_EQ(run("export " + kData + "/edge.graph " + kData + "/edge.assign.csv -o " + path("e.dot")), 0);
  EXPECT_EQ(slurp(path("e.dot")), slurp(kData + "/edge.expected.dot"));
  ASSERT_EQ(run("export " + kData + "/edge.graph " + kData + "/edge.assign.csv --format graphml -o " + path("e.xml")), 0);
  EXPECT_NE(slurp(path("e.xml")).find("<graphml"), std::string::npos);
  EXPECT_EQ(run("export " + kData + "/edge.graph " + kData + "/edge.assign.csv --format svg -o " + path("e.svg")), 2);
}

}  // namespace
