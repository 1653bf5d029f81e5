#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fraudgraph/cli.hpp"
#include "fraudgraph/export.hpp"

namespace fraudgraph {
namespace fs = std::filesystem;
namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "fraudgraph");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code =
      RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::size_t CountLines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / "fg_cli_test";
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    bundle_ = (dir_ / "bundle").string();
    const CliRun r = Cli({"generate", "--scale", "small", "--seed", "11", "--out",
                       bundle_});
    ASSERT_EQ(r.code, kExitOk) << r.err;
  }
  static void TearDownTestSuite() { fs::remove_all(dir_); }
  static fs::path dir_;
  static std::string bundle_;
};
fs::path CliTest::dir_;
std::string CliTest::bundle_;

TEST_F(CliTest, GenerateReportsDigestAndConfig) {
  const std::string again = (dir_ / "again").string();
  const CliRun r = Cli({"generate", "--scale", "small", "--seed", "11", "--out",
                     again});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("digest=" + LoadBundle(bundle_).digest),
            std::string::npos);
  EXPECT_NE(r.out.find("config: {"), std::string::npos);
}

TEST_F(CliTest, AnalyzePrintsEverySection) {
  const CliRun r = Cli({"analyze", "--bundle", bundle_});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  for (const char* word : {"isolation", "leakage", "homophily", "calibration",
                           "ticketing"}) {
    EXPECT_NE(r.out.find(word), std::string::npos) << word;
  }
}

TEST_F(CliTest, EvaluatePerfectScores) {
  const Bundle b = LoadBundle(bundle_);
  const auto& users = b.graph.table(NodeType::kUser);
  const std::string path = (dir_ / "oracle.tsv").string();
  {
    std::ofstream f(path);
    for (NodeId u = 0; u < users.size(); ++u) {
      f << u << '\t' << static_cast<int>(users.label(u)) << '\n';
    }
  }
  const CliRun r =
      Cli({"evaluate", "--bundle", bundle_, "--scores", path, "--format", "csv"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("auc_roc,,1,"), std::string::npos) << r.out;
  std::istringstream lines(r.out);
  std::string line;
  int rows = 0;
  while (std::getline(lines, line)) {
    if (line.rfind("ring_recovery,", 0) != 0) continue;
    ++rows;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cells.push_back(c);
    ASSERT_EQ(cells.size(), 6u);
    EXPECT_EQ(cells[2], cells[3]) << line;  // recovered == total
  }
  EXPECT_EQ(rows, 3);
}

TEST_F(CliTest, EvaluateNamesMissingUser) {
  const Bundle b = LoadBundle(bundle_);
  NodeId missing = 0;
  for (const auto& ring : b.rings) {
    if (b.assignment.ring_partition[ring.ring_id] == Partition::kTest) {
      missing = ring.member_user_ids.front();
      break;
    }
  }
  const std::string path = (dir_ / "partial.tsv").string();
  {
    std::ofstream f(path);
    for (NodeId u = 0; u < b.graph.table(NodeType::kUser).size(); ++u) {
      if (u != missing) f << u << "\t0.5\n";
    }
  }
  const CliRun r = Cli({"evaluate", "--bundle", bundle_, "--scores", path});
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_NE(r.err.find(std::to_string(missing)), std::string::npos) << r.err;
}

TEST_F(CliTest, BaselineWritesScores) {
  const std::string scores = (dir_ / "graph.tsv").string();
  const CliRun r = Cli({"baseline", "--bundle", bundle_, "--model", "graph",
                     "--scores-out", scores});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const CliRun e = Cli({"evaluate", "--bundle", bundle_, "--scores", scores});
  EXPECT_EQ(e.code, kExitOk) << e.err;
  EXPECT_EQ(Cli({"baseline", "--bundle", bundle_, "--model", "gnn"}).code,
            kExitConfig);
}

TEST_F(CliTest, SplitRewritesAssignment) {
  const std::string out = (dir_ / "resplit").string();
  const CliRun r = Cli({"split", "--bundle", bundle_, "--seed", "5", "--out", out});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Bundle a = LoadBundle(bundle_);
  const Bundle b = LoadBundle(out);
  EXPECT_EQ(a.graph, b.graph);
  EXPECT_FALSE(a.assignment == b.assignment);
}

TEST_F(CliTest, AblateEmitsConditions) {
  const CliRun r = Cli({"ablate", "--bundle", bundle_});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("no_device_ip"), std::string::npos);
  EXPECT_NE(r.out.find("no_distinct_device_count"), std::string::npos);
}

TEST(Cli, SweepEmitsEighteenRows) {
  const CliRun r = Cli({"sweep"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(CountLines(r.out), 19u);
  EXPECT_NE(r.err.find("ring size 30"), std::string::npos) << r.err;
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(Cli({"--help"}).code, kExitOk);
  EXPECT_EQ(Cli({}).code, kExitConfig);
  EXPECT_EQ(Cli({"generate", "--bogus"}).code, kExitConfig);
  EXPECT_EQ(Cli({"generate", "--scale", "huge", "--out", "/tmp/x"}).code,
            kExitConfig);
  EXPECT_EQ(Cli({"analyze", "--bundle", "/nonexistent/bundle"}).code,
            kExitIo);
  const CliRun bad = Cli({"generate", "--scale", "toy", "--ticketing-size", "2",
                       "2", "--out", "/tmp/fg_cli_bad"});
  EXPECT_EQ(bad.code, kExitConfig);
  EXPECT_NE(bad.err.find("ticketing"), std::string::npos) << bad.err;
}

}  // namespace
}  // namespace fraudgraph
