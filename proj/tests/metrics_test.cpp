#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>

#include "fraudgraph/errors.hpp"
#include "fraudgraph/generator.hpp"
#include "fraudgraph/metrics.hpp"

namespace fraudgraph {
namespace {

// ---- brute-force oracles ----

double PairwiseAuc(const std::vector<double>& s,
                   const std::vector<std::uint8_t>& y) {
  double wins = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!y[i]) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[j]) continue;
      pairs += 1.0;
      wins += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
    }
  }
  return wins / pairs;
}

double RankedAp(const std::vector<double>& s,
                const std::vector<std::uint8_t>& y) {
  std::vector<std::size_t> order(s.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return s[a] != s[b] ? s[a] > s[b] : a < b;
  });
  double hits = 0.0, sum = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (y[order[k]]) {
      hits += 1.0;
      sum += hits / static_cast<double>(k + 1);
    }
  }
  return sum / hits;
}

double BinaryF1(const std::vector<std::uint8_t>& p,
                const std::vector<std::uint8_t>& y, std::uint8_t cls) {
  double tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    tp += p[i] == cls && y[i] == cls;
    fp += p[i] == cls && y[i] != cls;
    fn += p[i] != cls && y[i] == cls;
  }
  if (tp + fp + fn == 0) return 1.0;
  return 2 * tp / (2 * tp + fp + fn);
}

TEST(MetricOracles, RandomInstancesMatchBruteForce) {
  std::mt19937_64 rng(20240601);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 49;
    std::vector<double> s(n);
    std::vector<std::uint8_t> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      // Coarse scores force ties.
      s[i] = static_cast<double>(rng() % 11) / 10.0;
      y[i] = rng() % 3 == 0;
    }
    y[0] = 1;
    y[1] = 0;
    EXPECT_NEAR(AucRoc(s, y), PairwiseAuc(s, y), 1e-9) << trial;
    EXPECT_NEAR(AveragePrecision(s, y), RankedAp(s, y), 1e-9) << trial;
    std::vector<std::uint8_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = s[i] >= 0.5;
    EXPECT_NEAR(MacroF1(p, y),
                (BinaryF1(p, y, 1) + BinaryF1(p, y, 0)) / 2.0, 1e-9)
        << trial;
  }
}

TEST(MetricOracles, KnownValues) {
  const std::vector<double> s = {0.9, 0.8, 0.7, 0.6};
  const std::vector<std::uint8_t> y = {1, 0, 1, 0};
  EXPECT_DOUBLE_EQ(AucRoc(s, y), 0.75);
  EXPECT_DOUBLE_EQ(AveragePrecision(s, y), (1.0 + 2.0 / 3.0) / 2.0);
  const std::vector<double> tied = {0.5, 0.5, 0.5};
  const std::vector<std::uint8_t> y2 = {0, 1, 0};
  EXPECT_DOUBLE_EQ(AucRoc(tied, y2), 0.5);
  // Index tie-break ranks the positive second.
  EXPECT_DOUBLE_EQ(AveragePrecision(tied, y2), 0.5);
}

TEST(MetricOracles, SingleClassThrows) {
  const std::vector<double> s = {0.1, 0.2};
  const std::vector<std::uint8_t> all_neg = {0, 0};
  const std::vector<std::uint8_t> all_pos = {1, 1};
  EXPECT_THROW(AucRoc(s, all_neg), ValidationError);
  EXPECT_THROW(AucRoc(s, all_pos), ValidationError);
  EXPECT_THROW(AveragePrecision(s, all_neg), ValidationError);
}

TEST(MacroF1, EmptyClassScoresOne) {
  const std::vector<std::uint8_t> none = {0, 0, 0};
  EXPECT_DOUBLE_EQ(MacroF1(none, none), 1.0);
}

TEST(ValThreshold, PicksBestValCutAndScoresTest) {
  const std::vector<double> vs = {0.1, 0.4, 0.6, 0.9};
  const std::vector<std::uint8_t> vy = {0, 0, 1, 1};
  const std::vector<double> ts = {0.2, 0.55, 0.65, 0.95};
  const std::vector<std::uint8_t> ty = {0, 1, 1, 1};
  const ThresholdF1 r = MacroF1AtValThreshold(vs, vy, ts, ty);
  EXPECT_DOUBLE_EQ(r.threshold, 0.6);
  // Test predictions {0, 0, 1, 1}: F1+ = 0.8, F1- = 2/3.
  EXPECT_NEAR(r.macro_f1, (0.8 + 2.0 / 3.0) / 2.0, 1e-12);
}

TEST(ValThreshold, ConstantValScoresFallBack) {
  const std::vector<double> vs = {0.3, 0.3, 0.3};
  const std::vector<std::uint8_t> vy = {0, 0, 1};
  const std::vector<double> ts = {0.1, 0.9};
  const std::vector<std::uint8_t> ty = {0, 1};
  const ThresholdF1 r = MacroF1AtValThreshold(vs, vy, ts, ty);
  // All-negative on val: F1- = 0.8, F1+ = 0 -> 0.4; all-positive: 0.5 / 2
  // -> 0.25. All-negative wins.
  EXPECT_TRUE(std::isinf(r.threshold));
  EXPECT_DOUBLE_EQ(r.macro_f1, (0.0 + 2.0 / 3.0) / 2.0);
  const std::vector<std::uint8_t> one_class = {0, 0, 0};
  EXPECT_THROW(MacroF1AtValThreshold(vs, one_class, ts, ty), ValidationError);
}

// ---- Wilson interval ----

// Closed form with hard-coded normal quantiles.
WilsonInterval WilsonOracle(double k, double n, double z) {
  const double p = k / n;
  const double denom = 1 + z * z / n;
  const double centre = (p + z * z / (2 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

TEST(Wilson, MatchesClosedForm) {
  constexpr double kZ90 = 1.6448536269514722;
  constexpr double kZ95 = 1.959963984540054;
  for (std::size_t n = 1; n <= 40; ++n) {
    for (std::size_t k = 0; k <= n; ++k) {
      const auto got = Wilson(k, n, 0.90);
      const auto want = WilsonOracle(k, n, kZ90);
      EXPECT_NEAR(got.lower, want.lower, 1e-12);
      EXPECT_NEAR(got.upper, want.upper, 1e-12);
    }
  }
  const auto w95 = Wilson(1, 6, 0.95);
  EXPECT_NEAR(w95.lower, WilsonOracle(1, 6, kZ95).lower, 1e-12);
  EXPECT_NEAR(w95.upper, WilsonOracle(1, 6, kZ95).upper, 1e-12);
}

TEST(Wilson, FrozenValues) {
  const auto w = Wilson(1, 6, 0.90);
  EXPECT_NEAR(w.lower, 0.03810557007934287, 1e-12);
  EXPECT_NEAR(w.upper, 0.5024170841246, 1e-12);
  const auto w95 = Wilson(1, 6, 0.95);
  EXPECT_NEAR(w95.lower, 0.030053369748306635, 1e-12);
  EXPECT_NEAR(w95.upper, 0.5635028221864702, 1e-12);
  EXPECT_DOUBLE_EQ(Wilson(0, 4).lower, 0.0);
  EXPECT_DOUBLE_EQ(Wilson(4, 4).upper, 1.0);
}

TEST(Wilson, RejectsBadArguments) {
  EXPECT_THROW(Wilson(0, 0), ConfigError);
  EXPECT_THROW(Wilson(5, 4), ConfigError);
  EXPECT_THROW(Wilson(1, 4, 1.0), ConfigError);
  EXPECT_THROW(Wilson(1, 4, 0.0), ConfigError);
}

// ---- ring recovery ----

TEST(RingRecovered, FourFifthsBoundary) {
  const std::vector<double> four_of_five = {0.9, 0.9, 0.9, 0.9, 0.1};
  const std::vector<double> three_of_five = {0.9, 0.9, 0.9, 0.1, 0.1};
  EXPECT_TRUE(RingRecovered(four_of_five));
  EXPECT_FALSE(RingRecovered(three_of_five));
  std::vector<double> ten(10, 0.1);
  std::fill(ten.begin(), ten.begin() + 8, 0.7);
  EXPECT_TRUE(RingRecovered(ten));
  ten[7] = 0.1;
  EXPECT_FALSE(RingRecovered(ten));
  // Strictly above the threshold.
  const std::vector<double> at_threshold(5, 0.5);
  EXPECT_FALSE(RingRecovered(at_threshold));
  const std::vector<double> just_above(5, std::nextafter(0.5, 1.0));
  EXPECT_TRUE(RingRecovered(just_above));
}

const GenerationResult& ToyRun() {
  static const GenerationResult r = [] {
    GeneratorConfig c;
    c.scale = "small";
    c.seed = 7;
    return Generate(c);
  }();
  return r;
}

TEST(Evaluate, PerfectOracleScores) {
  const auto& r = ToyRun();
  const SplitAssignment a = Split(r.graph, r.rings, {}, 7);
  const NodeTable& users = r.graph.table(NodeType::kUser);
  std::vector<double> scores(users.size());
  for (NodeId u = 0; u < users.size(); ++u) scores[u] = users.label(u);
  const MetricsReport m = Evaluate(r.graph, r.rings, a, scores);
  EXPECT_DOUBLE_EQ(m.auc_roc, 1.0);
  EXPECT_DOUBLE_EQ(m.average_precision, 1.0);
  EXPECT_DOUBLE_EQ(m.macro_f1, 1.0);
  ASSERT_EQ(m.recovery.size(), 3u);
  for (const RecoveryRow& row : m.recovery) {
    EXPECT_GT(row.total, 0u);
    EXPECT_EQ(row.recovered, row.total);
    EXPECT_DOUBLE_EQ(row.fraction, 1.0);
  }
}

TEST(Evaluate, MissingTestMemberIsNamed) {
  const auto& r = ToyRun();
  const SplitAssignment a = Split(r.graph, r.rings, {}, 7);
  std::vector<double> scores(r.graph.table(NodeType::kUser).size(), 0.2);
  NodeId missing = 0;
  for (const RingRecord& ring : r.rings) {
    if (a.ring_partition[ring.ring_id] == Partition::kTest) {
      missing = ring.member_user_ids.back();
      break;
    }
  }
  scores[missing] = std::numeric_limits<double>::quiet_NaN();
  try {
    RingRecovery(scores, r.rings, a);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find(std::to_string(missing)),
              std::string::npos)
        << e.what();
  }
  EXPECT_THROW(Evaluate(r.graph, r.rings, a, scores), ValidationError);
}

// ---- score files ----

class ScoreFileTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() / "fg_score_test";
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::string Write(const std::string& name, const std::string& body) {
    const auto p = (dir_ / name).string();
    std::ofstream(p, std::ios::binary) << body;
    return p;
  }
  std::filesystem::path dir_;
};

TEST_F(ScoreFileTest, RoundTrip) {
  const std::vector<NodeId> ids = {0, 3, 2};
  const std::vector<double> scores = {0.125, 1.0, 0.1 + 0.2};
  const auto p = (dir_ / "s.tsv").string();
  WriteScoreFile(p, ids, scores);
  const auto back = ReadScoreFile(p, 5);
  EXPECT_EQ(back[0], 0.125);
  EXPECT_EQ(back[3], 1.0);
  EXPECT_EQ(back[2], 0.1 + 0.2);
  EXPECT_TRUE(std::isnan(back[1]));
  EXPECT_TRUE(std::isnan(back[4]));
}

TEST_F(ScoreFileTest, RejectsMalformedRows) {
  EXPECT_THROW(ReadScoreFile(Write("dup", "1\t0.5\n1\t0.4\n"), 3),
               ValidationError);
  EXPECT_THROW(ReadScoreFile(Write("range", "3\t0.5\n"), 3), ValidationError);
  EXPECT_THROW(ReadScoreFile(Write("high", "0\t1.5\n"), 3), ValidationError);
  EXPECT_THROW(ReadScoreFile(Write("nan", "0\tnan\n"), 3), ValidationError);
  EXPECT_THROW(ReadScoreFile(Write("cols", "0 0.5\n"), 3), ValidationError);
  EXPECT_THROW(ReadScoreFile(Write("neg", "-1\t0.5\n"), 3), ValidationError);
  EXPECT_THROW(ReadScoreFile((dir_ / "absent").string(), 3), IoError);
}

}  // namespace
}  // namespace fraudgraph
