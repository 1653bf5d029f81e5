#include <gtest/gtest.h>

#include <map>
#include <numeric>

#include "fraudgraph/errors.hpp"
#include "fraudgraph/generator.hpp"
#include "fraudgraph/split.hpp"

namespace fraudgraph {
namespace {

const GenerationResult& SmallRun() {
  static const GenerationResult r = [] {
    GeneratorConfig c;
    c.scale = "small";
    return Generate(c);
  }();
  return r;
}

TEST(Apportion, LargestRemainderWithEarlierTieBreak) {
  const SplitFractions f;
  EXPECT_EQ(Apportion(10, f), (std::array<std::size_t, 3>{6, 2, 2}));
  // 4.2 / 1.4 / 1.4: val and test tie on remainder, val wins.
  EXPECT_EQ(Apportion(7, f), (std::array<std::size_t, 3>{4, 2, 1}));
  EXPECT_EQ(Apportion(3, f), (std::array<std::size_t, 3>{2, 1, 0}));
  EXPECT_EQ(Apportion(0, f), (std::array<std::size_t, 3>{0, 0, 0}));
  EXPECT_EQ(Apportion(54, f), (std::array<std::size_t, 3>{32, 11, 11}));
  EXPECT_EQ(Apportion(52, f), (std::array<std::size_t, 3>{31, 11, 10}));
}

TEST(Apportion, AlwaysSumsToN) {
  const SplitFractions f{0.5, 0.3, 0.2};
  for (std::size_t n = 0; n < 200; ++n) {
    const auto a = Apportion(n, f);
    EXPECT_EQ(a[0] + a[1] + a[2], n);
    for (int p = 0; p < 3; ++p) {
      const double quota = n * f[static_cast<Partition>(p)];
      EXPECT_LE(std::abs(static_cast<double>(a[p]) - quota), 1.0);
    }
  }
}

TEST(SplitFractions, ValidateRejectsBadFractions) {
  EXPECT_NO_THROW(SplitFractions{}.Validate());
  EXPECT_THROW((SplitFractions{0.6, 0.2, 0.3}.Validate()), ConfigError);
  EXPECT_THROW((SplitFractions{1.0, 0.0, 0.0}.Validate()), ConfigError);
  EXPECT_THROW((SplitFractions{0.9, 0.2, -0.1}.Validate()), ConfigError);
}

TEST(Split, RingsStayWholeAndNothingLeaks) {
  const auto& r = SmallRun();
  const SplitAssignment a = Split(r.graph, r.rings, {}, 42);
  const NodeTable& users = r.graph.table(NodeType::kUser);
  ASSERT_EQ(a.user_partition.size(), users.size());
  ASSERT_EQ(a.ring_partition.size(), r.rings.size());
  for (const RingRecord& ring : r.rings) {
    for (NodeId u : ring.member_user_ids) {
      EXPECT_EQ(a.user_partition[u], a.ring_partition[ring.ring_id]);
    }
  }
  EXPECT_TRUE(VerifyNoLeakage(r.graph, r.rings, a).ok());
}

TEST(Split, PerTypeRingCountsFollowApportion) {
  const auto& r = SmallRun();
  const SplitAssignment a = Split(r.graph, r.rings, {}, 42);
  std::map<std::pair<RingType, Partition>, std::size_t> counts;
  for (const RingRecord& ring : r.rings) {
    ++counts[{ring.type, a.ring_partition[ring.ring_id]}];
  }
  for (RingType t : kAllRingTypes) {
    const auto expected = Apportion(r.config.RingCount(t), a.fractions);
    for (Partition p : kAllPartitions) {
      EXPECT_EQ((counts[{t, p}]), expected[static_cast<int>(p)]);
    }
  }
}

TEST(Split, LegitUsersFollowApportion) {
  const auto& r = SmallRun();
  const SplitAssignment a = Split(r.graph, r.rings, {}, 42);
  const NodeTable& users = r.graph.table(NodeType::kUser);
  std::array<std::size_t, 3> legit{};
  std::size_t n_legit = 0;
  for (NodeId u = 0; u < users.size(); ++u) {
    if (users.ring_id(u) >= 0) continue;
    ++n_legit;
    ++legit[static_cast<int>(a.user_partition[u])];
  }
  EXPECT_EQ(legit, Apportion(n_legit, a.fractions));
}

TEST(Split, DeterministicAndSeedSensitive) {
  const auto& r = SmallRun();
  EXPECT_EQ(Split(r.graph, r.rings, {}, 5), Split(r.graph, r.rings, {}, 5));
  EXPECT_FALSE(Split(r.graph, r.rings, {}, 5) == Split(r.graph, r.rings, {}, 6));
}

TEST(Split, WarnsWhenATypeHasFewerRingsThanPartitions) {
  GeneratorConfig c;
  c.scale = "toy";  // two rings per type
  const GenerationResult r = Generate(c);
  const SplitAssignment a = Split(r.graph, r.rings, {}, 1);
  EXPECT_EQ(a.warnings.size(), 3u);
  EXPECT_TRUE(SmallRun().rings.size() > 3 &&
              Split(SmallRun().graph, SmallRun().rings, {}, 1).warnings.empty());
}

TEST(Split, OneHundredSixtyRingsGiveThirtyTwoTestRings) {
  GeneratorConfig c;  // medium: 160 rings need about 2300 users
  c.n_ticketing_rings = 54;
  c.n_ghost_hotel_rings = 54;
  c.n_ato_rings = 52;
  c.calibration = CalibrationMode::kReport;
  const GenerationResult r = Generate(c);
  const SplitAssignment a = Split(r.graph, r.rings, {}, 42);
  std::size_t test = 0;
  for (Partition p : a.ring_partition) test += p == Partition::kTest;
  EXPECT_EQ(test, 32u);
  EXPECT_TRUE(VerifyNoLeakage(r.graph, r.rings, a).ok());
}

TEST(Leakage, DetectsMovedMember) {
  const auto& r = SmallRun();
  SplitAssignment a = Split(r.graph, r.rings, {}, 42);
  const RingRecord& ring = r.rings.front();  // ticketing: shares devices
  const NodeId u = ring.member_user_ids.front();
  a.user_partition[u] = a.ring_partition[ring.ring_id] == Partition::kTest
                            ? Partition::kTrain
                            : Partition::kTest;
  const LeakageReport leak = VerifyNoLeakage(r.graph, r.rings, a);
  EXPECT_EQ(leak.spanning_rings, 1u);
  EXPECT_GT(leak.leaking_devices + leak.leaking_ips, 0u);
  EXPECT_FALSE(leak.ok());

  SplitAssignment short_split = a;
  short_split.user_partition.pop_back();
  EXPECT_THROW(VerifyNoLeakage(r.graph, r.rings, short_split), ValidationError);
}

}  // namespace
}  // namespace fraudgraph
