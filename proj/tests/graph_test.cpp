#include <gtest/gtest.h>

#include <algorithm>

#include "fraudgraph/errors.hpp"
#include "fraudgraph/graph.hpp"

namespace fraudgraph {
namespace {

std::vector<double> Zeros(NodeType t) {
  return std::vector<double>(DefaultFeatureNames(t).size(), 0.0);
}

// Four users (0, 1 fraud in ring 0), two devices, two IPs.
//   device 0: users 0, 1     device 1: users 1, 2, 3
//   ip 0:     users 0, 1, 1  ip 1:     user 3
GraphData SmallGraph() {
  GraphData g = GraphData::Empty();
  auto& users = g.table(NodeType::kUser);
  for (int i = 0; i < 4; ++i) {
    auto row = Zeros(NodeType::kUser);
    row[user_col::kAccountAgeDays] = 10.0 * i;
    if (i < 2) {
      users.Add(row, 1, 0, RingType::kTicketing);
    } else {
      users.Add(row);
    }
  }
  for (int i = 0; i < 2; ++i) {
    g.table(NodeType::kDevice).Add(Zeros(NodeType::kDevice));
    g.table(NodeType::kIpAddress).Add(Zeros(NodeType::kIpAddress));
  }
  g.AddEdge(Relation::kUsesDevice, 0, 0);
  g.AddEdge(Relation::kUsesDevice, 1, 0);
  g.AddEdge(Relation::kUsesDevice, 1, 1);
  g.AddEdge(Relation::kUsesDevice, 2, 1);
  g.AddEdge(Relation::kUsesDevice, 3, 1);
  g.AddEdge(Relation::kUsesIp, 0, 0);
  g.AddEdge(Relation::kUsesIp, 1, 0);
  g.AddEdge(Relation::kUsesIp, 1, 0);
  g.AddEdge(Relation::kUsesIp, 3, 1);
  return g;
}

TEST(Schema, NamesRoundTrip) {
  for (NodeType t : kAllNodeTypes) EXPECT_EQ(ParseNodeType(NodeTypeName(t)), t);
  for (Relation r : kAllRelations) EXPECT_EQ(ParseRelation(RelationName(r)), r);
  for (RingType t : kAllRingTypes) EXPECT_EQ(ParseRingType(RingTypeName(t)), t);
  EXPECT_FALSE(ParseRelation("likes").has_value());
  EXPECT_EQ(ResolveRelationSelector("wrote/about"),
            (std::vector<Relation>{Relation::kWrote, Relation::kAbout}));
  EXPECT_THROW(ResolveRelationSelector("likes"), ConfigError);
}

TEST(Schema, FeatureWidths) {
  EXPECT_EQ(DefaultFeatureNames(NodeType::kUser).size(), 10u);
  EXPECT_EQ(DefaultFeatureNames(NodeType::kUser)[user_col::kDistinctDeviceCount],
            "distinct_device_count");
  EXPECT_EQ(DefaultFeatureNames(NodeType::kBooking).size(), 9u);
  EXPECT_EQ(DefaultFeatureNames(NodeType::kHotel).size(), 9u);
}

TEST(Validate, AcceptsConsistentGraph) {
  const ValidationReport r = Validate(SmallGraph(), true);
  EXPECT_TRUE(r.ok()) << r.Summary();
}

TEST(Validate, FlagsEdgeOutOfRange) {
  GraphData g = SmallGraph();
  g.AddEdge(Relation::kUsesDevice, 0, 9);
  g.AddEdge(Relation::kUsesIp, 7, 0);
  const ValidationReport r = Validate(g);
  EXPECT_EQ(r.Count(Violation::Kind::kEdgeRange), 2u);
}

TEST(Validate, FlagsRingAndLabelInconsistency) {
  GraphData g = SmallGraph();
  auto& users = g.table(NodeType::kUser);
  users.SetMembership(2, 0, 3, RingType::kNone);  // ring id without a type
  users.SetMembership(3, 1, kNoRing, RingType::kNone);  // fraud outside a ring
  const ValidationReport r = Validate(g);
  EXPECT_EQ(r.Count(Violation::Kind::kRingConsistency), 1u);
  EXPECT_EQ(r.Count(Violation::Kind::kLabelConsistency), 1u);
  EXPECT_FALSE(r.ok());
}

TEST(Validate, StrictWidthsCatchDroppedColumn) {
  GraphData g = DropUserFeature(SmallGraph(), "velocity_score");
  EXPECT_TRUE(Validate(g, false).ok());
  EXPECT_GT(Validate(g, true).Count(Violation::Kind::kFeatureWidth), 0u);
}

TEST(Projection, DeduplicatesPerChannel) {
  const ProjectedUserGraph p = ProjectUserGraph(SmallGraph());
  // device: {0,1}, {1,2}, {1,3}, {2,3}; ip: {0,1} once despite the repeat.
  EXPECT_EQ(p.Count(ShareChannel::kDevice), 4u);
  EXPECT_EQ(p.Count(ShareChannel::kIp), 1u);
  EXPECT_TRUE(std::is_sorted(p.edges.begin(), p.edges.end()));
  for (const auto& e : p.edges) EXPECT_LT(e.u, e.v);
  const auto adj = p.UnionAdjacency();
  EXPECT_EQ(adj[0], (std::vector<NodeId>{1}));
  EXPECT_EQ(adj[1], (std::vector<NodeId>{0, 2, 3}));
  EXPECT_EQ(p.Adjacency(ShareChannel::kIp)[3].size(), 0u);
}

TEST(DropRelation, EmptiesOnlySelected) {
  const GraphData g = SmallGraph();
  const GraphData d = DropRelation(g, "uses_ip");
  EXPECT_TRUE(d.edge_list(Relation::kUsesIp).empty());
  EXPECT_EQ(d.edge_list(Relation::kUsesDevice), g.edge_list(Relation::kUsesDevice));
  EXPECT_EQ(d.nodes, g.nodes);
  EXPECT_THROW(DropRelation(g, "nope"), ConfigError);
}

TEST(DropUserFeature, RemovesOneColumn) {
  const GraphData g = SmallGraph();
  const GraphData d = DropUserFeature(g, "account_age_days");
  const auto& t = d.table(NodeType::kUser);
  EXPECT_EQ(t.width(), 9u);
  EXPECT_EQ(std::count(t.feature_names().begin(), t.feature_names().end(),
                       "account_age_days"),
            0);
  EXPECT_EQ(t.feature_names()[0], "booking_count_30d");
  EXPECT_THROW(DropUserFeature(g, "nope"), ConfigError);
}

TEST(PermuteNodes, RewritesEdgesAndRows) {
  GraphData g = SmallGraph();
  const std::vector<NodeId> perm = {3, 2, 1, 0};  // reverse users
  PermuteNodes(g, NodeType::kUser, perm);
  const auto& users = g.table(NodeType::kUser);
  EXPECT_DOUBLE_EQ(users.At(0, user_col::kAccountAgeDays), 30.0);
  EXPECT_EQ(users.label(3), 1);
  EXPECT_EQ(users.label(0), 0);
  // old user 3 -> new 0 used ip 1.
  const auto& ips = g.edge_list(Relation::kUsesIp);
  EXPECT_NE(std::find(ips.begin(), ips.end(), Edge{0, 1}), ips.end());
  EXPECT_TRUE(Validate(g).ok());
  // The projection is isomorphic: same edge counts.
  EXPECT_EQ(ProjectUserGraph(g).Count(ShareChannel::kDevice), 4u);
}

TEST(Adjacency, ForwardAndReverse) {
  const GraphData g = SmallGraph();
  const auto fwd = BuildAdjacency(g, Relation::kUsesDevice, false);
  const auto rev = BuildAdjacency(g, Relation::kUsesDevice, true);
  EXPECT_EQ(fwd.size(), 4u);
  EXPECT_EQ(rev.size(), 2u);
  EXPECT_EQ(rev[1].size(), 3u);
  EXPECT_EQ(fwd[1].size(), 2u);
}

TEST(GraphData, SortEdgesAndTotals) {
  GraphData g = SmallGraph();
  g.AddEdge(Relation::kUsesDevice, 0, 1);
  g.SortEdges();
  const auto& d = g.edge_list(Relation::kUsesDevice);
  EXPECT_TRUE(std::is_sorted(d.begin(), d.end()));
  EXPECT_EQ(g.TotalNodes(), 8u);
  EXPECT_EQ(g.TotalEdges(), 10u);
}

}  // namespace
}  // namespace fraudgraph
