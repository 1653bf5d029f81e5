#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fraudgraph/schema.hpp"

namespace fraudgraph {

using NodeId = std::uint32_t;
inline constexpr std::int32_t kNoRing = -1;

// Columnar table for one node type. Features are stored row-major with a
// fixed, named column order.
class NodeTable {
 public:
  NodeTable() = default;
  explicit NodeTable(std::vector<std::string> feature_names)
      : feature_names_(std::move(feature_names)) {}

  std::size_t size() const { return labels_.size(); }
  std::size_t width() const { return feature_names_.size(); }
  const std::vector<std::string>& feature_names() const {
    return feature_names_;
  }

  // Appends a node and returns its dense id.
  NodeId Add(std::span<const double> features, std::uint8_t label = 0,
             std::int32_t ring_id = kNoRing,
             RingType ring_type = RingType::kNone);

  std::span<const double> Row(NodeId id) const {
    return {features_.data() + static_cast<std::size_t>(id) * width(),
            width()};
  }
  double& At(NodeId id, std::size_t col) {
    return features_[static_cast<std::size_t>(id) * width() + col];
  }
  double At(NodeId id, std::size_t col) const {
    return features_[static_cast<std::size_t>(id) * width() + col];
  }

  std::uint8_t label(NodeId id) const { return labels_[id]; }
  std::int32_t ring_id(NodeId id) const { return ring_ids_[id]; }
  RingType ring_type(NodeId id) const {
    return static_cast<RingType>(ring_types_[id]);
  }
  void SetMembership(NodeId id, std::uint8_t label, std::int32_t ring_id,
                     RingType ring_type);

  // Fraud label used by analytics: the stored label for labeled types,
  // ring membership otherwise.
  bool DerivedFraud(NodeId id, NodeType type) const;

  const std::vector<double>& features() const { return features_; }
  const std::vector<std::uint8_t>& labels() const { return labels_; }
  const std::vector<std::int32_t>& ring_ids() const { return ring_ids_; }
  const std::vector<std::uint8_t>& ring_types() const { return ring_types_; }

  // Removes one feature column, preserving the order of the others.
  void DropColumn(std::size_t col);

  // Reorders rows so that new row new_id holds old row perm[new_id].
  void PermuteRows(std::span<const NodeId> perm);

  bool operator==(const NodeTable&) const = default;

 private:
  std::vector<std::string> feature_names_;
  std::vector<double> features_;
  std::vector<std::uint8_t> labels_;
  std::vector<std::int32_t> ring_ids_;
  std::vector<std::uint8_t> ring_types_;
};

struct Edge {
  NodeId src = 0;
  NodeId dst = 0;
  auto operator<=>(const Edge&) const = default;
};

// Heterogeneous property graph: one table per node type, one directed edge
// list per relation. Ids are dense and 0-based per type.
struct GraphData {
  std::array<NodeTable, kNodeTypeCount> nodes;
  std::array<std::vector<Edge>, kRelationCount> edges;

  // Empty graph with the default feature schema.
  static GraphData Empty();

  NodeTable& table(NodeType t) { return nodes[Index(t)]; }
  const NodeTable& table(NodeType t) const { return nodes[Index(t)]; }
  std::vector<Edge>& edge_list(Relation r) { return edges[Index(r)]; }
  const std::vector<Edge>& edge_list(Relation r) const {
    return edges[Index(r)];
  }
  void AddEdge(Relation r, NodeId src, NodeId dst) {
    edges[Index(r)].push_back({src, dst});
  }

  std::size_t TotalNodes() const;
  std::size_t TotalEdges() const;

  // Sorts every edge list by (src, dst).
  void SortEdges();

  bool operator==(const GraphData&) const = default;
};

struct Violation {
  enum class Kind {
    kFeatureWidth,
    kColumnLength,
    kEdgeRange,
    kRingConsistency,
    kLabelConsistency,
  };
  Kind kind;
  std::string where;  // node type or relation name
  std::int64_t id;    // offending node id or edge index, -1 when n/a
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::size_t Count(Violation::Kind kind) const;
  std::string Summary(std::size_t max_lines = 20) const;
};

// Checks feature widths (against the table's own column names and, when
// |strict_widths| is set, against the default schema widths), edge endpoint
// ranges, ring_id/ring_type consistency and label/ring consistency.
ValidationReport Validate(const GraphData& graph, bool strict_widths = false);

enum class ShareChannel : std::uint8_t { kDevice = 0, kIp = 1 };
std::string_view ShareChannelName(ShareChannel c);

struct ProjectedEdge {
  NodeId u = 0;  // u < v
  NodeId v = 0;
  ShareChannel channel = ShareChannel::kDevice;
  auto operator<=>(const ProjectedEdge&) const = default;
};

// Undirected user-user co-occurrence graph, deduplicated per channel and
// sorted by (u, v, channel).
struct ProjectedUserGraph {
  std::size_t n_users = 0;
  std::vector<ProjectedEdge> edges;

  std::size_t Count(ShareChannel c) const;
  // Per-user neighbor lists for one channel (or both when |channel| is
  // empty), each sorted and deduplicated.
  std::vector<std::vector<NodeId>> Adjacency(ShareChannel c) const;
  std::vector<std::vector<NodeId>> UnionAdjacency() const;
};

ProjectedUserGraph ProjectUserGraph(const GraphData& graph);

// Copy with the selected relation(s) emptied. "wrote/about" empties both
// review relations.
GraphData DropRelation(const GraphData& graph, std::string_view selector);
GraphData DropRelation(const GraphData& graph, Relation relation);

// Copy with one user feature column removed.
GraphData DropUserFeature(const GraphData& graph,
                          std::string_view feature_name);

// Renumbers the nodes of |type|: new id i is old id perm[i]. Edge endpoints
// are rewritten accordingly.
void PermuteNodes(GraphData& graph, NodeType type,
                  std::span<const NodeId> perm);

// Neighbour lists for one relation, indexed by source (or target when
// |reverse|).
std::vector<std::vector<NodeId>> BuildAdjacency(const GraphData& graph,
                                                Relation r, bool reverse);

}  // namespace fraudgraph
