#include "fraudgraph/graph.hpp"

#include <algorithm>
#include <sstream>

#include "fraudgraph/errors.hpp"

namespace fraudgraph {

NodeId NodeTable::Add(std::span<const double> features, std::uint8_t label,
                      std::int32_t ring_id, RingType ring_type) {
  if (features.size() != width()) {
    throw ValidationError("feature row width " +
                          std::to_string(features.size()) +
                          " does not match table width " +
                          std::to_string(width()));
  }
  features_.insert(features_.end(), features.begin(), features.end());
  labels_.push_back(label);
  ring_ids_.push_back(ring_id);
  ring_types_.push_back(static_cast<std::uint8_t>(ring_type));
  return static_cast<NodeId>(labels_.size() - 1);
}

void NodeTable::SetMembership(NodeId id, std::uint8_t label,
                              std::int32_t ring_id, RingType ring_type) {
  labels_[id] = label;
  ring_ids_[id] = ring_id;
  ring_types_[id] = static_cast<std::uint8_t>(ring_type);
}

bool NodeTable::DerivedFraud(NodeId id, NodeType type) const {
  if (CarriesLabel(type)) return labels_[id] != 0;
  return ring_ids_[id] >= 0;
}

void NodeTable::DropColumn(std::size_t col) {
  const std::size_t old_width = width();
  std::vector<double> kept;
  kept.reserve(size() * (old_width - 1));
  for (std::size_t row = 0; row < size(); ++row) {
    for (std::size_t c = 0; c < old_width; ++c) {
      if (c != col) kept.push_back(features_[row * old_width + c]);
    }
  }
  features_ = std::move(kept);
  feature_names_.erase(feature_names_.begin() +
                       static_cast<std::ptrdiff_t>(col));
}

void NodeTable::PermuteRows(std::span<const NodeId> perm) {
  const std::size_t w = width();
  std::vector<double> features(features_.size());
  std::vector<std::uint8_t> labels(labels_.size());
  std::vector<std::int32_t> ring_ids(ring_ids_.size());
  std::vector<std::uint8_t> ring_types(ring_types_.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    const std::size_t old = perm[i];
    std::copy_n(features_.begin() + static_cast<std::ptrdiff_t>(old * w), w,
                features.begin() + static_cast<std::ptrdiff_t>(i * w));
    labels[i] = labels_[old];
    ring_ids[i] = ring_ids_[old];
    ring_types[i] = ring_types_[old];
  }
  features_ = std::move(features);
  labels_ = std::move(labels);
  ring_ids_ = std::move(ring_ids);
  ring_types_ = std::move(ring_types);
}

GraphData GraphData::Empty() {
  GraphData g;
  for (NodeType t : kAllNodeTypes) {
    g.nodes[Index(t)] = NodeTable(DefaultFeatureNames(t));
  }
  return g;
}

std::size_t GraphData::TotalNodes() const {
  std::size_t total = 0;
  for (const auto& t : nodes) total += t.size();
  return total;
}

std::size_t GraphData::TotalEdges() const {
  std::size_t total = 0;
  for (const auto& e : edges) total += e.size();
  return total;
}

void GraphData::SortEdges() {
  for (auto& list : edges) std::sort(list.begin(), list.end());
}

std::size_t ValidationReport::Count(Violation::Kind kind) const {
  return static_cast<std::size_t>(
      std::count_if(violations.begin(), violations.end(),
                    [&](const Violation& v) { return v.kind == kind; }));
}

std::string ValidationReport::Summary(std::size_t max_lines) const {
  if (ok()) return "valid";
  std::ostringstream out;
  out << violations.size() << " violation(s)";
  for (std::size_t i = 0; i < violations.size() && i < max_lines; ++i) {
    const auto& v = violations[i];
    out << "\n  " << v.where;
    if (v.id >= 0) out << "[" << v.id << "]";
    out << ": " << v.message;
  }
  return out.str();
}

ValidationReport Validate(const GraphData& graph, bool strict_widths) {
  ValidationReport report;
  auto add = [&](Violation::Kind kind, std::string_view where,
                 std::int64_t id, std::string message) {
    report.violations.push_back(
        {kind, std::string(where), id, std::move(message)});
  };

  for (NodeType t : kAllNodeTypes) {
    const NodeTable& table = graph.table(t);
    const auto name = NodeTypeName(t);
    if (strict_widths && table.width() != DefaultFeatureNames(t).size()) {
      add(Violation::Kind::kFeatureWidth, name, -1,
          "width " + std::to_string(table.width()) + ", expected " +
              std::to_string(DefaultFeatureNames(t).size()));
    }
    const std::size_t n = table.size();
    if (table.features().size() != n * table.width() ||
        table.ring_ids().size() != n || table.ring_types().size() != n) {
      add(Violation::Kind::kColumnLength, name, -1,
          "column lengths disagree with row count");
      continue;
    }
    for (NodeId id = 0; id < n; ++id) {
      const bool in_ring = table.ring_id(id) >= 0;
      const bool typed = table.ring_type(id) != RingType::kNone;
      if (in_ring != typed || table.ring_types()[id] > 3) {
        add(Violation::Kind::kRingConsistency, name, id,
            "ring_id " + std::to_string(table.ring_id(id)) +
                " with ring_type " +
                std::to_string(table.ring_types()[id]));
      }
      if (table.label(id) > 1) {
        add(Violation::Kind::kLabelConsistency, name, id,
            "label must be 0 or 1");
      } else if (CarriesLabel(t) && table.label(id) == 1 && !in_ring) {
        add(Violation::Kind::kLabelConsistency, name, id,
            "fraud label without ring membership");
      }
    }
  }

  for (Relation r : kAllRelations) {
    const auto sig = Signature(r);
    const std::size_t n_src = graph.table(sig.source).size();
    const std::size_t n_dst = graph.table(sig.target).size();
    const auto& list = graph.edge_list(r);
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (list[i].src >= n_src || list[i].dst >= n_dst) {
        add(Violation::Kind::kEdgeRange, RelationName(r),
            static_cast<std::int64_t>(i),
            "endpoint (" + std::to_string(list[i].src) + ", " +
                std::to_string(list[i].dst) + ") out of range");
      }
    }
  }
  return report;
}

std::string_view ShareChannelName(ShareChannel c) {
  return c == ShareChannel::kDevice ? "device-share" : "ip-share";
}

std::size_t ProjectedUserGraph::Count(ShareChannel c) const {
  return static_cast<std::size_t>(
      std::count_if(edges.begin(), edges.end(),
                    [&](const ProjectedEdge& e) { return e.channel == c; }));
}

namespace {

void SortUnique(std::vector<std::vector<NodeId>>& adjacency) {
  for (auto& list : adjacency) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
}

}  // namespace

std::vector<std::vector<NodeId>> ProjectedUserGraph::Adjacency(
    ShareChannel c) const {
  std::vector<std::vector<NodeId>> adjacency(n_users);
  for (const auto& e : edges) {
    if (e.channel != c) continue;
    adjacency[e.u].push_back(e.v);
    adjacency[e.v].push_back(e.u);
  }
  SortUnique(adjacency);
  return adjacency;
}

std::vector<std::vector<NodeId>> ProjectedUserGraph::UnionAdjacency() const {
  std::vector<std::vector<NodeId>> adjacency(n_users);
  for (const auto& e : edges) {
    adjacency[e.u].push_back(e.v);
    adjacency[e.v].push_back(e.u);
  }
  SortUnique(adjacency);
  return adjacency;
}

std::vector<std::vector<NodeId>> BuildAdjacency(const GraphData& graph,
                                                Relation r, bool reverse) {
  const auto sig = Signature(r);
  const NodeType keyed = reverse ? sig.target : sig.source;
  std::vector<std::vector<NodeId>> adjacency(graph.table(keyed).size());
  for (const Edge& e : graph.edge_list(r)) {
    if (reverse) {
      adjacency[e.dst].push_back(e.src);
    } else {
      adjacency[e.src].push_back(e.dst);
    }
  }
  return adjacency;
}

ProjectedUserGraph ProjectUserGraph(const GraphData& graph) {
  ProjectedUserGraph projected;
  projected.n_users = graph.table(NodeType::kUser).size();
  const std::pair<Relation, ShareChannel> channels[] = {
      {Relation::kUsesDevice, ShareChannel::kDevice},
      {Relation::kUsesIp, ShareChannel::kIp}};
  for (const auto& [relation, channel] : channels) {
    auto hubs = BuildAdjacency(graph, relation, /*reverse=*/true);
    SortUnique(hubs);
    for (const auto& users : hubs) {
      for (std::size_t i = 0; i < users.size(); ++i) {
        for (std::size_t j = i + 1; j < users.size(); ++j) {
          projected.edges.push_back({users[i], users[j], channel});
        }
      }
    }
  }
  std::sort(projected.edges.begin(), projected.edges.end());
  projected.edges.erase(
      std::unique(projected.edges.begin(), projected.edges.end()),
      projected.edges.end());
  return projected;
}

GraphData DropRelation(const GraphData& graph, std::string_view selector) {
  GraphData out = graph;
  for (Relation r : ResolveRelationSelector(selector)) {
    out.edge_list(r).clear();
  }
  return out;
}

GraphData DropRelation(const GraphData& graph, Relation relation) {
  GraphData out = graph;
  out.edge_list(relation).clear();
  return out;
}

GraphData DropUserFeature(const GraphData& graph,
                          std::string_view feature_name) {
  const auto& names = graph.table(NodeType::kUser).feature_names();
  auto it = std::find(names.begin(), names.end(), feature_name);
  if (it == names.end()) {
    throw ConfigError("unknown user feature '" + std::string(feature_name) +
                      "'");
  }
  GraphData out = graph;
  out.table(NodeType::kUser)
      .DropColumn(static_cast<std::size_t>(it - names.begin()));
  return out;
}

void PermuteNodes(GraphData& graph, NodeType type,
                  std::span<const NodeId> perm) {
  std::vector<NodeId> new_id_of(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    new_id_of[perm[i]] = static_cast<NodeId>(i);
  }
  graph.table(type).PermuteRows(perm);
  for (Relation r : kAllRelations) {
    const auto sig = Signature(r);
    for (Edge& e : graph.edge_list(r)) {
      if (sig.source == type) e.src = new_id_of[e.src];
      if (sig.target == type) e.dst = new_id_of[e.dst];
    }
  }
}

}  // namespace fraudgraph
