#include "fraudgraph/generator.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "fraudgraph/errors.hpp"

namespace fraudgraph {

double UserFraudRate(const GraphData& graph) {
  const NodeTable& users = graph.table(NodeType::kUser);
  if (users.size() == 0) return 0.0;
  std::size_t fraud = 0;
  for (NodeId u = 0; u < users.size(); ++u) fraud += users.label(u);
  return static_cast<double>(fraud) / static_cast<double>(users.size());
}

namespace {

void RemapIds(std::vector<NodeId>& ids, const std::vector<NodeId>& new_id,
              bool keep_order) {
  for (NodeId& id : ids) id = new_id[id];
  if (!keep_order) std::sort(ids.begin(), ids.end());
}

// Shuffles ids of every node type so that id order carries no label
// information, and rewrites the ring records to match.
void ShuffleIds(GraphData& graph, std::vector<RingRecord>& rings,
                std::uint64_t seed) {
  for (NodeType t : kAllNodeTypes) {
    const std::size_t n = graph.table(t).size();
    std::vector<NodeId> perm(n);
    std::iota(perm.begin(), perm.end(), NodeId{0});
    RandomStream rng(seed, "permute/" + std::string(NodeTypeName(t)));
    Shuffle(perm, rng);
    PermuteNodes(graph, t, perm);
    std::vector<NodeId> new_id(n);
    for (std::size_t i = 0; i < n; ++i) new_id[perm[i]] = static_cast<NodeId>(i);
    for (RingRecord& ring : rings) {
      switch (t) {
        case NodeType::kUser:
          RemapIds(ring.member_user_ids, new_id, false);
          break;
        case NodeType::kDevice:
          RemapIds(ring.shared_device_ids, new_id, false);
          break;
        case NodeType::kIpAddress:
          RemapIds(ring.shared_ip_ids, new_id, false);
          break;
        case NodeType::kHotel:
          RemapIds(ring.ghost_hotel_ids, new_id, false);
          break;
        case NodeType::kLoyaltyAccount:
          RemapIds(ring.mule_loyalty_ids, new_id, true);
          break;
        default: break;
      }
    }
  }
}

}  // namespace

GenerationResult Generate(const GeneratorConfig& request,
                          const TravelerParameters& legit,
                          const FraudShifts& shifts) {
  GenerationResult result;
  result.request = request;
  result.config = Resolve(request);
  const ResolvedConfig& config = result.config;

  const std::vector<RingPlan> plans = PlanRings(config);
  std::int64_t ring_users = 0;
  for (const auto& plan : plans) ring_users += plan.members();
  const std::int64_t n_legit =
      static_cast<std::int64_t>(config.n_users) - ring_users;
  if (n_legit < 1) {
    throw ConfigError("rings need " + std::to_string(ring_users) +
                      " users but n_users is " +
                      std::to_string(config.n_users));
  }

  // First passing factor wins; when none passes, keep the factor with the
  // smallest max |d| (earlier, i.e. larger, factor on ties).
  bool have = false;
  for (double factor : kShiftBackoff) {
    GraphData graph = GraphData::Empty();
    RandomStream legit_rng(config.seed, "legit");
    const CatalogPools pools = GenerateLegitPopulation(
        graph, static_cast<std::uint32_t>(n_legit), config.n_users, legit_rng,
        legit);
    std::vector<RingRecord> rings = InjectAll(
        graph, plans, config, pools, legit, shifts.Scaled(factor, legit));
    RefreshDerivedFeatures(graph);

    CalibrationReport cal;
    if (ring_users > 0) cal = ComputeCalibration(graph);
    const bool better =
        !have || cal.MaxAbsD() < result.calibration.MaxAbsD();
    if (better) {
      result.graph = std::move(graph);
      result.rings = std::move(rings);
      result.shift_factor = factor;
      result.calibration = std::move(cal);
      have = true;
    }
    if (ring_users == 0 || result.calibration.pass()) break;
  }

  const CalibrationReport& cal = result.calibration;
  if (config.calibration == CalibrationMode::kEnforce && !cal.features.empty() &&
      !cal.pass() && cal.n_fraud >= kCalibrationMinClassSize &&
      cal.n_legit >= kCalibrationMinClassSize) {
    throw ValidationError("calibration gate failed after back-off:\n" +
                          CalibrationText(cal));
  }

  ShuffleIds(result.graph, result.rings, config.seed);
  for (const auto& selector : config.relation_exclusions) {
    result.graph = DropRelation(result.graph, selector);
  }
  for (const auto& feature : config.feature_exclusions) {
    result.graph = DropUserFeature(result.graph, feature);
  }
  result.graph.SortEdges();
  result.fraud_rate = UserFraudRate(result.graph);
  return result;
}

std::string Summary(const GenerationResult& result) {
  const GraphData& g = result.graph;
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "scale=%s seed=%llu users=%zu\n",
                result.config.scale.c_str(),
                static_cast<unsigned long long>(result.config.seed),
                g.table(NodeType::kUser).size());
  out += buf;
  for (NodeType t : kAllNodeTypes) {
    std::snprintf(buf, sizeof buf, "  nodes %-16s %zu\n",
                  std::string(NodeTypeName(t)).c_str(), g.table(t).size());
    out += buf;
  }
  for (Relation r : kAllRelations) {
    std::snprintf(buf, sizeof buf, "  edges %-16s %zu\n",
                  std::string(RelationName(r)).c_str(), g.edge_list(r).size());
    out += buf;
  }
  std::size_t by_type[4] = {0, 0, 0, 0};
  for (const auto& ring : result.rings) ++by_type[static_cast<int>(ring.type)];
  std::snprintf(buf, sizeof buf,
                "rings=%zu (ticketing=%zu ghost_hotel=%zu ato=%zu)\n",
                result.rings.size(), by_type[1], by_type[2], by_type[3]);
  out += buf;
  std::snprintf(buf, sizeof buf, "fraud_rate=%.4f shift_factor=%g\n",
                result.fraud_rate, result.shift_factor);
  out += buf;
  if (!result.calibration.features.empty()) {
    std::snprintf(buf, sizeof buf, "calibration max|d|=%.4f %s\n",
                  result.calibration.MaxAbsD(),
                  result.calibration.pass() ? "pass" : "FAIL");
    out += buf;
  }
  return out;
}

}  // namespace fraudgraph
