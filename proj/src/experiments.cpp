#include "fraudgraph/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "fraudgraph/generator.hpp"

namespace fraudgraph {

BaselineComparison CompareBaselines(const GraphData& graph,
                                    const std::vector<RingRecord>& rings,
                                    const SplitAssignment& assignment,
                                    const TrainOptions& options) {
  BaselineComparison out;
  out.tabular = Evaluate(graph, rings, assignment,
                         PredictAll(TrainTabular(graph, assignment, options),
                                    graph));
  out.graph = Evaluate(
      graph, rings, assignment,
      PredictAll(TrainGraphAggregate(graph, assignment, options), graph));
  return out;
}

std::uint32_t SweepRingCount(int ring_size) {
  if (ring_size < 1) return 2;
  return std::max<std::uint32_t>(2, 300 / (3 * static_cast<std::uint32_t>(ring_size)));
}

GeneratorConfig SweepConditionConfig(const GeneratorConfig& base,
                                     int ring_size) {
  GeneratorConfig c = base;
  const std::uint32_t n = SweepRingCount(ring_size);
  c.n_ticketing_rings = n;
  c.n_ghost_hotel_rings = n;
  c.n_ato_rings = n;
  c.ticketing_size = SizeRange{ring_size, ring_size};
  c.ghost_reviewers = SizeRange{ring_size, ring_size};
  c.ato_compromised = SizeRange{ring_size, ring_size};
  c.widen_size_bounds = true;
  c.fraud_rate_target.reset();
  c.calibration = CalibrationMode::kReport;
  return c;
}

SweepResult RunSweep(const GeneratorConfig& base,
                     const SplitFractions& fractions,
                     const TrainOptions& options) {
  SweepResult result;
  for (int r : kSweepRingSizes) {
    const GeneratorConfig config = SweepConditionConfig(base, r);
    const GenerationResult gen = Generate(config);
    const SplitAssignment split =
        Split(gen.graph, gen.rings, fractions, gen.config.seed);
    const LinearModel model = TrainGraphAggregate(gen.graph, split, options);
    const std::vector<double> scores = PredictAll(model, gen.graph);
    const auto recovery = RingRecovery(scores, gen.rings, split);
    const NodeTable& users = gen.graph.table(NodeType::kUser);

    for (std::size_t k = 0; k < kAllRingTypes.size(); ++k) {
      const RingType type = kAllRingTypes[k];
      SweepRow row;
      row.ring_size = r;
      row.type = type;
      row.n_rings = gen.config.RingCount(type);
      row.n_test_rings = recovery[k].total;
      row.rings_recovered = recovery[k].recovered;
      std::vector<double> s;
      std::vector<std::uint8_t> l;
      for (NodeId u : split.Users(Partition::kTest)) {
        const RingType t = users.ring_type(u);
        if (t != RingType::kNone && t != type) continue;
        s.push_back(scores[u]);
        l.push_back(t == type ? 1 : 0);
        row.n_test_fraud += t == type;
      }
      if (row.n_test_fraud > 0 && row.n_test_fraud < s.size()) {
        row.auc_roc = AucRoc(s, l);
        row.average_precision = AveragePrecision(s, l);
      } else {
        row.auc_roc = std::numeric_limits<double>::quiet_NaN();
        row.average_precision = std::numeric_limits<double>::quiet_NaN();
      }
      row.small_test_warning = row.n_test_rings <= kSmallTestRingCount;
      if (row.small_test_warning) {
        result.warnings.push_back(
            "ring size " + std::to_string(r) + ": only " +
            std::to_string(row.n_test_rings) + " " +
            std::string(RingTypeName(type)) +
            " rings in the test partition; per-type metrics are unstable");
      }
      result.rows.push_back(row);
    }
  }
  return result;
}

namespace {

std::string Num(double v) {
  if (std::isnan(v)) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

std::string SweepCsv(const SweepResult& result) {
  std::string out =
      "ring_size,ring_type,n_rings,n_test_rings,n_test_fraud_users,auc_roc,"
      "average_precision,rings_recovered,small_test_warning,model\n";
  for (const SweepRow& row : result.rows) {
    out += std::to_string(row.ring_size) + "," +
           std::string(RingTypeName(row.type)) + "," +
           std::to_string(row.n_rings) + "," +
           std::to_string(row.n_test_rings) + "," +
           std::to_string(row.n_test_fraud) + "," + Num(row.auc_roc) + "," +
           Num(row.average_precision) + "," +
           std::to_string(row.rings_recovered) + "," +
           (row.small_test_warning ? "1" : "0") + ",graph_aggregate_lr\n";
  }
  return out;
}

const std::vector<AblationCondition>& DefaultAblations() {
  static const std::vector<AblationCondition> kConditions = {
      {"full", {}, {}},
      {"no_device_ip", {"uses_device", "uses_ip"}, {}},
      {"no_wrote_about", {"wrote/about"}, {}},
      {"no_has_loyalty", {"has_loyalty"}, {}},
      {"no_made", {"made"}, {}},
      {"no_distinct_device_count", {}, {"distinct_device_count"}},
  };
  return kConditions;
}

GraphData ApplyAblation(const GraphData& graph,
                        const AblationCondition& condition) {
  GraphData out = graph;
  for (const auto& selector : condition.relations) {
    out = DropRelation(out, selector);
  }
  for (const auto& feature : condition.features) {
    out = DropUserFeature(out, feature);
  }
  return out;
}

std::vector<AblationRow> RunAblation(
    const GraphData& graph, const std::vector<RingRecord>& rings,
    const SplitAssignment& assignment,
    const std::vector<AblationCondition>& conditions,
    const TrainOptions& options) {
  std::vector<AblationRow> rows;
  for (const AblationCondition& c : conditions) {
    rows.push_back({c.name, CompareBaselines(ApplyAblation(graph, c), rings,
                                             assignment, options)});
  }
  return rows;
}

std::string AblationCsv(const std::vector<AblationRow>& rows) {
  std::string out =
      "condition,tabular_auc,graph_auc,gap,tabular_ghost_recovered,"
      "graph_ghost_recovered,ghost_test_rings\n";
  for (const AblationRow& row : rows) {
    const auto& t = row.result.tabular;
    const auto& g = row.result.graph;
    out += row.name + "," + Num(t.auc_roc) + "," + Num(g.auc_roc) + "," +
           Num(row.result.Gap()) + "," +
           std::to_string(t.recovery[1].recovered) + "," +
           std::to_string(g.recovery[1].recovered) + "," +
           std::to_string(g.recovery[1].total) + "\n";
  }
  return out;
}

}  // namespace fraudgraph
