#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "fraudgraph/baselines.hpp"
#include "fraudgraph/config.hpp"
#include "fraudgraph/graph.hpp"
#include "fraudgraph/metrics.hpp"
#include "fraudgraph/rings.hpp"
#include "fraudgraph/split.hpp"

namespace fraudgraph {

struct BaselineComparison {
  MetricsReport tabular;
  MetricsReport graph;
  double Gap() const { return graph.auc_roc - tabular.auc_roc; }
};

// Trains both baselines on the train partition and evaluates them.
BaselineComparison CompareBaselines(const GraphData& graph,
                                    const std::vector<RingRecord>& rings,
                                    const SplitAssignment& assignment,
                                    const TrainOptions& options = {});

// ---- difficulty sweep ----

inline constexpr std::array<int, 6> kSweepRingSizes = {3, 5, 8, 12, 20, 30};
// Test rings of one type at or below this count trigger a warning.
inline constexpr std::size_t kSmallTestRingCount = 3;

// max(2, floor(300 / (3 r))).
std::uint32_t SweepRingCount(int ring_size);

// Generation config for one sweep condition: every ring type gets
// SweepRingCount(r) rings of exactly r members, size bounds widened and the
// calibration gate in report mode.
GeneratorConfig SweepConditionConfig(const GeneratorConfig& base,
                                     int ring_size);

struct SweepRow {
  int ring_size = 0;
  RingType type = RingType::kNone;
  std::uint32_t n_rings = 0;
  std::size_t n_test_rings = 0;
  std::size_t n_test_fraud = 0;
  // Over test legit users plus test members of this type; NaN when the type
  // has no test rings.
  double auc_roc = 0.0;
  double average_precision = 0.0;
  std::size_t rings_recovered = 0;
  bool small_test_warning = false;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // size-major, ring types in schema order
  std::vector<std::string> warnings;
};

// Generates each condition, splits it with |fractions| and the condition
// seed, trains the graph-aggregate baseline and scores it per ring type.
SweepResult RunSweep(const GeneratorConfig& base,
                     const SplitFractions& fractions = {},
                     const TrainOptions& options = {});

std::string SweepCsv(const SweepResult& result);

// ---- relation and feature ablation ----

struct AblationCondition {
  std::string name;
  std::vector<std::string> relations;  // relation selectors to empty
  std::vector<std::string> features;   // user feature columns to drop
};

// full, no_device_ip, no_wrote_about, no_has_loyalty, no_made,
// no_distinct_device_count.
const std::vector<AblationCondition>& DefaultAblations();

GraphData ApplyAblation(const GraphData& graph,
                        const AblationCondition& condition);

struct AblationRow {
  std::string name;
  BaselineComparison result;
};

std::vector<AblationRow> RunAblation(
    const GraphData& graph, const std::vector<RingRecord>& rings,
    const SplitAssignment& assignment,
    const std::vector<AblationCondition>& conditions = DefaultAblations(),
    const TrainOptions& options = {});

std::string AblationCsv(const std::vector<AblationRow>& rows);

}  // namespace fraudgraph
