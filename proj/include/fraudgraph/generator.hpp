#pragma once

#include <string>
#include <vector>

#include "fraudgraph/config.hpp"
#include "fraudgraph/graph.hpp"
#include "fraudgraph/legit.hpp"
#include "fraudgraph/rings.hpp"
#include "fraudgraph/stats.hpp"

namespace fraudgraph {

inline constexpr const char* kGeneratorVersion = "1.0.0";

// Back-off factors tried in order when the calibration gate fails.
inline constexpr double kShiftBackoff[] = {1.0, 0.5, 0.25};

// The gate only fails a run when both classes have at least this many users.
// Smaller runs have few rings per type, and ring-level constants (shared
// device and IP counts) then move d by +-0.2 regardless of the shifts.
inline constexpr std::size_t kCalibrationMinClassSize = 1000;

struct GenerationResult {
  GeneratorConfig request;
  ResolvedConfig config;
  GraphData graph;
  std::vector<RingRecord> rings;
  CalibrationReport calibration;  // empty when a class has no users
  double shift_factor = 1.0;      // back-off factor that was accepted
  double fraud_rate = 0.0;        // fraud users / users
};

// Full pipeline: plan rings, simulate the legitimate population, inject
// rings, refresh derived features, run the calibration gate (with back-off),
// shuffle node ids per type, then apply relation and feature exclusions.
// Throws ConfigError for bad configs and ValidationError when an enforced
// gate still fails after the last back-off.
GenerationResult Generate(const GeneratorConfig& config,
                          const TravelerParameters& legit = {},
                          const FraudShifts& shifts = {});

double UserFraudRate(const GraphData& graph);

// Multi-line human summary: counts per table, rings, fraud rate.
std::string Summary(const GenerationResult& result);

}  // namespace fraudgraph
