#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fraudgraph/schema.hpp"
#include "json.hpp"

namespace fraudgraph {

struct ScalePreset {
  std::string name;
  std::uint32_t n_users = 0;
  std::uint32_t n_ticketing_rings = 0;
  std::uint32_t n_ghost_hotel_rings = 0;
  std::uint32_t n_ato_rings = 0;
};

// toy, small, medium, large, xlarge. Throws ConfigError naming the valid set
// for anything else.
ScalePreset ResolvePreset(std::string_view name);
const std::vector<std::string>& PresetNames();

// Inclusive integer range.
struct SizeRange {
  int lower = 0;
  int upper = 0;
  bool Contains(int v) const { return v >= lower && v <= upper; }
  bool operator==(const SizeRange&) const = default;
};

// Documented hard bounds for ring membership sizes.
inline constexpr SizeRange kTicketingSizeBounds{3, 20};
inline constexpr SizeRange kGhostReviewerBounds{10, 80};
inline constexpr SizeRange kGhostHotelBounds{1, 3};
inline constexpr SizeRange kAtoCompromisedBounds{5, 30};
inline constexpr SizeRange kAtoMuleBounds{2, 8};

// Default sampling ranges (subsets of the hard bounds).
inline constexpr SizeRange kTicketingDefaultSizes{10, 20};
inline constexpr SizeRange kGhostDefaultReviewers{10, 24};
inline constexpr SizeRange kAtoDefaultCompromised{5, 20};

enum class CalibrationMode {
  kEnforce,  // back off fraud shifts, then fail if the gate still fails
  kReport,   // back off fraud shifts, never fail
};

// Every knob of a generation run.
struct GeneratorConfig {
  std::string scale = "medium";
  std::optional<std::uint32_t> n_users;  // overrides the preset's user count
  std::uint64_t seed = 42;
  std::optional<std::uint32_t> n_ticketing_rings;
  std::optional<std::uint32_t> n_ghost_hotel_rings;
  std::optional<std::uint32_t> n_ato_rings;
  // Member-count ranges (ticketing k, ghost reviewers, ATO compromised).
  std::optional<SizeRange> ticketing_size;
  std::optional<SizeRange> ghost_reviewers;
  std::optional<SizeRange> ato_compromised;
  // Allows ranges outside the documented hard bounds.
  bool widen_size_bounds = false;
  std::optional<double> fraud_rate_target;
  std::set<std::string> feature_exclusions;
  std::set<std::string> relation_exclusions;
  CalibrationMode calibration = CalibrationMode::kEnforce;

  bool operator==(const GeneratorConfig&) const = default;
};

// Fully resolved run parameters.
struct ResolvedConfig {
  std::string scale;
  std::uint32_t n_users = 0;
  std::uint64_t seed = 0;
  std::uint32_t n_ticketing_rings = 0;
  std::uint32_t n_ghost_hotel_rings = 0;
  std::uint32_t n_ato_rings = 0;
  SizeRange ticketing_size;
  SizeRange ghost_reviewers;
  SizeRange ato_compromised;
  bool widen_size_bounds = false;
  std::vector<std::string> feature_exclusions;
  std::vector<std::string> relation_exclusions;
  CalibrationMode calibration = CalibrationMode::kEnforce;

  std::uint32_t RingCount(RingType t) const;
  std::uint32_t TotalRings() const {
    return n_ticketing_rings + n_ghost_hotel_rings + n_ato_rings;
  }
};

// Validates and resolves presets, overrides and the fraud-rate target.
// Throws ConfigError.
ResolvedConfig Resolve(const GeneratorConfig& config);

// Expected fraud users contributed by one ring of |type| under |resolved|.
double ExpectedRingSize(const ResolvedConfig& resolved, RingType type);

nlohmann::json ToJson(const GeneratorConfig& config);
GeneratorConfig GeneratorConfigFromJson(const nlohmann::json& json);
// Reads a JSON config file whose keys mirror GeneratorConfig fields.
GeneratorConfig LoadConfigFile(const std::string& path);

}  // namespace fraudgraph
