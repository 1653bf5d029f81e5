#include "fraudgraph/config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fraudgraph/errors.hpp"

namespace fraudgraph {

namespace {

const std::vector<ScalePreset>& Presets() {
  // Nominal user counts are exact; default ring counts keep the fraud-user
  // share near 16% except at medium, the reference configuration.
  static const std::vector<ScalePreset> kPresets = {
      {"toy", 500, 2, 2, 2},
      {"small", 2000, 7, 7, 7},
      {"medium", 10000, 30, 30, 30},
      {"large", 50000, 180, 180, 180},
      {"xlarge", 200000, 720, 720, 720},
  };
  return kPresets;
}

std::string JoinNames() {
  std::string out;
  for (const auto& p : Presets()) {
    if (!out.empty()) out += ", ";
    out += p.name;
  }
  return out;
}

SizeRange CheckRange(const std::optional<SizeRange>& requested,
                     SizeRange fallback, SizeRange bounds, bool widen,
                     std::string_view what) {
  if (!requested) return fallback;
  const SizeRange r = *requested;
  if (r.lower > r.upper || r.lower < 1) {
    throw ConfigError(std::string(what) + " range [" +
                      std::to_string(r.lower) + ", " +
                      std::to_string(r.upper) + "] is empty or below 1");
  }
  if (!widen && (r.lower < bounds.lower || r.upper > bounds.upper)) {
    throw ConfigError(std::string(what) + " range [" +
                      std::to_string(r.lower) + ", " +
                      std::to_string(r.upper) + "] outside bounds [" +
                      std::to_string(bounds.lower) + ", " +
                      std::to_string(bounds.upper) +
                      "]; set widen_size_bounds to allow");
  }
  return r;
}

double Midpoint(SizeRange r) { return 0.5 * (r.lower + r.upper); }

}  // namespace

const std::vector<std::string>& PresetNames() {
  static const std::vector<std::string> kNames = [] {
    std::vector<std::string> names;
    for (const auto& p : Presets()) names.push_back(p.name);
    return names;
  }();
  return kNames;
}

ScalePreset ResolvePreset(std::string_view name) {
  for (const auto& p : Presets()) {
    if (p.name == name) return p;
  }
  throw ConfigError("unknown preset '" + std::string(name) +
                    "' (valid: " + JoinNames() + ")");
}

std::uint32_t ResolvedConfig::RingCount(RingType t) const {
  switch (t) {
    case RingType::kTicketing: return n_ticketing_rings;
    case RingType::kGhostHotel: return n_ghost_hotel_rings;
    case RingType::kAccountTakeover: return n_ato_rings;
    case RingType::kNone: break;
  }
  return 0;
}

double ExpectedRingSize(const ResolvedConfig& resolved, RingType type) {
  switch (type) {
    case RingType::kTicketing: return Midpoint(resolved.ticketing_size);
    case RingType::kGhostHotel: return Midpoint(resolved.ghost_reviewers);
    case RingType::kAccountTakeover:
      return Midpoint(resolved.ato_compromised);
    case RingType::kNone: break;
  }
  return 0.0;
}

ResolvedConfig Resolve(const GeneratorConfig& config) {
  const ScalePreset preset = ResolvePreset(config.scale);
  ResolvedConfig out;
  out.scale = preset.name;
  out.seed = config.seed;
  out.n_users = config.n_users.value_or(preset.n_users);
  if (out.n_users < 10) {
    throw ConfigError("n_users must be >= 10, got " +
                      std::to_string(out.n_users));
  }
  out.n_ticketing_rings =
      config.n_ticketing_rings.value_or(preset.n_ticketing_rings);
  out.n_ghost_hotel_rings =
      config.n_ghost_hotel_rings.value_or(preset.n_ghost_hotel_rings);
  out.n_ato_rings = config.n_ato_rings.value_or(preset.n_ato_rings);

  out.ticketing_size =
      CheckRange(config.ticketing_size, kTicketingDefaultSizes,
                 kTicketingSizeBounds, config.widen_size_bounds,
                 "ticketing_size");
  out.ghost_reviewers =
      CheckRange(config.ghost_reviewers, kGhostDefaultReviewers,
                 kGhostReviewerBounds, config.widen_size_bounds,
                 "ghost_reviewers");
  out.ato_compromised =
      CheckRange(config.ato_compromised, kAtoDefaultCompromised,
                 kAtoCompromisedBounds, config.widen_size_bounds,
                 "ato_compromised");

  out.widen_size_bounds = config.widen_size_bounds;

  if (config.fraud_rate_target) {
    const double target = *config.fraud_rate_target;
    if (!(target > 0.0 && target < 1.0)) {
      throw ConfigError("fraud_rate_target must be in (0, 1)");
    }
    const double wanted = target * out.n_users;
    double per_unit = 0.0;
    std::array<double, 3> weights{};
    for (std::size_t i = 0; i < kAllRingTypes.size(); ++i) {
      weights[i] = out.RingCount(kAllRingTypes[i]);
    }
    if (weights[0] + weights[1] + weights[2] == 0) weights = {1, 1, 1};
    for (std::size_t i = 0; i < kAllRingTypes.size(); ++i) {
      per_unit += weights[i] * ExpectedRingSize(out, kAllRingTypes[i]);
    }
    const double factor = wanted / per_unit;
    out.n_ticketing_rings =
        static_cast<std::uint32_t>(std::lround(weights[0] * factor));
    out.n_ghost_hotel_rings =
        static_cast<std::uint32_t>(std::lround(weights[1] * factor));
    out.n_ato_rings =
        static_cast<std::uint32_t>(std::lround(weights[2] * factor));
  }

  const auto& user_features = DefaultFeatureNames(NodeType::kUser);
  for (const auto& f : config.feature_exclusions) {
    if (std::find(user_features.begin(), user_features.end(), f) ==
        user_features.end()) {
      throw ConfigError("unknown user feature '" + f + "'");
    }
    out.feature_exclusions.push_back(f);
  }
  for (const auto& r : config.relation_exclusions) {
    ResolveRelationSelector(r);
    out.relation_exclusions.push_back(r);
  }
  out.calibration = config.calibration;
  return out;
}

namespace {

nlohmann::json RangeJson(const std::optional<SizeRange>& r) {
  if (!r) return nullptr;
  return nlohmann::json::array({r->lower, r->upper});
}

std::optional<SizeRange> RangeFromJson(const nlohmann::json& j,
                                       const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 2) {
    throw ConfigError(std::string(key) + " must be a [lower, upper] array");
  }
  return SizeRange{v[0].get<int>(), v[1].get<int>()};
}

template <typename T>
std::optional<T> OptionalFromJson(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace

nlohmann::json ToJson(const GeneratorConfig& config) {
  nlohmann::json j;
  j["scale"] = config.scale;
  j["n_users"] = config.n_users ? nlohmann::json(*config.n_users) : nullptr;
  j["seed"] = config.seed;
  auto opt = [](const std::optional<std::uint32_t>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  j["n_ticketing_rings"] = opt(config.n_ticketing_rings);
  j["n_ghost_hotel_rings"] = opt(config.n_ghost_hotel_rings);
  j["n_ato_rings"] = opt(config.n_ato_rings);
  j["ticketing_size"] = RangeJson(config.ticketing_size);
  j["ghost_reviewers"] = RangeJson(config.ghost_reviewers);
  j["ato_compromised"] = RangeJson(config.ato_compromised);
  j["widen_size_bounds"] = config.widen_size_bounds;
  j["fraud_rate_target"] = config.fraud_rate_target
                               ? nlohmann::json(*config.fraud_rate_target)
                               : nlohmann::json(nullptr);
  j["feature_exclusions"] = config.feature_exclusions;
  j["relation_exclusions"] = config.relation_exclusions;
  j["calibration"] =
      config.calibration == CalibrationMode::kEnforce ? "enforce" : "report";
  return j;
}

GeneratorConfig GeneratorConfigFromJson(const nlohmann::json& j) {
  static const std::set<std::string> kKeys = {
      "scale",           "n_users",           "seed",
      "n_ticketing_rings", "n_ghost_hotel_rings", "n_ato_rings",
      "ticketing_size",  "ghost_reviewers",   "ato_compromised",
      "widen_size_bounds", "fraud_rate_target", "feature_exclusions",
      "relation_exclusions", "calibration"};
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!kKeys.contains(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  GeneratorConfig c;
  try {
    if (j.contains("scale")) c.scale = j.at("scale").get<std::string>();
    c.n_users = OptionalFromJson<std::uint32_t>(j, "n_users");
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    c.n_ticketing_rings = OptionalFromJson<std::uint32_t>(j, "n_ticketing_rings");
    c.n_ghost_hotel_rings =
        OptionalFromJson<std::uint32_t>(j, "n_ghost_hotel_rings");
    c.n_ato_rings = OptionalFromJson<std::uint32_t>(j, "n_ato_rings");
    c.ticketing_size = RangeFromJson(j, "ticketing_size");
    c.ghost_reviewers = RangeFromJson(j, "ghost_reviewers");
    c.ato_compromised = RangeFromJson(j, "ato_compromised");
    if (j.contains("widen_size_bounds")) {
      c.widen_size_bounds = j.at("widen_size_bounds").get<bool>();
    }
    c.fraud_rate_target = OptionalFromJson<double>(j, "fraud_rate_target");
    if (j.contains("feature_exclusions")) {
      c.feature_exclusions =
          j.at("feature_exclusions").get<std::set<std::string>>();
    }
    if (j.contains("relation_exclusions")) {
      c.relation_exclusions =
          j.at("relation_exclusions").get<std::set<std::string>>();
    }
    if (j.contains("calibration")) {
      const auto mode = j.at("calibration").get<std::string>();
      if (mode == "enforce") {
        c.calibration = CalibrationMode::kEnforce;
      } else if (mode == "report") {
        c.calibration = CalibrationMode::kReport;
      } else {
        throw ConfigError("calibration must be 'enforce' or 'report'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  return c;
}

GeneratorConfig LoadConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(buffer.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " +
                      e.what());
  }
  return GeneratorConfigFromJson(j);
}

}  // namespace fraudgraph
