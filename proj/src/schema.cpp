#include "fraudgraph/schema.hpp"

#include "fraudgraph/errors.hpp"

namespace fraudgraph {

std::string_view NodeTypeName(NodeType t) {
  switch (t) {
    case NodeType::kUser: return "user";
    case NodeType::kDevice: return "device";
    case NodeType::kIpAddress: return "ip_address";
    case NodeType::kBooking: return "booking";
    case NodeType::kFlight: return "flight";
    case NodeType::kHotel: return "hotel";
    case NodeType::kReview: return "review";
    case NodeType::kPaymentCard: return "payment_card";
    case NodeType::kLoyaltyAccount: return "loyalty_account";
  }
  return "unknown";
}

std::string_view RelationName(Relation r) {
  switch (r) {
    case Relation::kMade: return "made";
    case Relation::kUsesDevice: return "uses_device";
    case Relation::kUsesIp: return "uses_ip";
    case Relation::kHasLoyalty: return "has_loyalty";
    case Relation::kOwnsCard: return "owns_card";
    case Relation::kWrote: return "wrote";
    case Relation::kForFlight: return "for_flight";
    case Relation::kForHotel: return "for_hotel";
    case Relation::kPaidWith: return "paid_with";
    case Relation::kAbout: return "about";
    case Relation::kReferred: return "referred";
    case Relation::kTransferredTo: return "transferred_to";
  }
  return "unknown";
}

std::string_view RingTypeName(RingType t) {
  switch (t) {
    case RingType::kNone: return "none";
    case RingType::kTicketing: return "ticketing";
    case RingType::kGhostHotel: return "ghost_hotel";
    case RingType::kAccountTakeover: return "ato";
  }
  return "unknown";
}

std::optional<NodeType> ParseNodeType(std::string_view name) {
  for (NodeType t : kAllNodeTypes) {
    if (NodeTypeName(t) == name) return t;
  }
  return std::nullopt;
}

std::optional<Relation> ParseRelation(std::string_view name) {
  for (Relation r : kAllRelations) {
    if (RelationName(r) == name) return r;
  }
  return std::nullopt;
}

std::optional<RingType> ParseRingType(std::string_view name) {
  for (RingType t : {RingType::kNone, RingType::kTicketing,
                     RingType::kGhostHotel, RingType::kAccountTakeover}) {
    if (RingTypeName(t) == name) return t;
  }
  return std::nullopt;
}

std::vector<Relation> ResolveRelationSelector(std::string_view selector) {
  if (selector == "wrote/about") return {Relation::kWrote, Relation::kAbout};
  if (auto r = ParseRelation(selector)) return {*r};
  std::string valid;
  for (Relation r : kAllRelations) {
    valid += std::string(RelationName(r)) + ", ";
  }
  valid += "wrote/about";
  throw ConfigError("unknown relation '" + std::string(selector) +
                    "' (valid: " + valid + ")");
}

const std::vector<std::string>& DefaultFeatureNames(NodeType t) {
  static const std::array<std::vector<std::string>, kNodeTypeCount> kNames = {{
      {"account_age_days", "booking_count_30d", "distinct_device_count",
       "velocity_score", "ip_count", "card_count", "review_count_30d",
       "avg_booking_value", "cancellation_rate", "country_code"},
      {"device_type", "shared_user_count", "is_emulator", "os_age_days",
       "first_seen_days_ago"},
      {"is_vpn", "is_datacenter", "abuse_score", "shared_user_count",
       "geo_country"},
      {"booking_value_usd", "lead_time_days", "chargeback_flag",
       "is_cancelled", "timestamp_hours", "is_flight", "passengers",
       "geo_mismatch", "cabin_class"},
      {"origin", "destination", "airline", "departure_unix", "base_price",
       "distance_km", "seats"},
      {"hotel_class", "avg_rating", "is_ghost", "listing_age_days",
       "review_count", "nightly_price", "city_code", "room_count",
       "free_cancellation"},
      {"rating", "verified_booking", "days_after_checkin", "text_length",
       "helpful_votes", "timestamp_hours"},
      {"card_type", "shared_user_count", "is_compromised", "issuer_country",
       "card_age_days", "is_prepaid"},
      {"point_balance", "transfer_count_30d", "suspicious_velocity", "tier",
       "account_age_days", "redemption_count_30d", "points_received_30d"},
  }};
  return kNames[Index(t)];
}

const std::vector<std::string>& CountryCodes() {
  static const std::vector<std::string> kCodes = {
      "US", "CN", "DE", "UK", "FR", "JP", "IN", "CA",
      "AU", "IT", "ES", "KR", "BR", "MX", "NL", "AE"};
  return kCodes;
}

const std::vector<std::string>& DeviceTypeCodes() {
  static const std::vector<std::string> kCodes = {"mobile", "desktop",
                                                  "tablet"};
  return kCodes;
}

const std::vector<std::string>& CardTypeCodes() {
  static const std::vector<std::string> kCodes = {"visa", "mastercard",
                                                  "amex", "discover"};
  return kCodes;
}

const std::vector<std::string>& AirportCodes() {
  static const std::vector<std::string> kCodes = {
      "ATL", "PEK", "DXB", "LAX", "HND", "ORD", "LHR", "PVG", "CDG", "DFW",
      "AMS", "FRA", "IST", "CAN", "JFK", "SIN", "DEN", "ICN", "BKK", "SFO",
      "MAD", "MUC", "SYD", "YYZ", "BCN", "DEL", "FCO", "MEX", "GRU", "SEA"};
  return kCodes;
}

const std::vector<std::string>& AirlineCodes() {
  static const std::vector<std::string> kCodes = {
      "AA", "DL", "UA", "LH", "BA", "AF", "KL", "EK", "CA", "MU", "NH", "SQ"};
  return kCodes;
}

const std::vector<std::string>& CabinClassCodes() {
  static const std::vector<std::string> kCodes = {"economy", "premium_economy",
                                                  "business", "first"};
  return kCodes;
}

const std::vector<std::string>& CityCodes() {
  static const std::vector<std::string> kCodes = {
      "new_york", "beijing",   "berlin",  "london", "paris",  "tokyo",
      "delhi",    "toronto",   "sydney",  "rome",   "madrid", "seoul",
      "sao_paulo", "mexico_city", "amsterdam", "dubai"};
  return kCodes;
}

}  // namespace fraudgraph
