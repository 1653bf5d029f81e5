#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fraudgraph {

inline constexpr std::size_t kNodeTypeCount = 9;
inline constexpr std::size_t kRelationCount = 12;

enum class NodeType : std::uint8_t {
  kUser,
  kDevice,
  kIpAddress,
  kBooking,
  kFlight,
  kHotel,
  kReview,
  kPaymentCard,
  kLoyaltyAccount,
};

enum class Relation : std::uint8_t {
  kMade,
  kUsesDevice,
  kUsesIp,
  kHasLoyalty,
  kOwnsCard,
  kWrote,
  kForFlight,
  kForHotel,
  kPaidWith,
  kAbout,
  kReferred,
  kTransferredTo,
};

enum class RingType : std::uint8_t {
  kNone = 0,
  kTicketing = 1,
  kGhostHotel = 2,
  kAccountTakeover = 3,
};

inline constexpr std::array<NodeType, kNodeTypeCount> kAllNodeTypes = {
    NodeType::kUser,        NodeType::kDevice, NodeType::kIpAddress,
    NodeType::kBooking,     NodeType::kFlight, NodeType::kHotel,
    NodeType::kReview,      NodeType::kPaymentCard,
    NodeType::kLoyaltyAccount};

inline constexpr std::array<Relation, kRelationCount> kAllRelations = {
    Relation::kMade,      Relation::kUsesDevice, Relation::kUsesIp,
    Relation::kHasLoyalty, Relation::kOwnsCard,  Relation::kWrote,
    Relation::kForFlight, Relation::kForHotel,   Relation::kPaidWith,
    Relation::kAbout,     Relation::kReferred,   Relation::kTransferredTo};

inline constexpr std::array<RingType, 3> kAllRingTypes = {
    RingType::kTicketing, RingType::kGhostHotel, RingType::kAccountTakeover};

constexpr std::size_t Index(NodeType t) { return static_cast<std::size_t>(t); }
constexpr std::size_t Index(Relation r) { return static_cast<std::size_t>(r); }

struct RelationSignature {
  NodeType source;
  NodeType target;
};

constexpr RelationSignature Signature(Relation r) {
  switch (r) {
    case Relation::kMade: return {NodeType::kUser, NodeType::kBooking};
    case Relation::kUsesDevice: return {NodeType::kUser, NodeType::kDevice};
    case Relation::kUsesIp: return {NodeType::kUser, NodeType::kIpAddress};
    case Relation::kHasLoyalty:
      return {NodeType::kUser, NodeType::kLoyaltyAccount};
    case Relation::kOwnsCard: return {NodeType::kUser, NodeType::kPaymentCard};
    case Relation::kWrote: return {NodeType::kUser, NodeType::kReview};
    case Relation::kForFlight: return {NodeType::kBooking, NodeType::kFlight};
    case Relation::kForHotel: return {NodeType::kBooking, NodeType::kHotel};
    case Relation::kPaidWith:
      return {NodeType::kBooking, NodeType::kPaymentCard};
    case Relation::kAbout: return {NodeType::kReview, NodeType::kHotel};
    case Relation::kReferred: return {NodeType::kUser, NodeType::kUser};
    case Relation::kTransferredTo:
      return {NodeType::kLoyaltyAccount, NodeType::kLoyaltyAccount};
  }
  return {NodeType::kUser, NodeType::kUser};
}

std::string_view NodeTypeName(NodeType t);
std::string_view RelationName(Relation r);
std::string_view RingTypeName(RingType t);

std::optional<NodeType> ParseNodeType(std::string_view name);
std::optional<Relation> ParseRelation(std::string_view name);
std::optional<RingType> ParseRingType(std::string_view name);

// Resolves a relation selector: any single relation name, or the paired
// review selector "wrote/about". Throws ConfigError for unknown selectors.
std::vector<Relation> ResolveRelationSelector(std::string_view selector);

// Node types that carry their own fraud label column (others are derived
// from ring membership for analytics).
constexpr bool CarriesLabel(NodeType t) {
  return t == NodeType::kUser || t == NodeType::kBooking ||
         t == NodeType::kHotel || t == NodeType::kReview ||
         t == NodeType::kLoyaltyAccount;
}

// Default feature columns in their fixed export order.
const std::vector<std::string>& DefaultFeatureNames(NodeType t);

// Column indices of the default user feature vector.
namespace user_col {
inline constexpr std::size_t kAccountAgeDays = 0;
inline constexpr std::size_t kBookingCount30d = 1;
inline constexpr std::size_t kDistinctDeviceCount = 2;
inline constexpr std::size_t kVelocityScore = 3;
inline constexpr std::size_t kIpCount = 4;
inline constexpr std::size_t kCardCount = 5;
inline constexpr std::size_t kReviewCount30d = 6;
inline constexpr std::size_t kAvgBookingValue = 7;
inline constexpr std::size_t kCancellationRate = 8;
inline constexpr std::size_t kCountryCode = 9;
}  // namespace user_col

namespace device_col {
inline constexpr std::size_t kDeviceType = 0;
inline constexpr std::size_t kSharedUserCount = 1;
inline constexpr std::size_t kIsEmulator = 2;
inline constexpr std::size_t kOsAgeDays = 3;
inline constexpr std::size_t kFirstSeenDaysAgo = 4;
}  // namespace device_col

namespace ip_col {
inline constexpr std::size_t kIsVpn = 0;
inline constexpr std::size_t kIsDatacenter = 1;
inline constexpr std::size_t kAbuseScore = 2;
inline constexpr std::size_t kSharedUserCount = 3;
inline constexpr std::size_t kGeoCountry = 4;
}  // namespace ip_col

namespace booking_col {
inline constexpr std::size_t kBookingValueUsd = 0;
inline constexpr std::size_t kLeadTimeDays = 1;
inline constexpr std::size_t kChargebackFlag = 2;
inline constexpr std::size_t kIsCancelled = 3;
inline constexpr std::size_t kTimestampHours = 4;
inline constexpr std::size_t kIsFlight = 5;
inline constexpr std::size_t kPassengers = 6;
inline constexpr std::size_t kGeoMismatch = 7;
inline constexpr std::size_t kCabinClass = 8;
}  // namespace booking_col

namespace flight_col {
inline constexpr std::size_t kOrigin = 0;
inline constexpr std::size_t kDestination = 1;
inline constexpr std::size_t kAirline = 2;
inline constexpr std::size_t kDepartureUnix = 3;
inline constexpr std::size_t kBasePrice = 4;
inline constexpr std::size_t kDistanceKm = 5;
inline constexpr std::size_t kSeats = 6;
}  // namespace flight_col

namespace hotel_col {
inline constexpr std::size_t kHotelClass = 0;
inline constexpr std::size_t kAvgRating = 1;
inline constexpr std::size_t kIsGhost = 2;
inline constexpr std::size_t kListingAgeDays = 3;
inline constexpr std::size_t kReviewCount = 4;
inline constexpr std::size_t kNightlyPrice = 5;
inline constexpr std::size_t kCityCode = 6;
inline constexpr std::size_t kRoomCount = 7;
inline constexpr std::size_t kFreeCancellation = 8;
}  // namespace hotel_col

namespace review_col {
inline constexpr std::size_t kRating = 0;
inline constexpr std::size_t kVerifiedBooking = 1;
inline constexpr std::size_t kDaysAfterCheckin = 2;
inline constexpr std::size_t kTextLength = 3;
inline constexpr std::size_t kHelpfulVotes = 4;
inline constexpr std::size_t kTimestampHours = 5;
}  // namespace review_col

namespace card_col {
inline constexpr std::size_t kCardType = 0;
inline constexpr std::size_t kSharedUserCount = 1;
inline constexpr std::size_t kIsCompromised = 2;
inline constexpr std::size_t kIssuerCountry = 3;
inline constexpr std::size_t kCardAgeDays = 4;
inline constexpr std::size_t kIsPrepaid = 5;
}  // namespace card_col

namespace loyalty_col {
inline constexpr std::size_t kPointBalance = 0;
inline constexpr std::size_t kTransferCount30d = 1;
inline constexpr std::size_t kSuspiciousVelocity = 2;
inline constexpr std::size_t kTier = 3;
inline constexpr std::size_t kAccountAgeDays = 4;
inline constexpr std::size_t kRedemptionCount30d = 5;
inline constexpr std::size_t kPointsReceived30d = 6;
}  // namespace loyalty_col

// Categorical code tables, exported in the manifest.
const std::vector<std::string>& CountryCodes();
const std::vector<std::string>& DeviceTypeCodes();
const std::vector<std::string>& CardTypeCodes();
const std::vector<std::string>& AirportCodes();
const std::vector<std::string>& AirlineCodes();
const std::vector<std::string>& CabinClassCodes();
const std::vector<std::string>& CityCodes();

}  // namespace fraudgraph
