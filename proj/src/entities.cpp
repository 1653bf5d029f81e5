#include "entities.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "fraudgraph/legit.hpp"

namespace fraudgraph::detail {

namespace {

std::uint8_t Label(const Membership& m) { return m.fraud() ? 1 : 0; }

}  // namespace

NodeId AddUser(GraphData& g, const Membership& m, double account_age_days,
               double velocity_score, std::size_t country) {
  std::array<double, 10> row{};
  row[user_col::kAccountAgeDays] = account_age_days;
  row[user_col::kVelocityScore] = velocity_score;
  row[user_col::kCountryCode] = static_cast<double>(country);
  return g.table(NodeType::kUser).Add(row, Label(m), m.ring_id, m.ring_type);
}

NodeId AddDevice(GraphData& g, RandomStream& rng, const Membership& m,
                 double account_age_days, double emulator_probability) {
  static const std::array<double, 3> kTypeWeights = {0.6, 0.3, 0.1};
  std::array<double, 5> row{};
  row[device_col::kDeviceType] =
      static_cast<double>(SampleCategorical(rng, kTypeWeights));
  row[device_col::kIsEmulator] =
      SampleBernoulli(rng, emulator_probability) ? 1.0 : 0.0;
  row[device_col::kOsAgeDays] = std::round(SampleGamma(rng, 2.0, 200.0));
  row[device_col::kFirstSeenDaysAgo] =
      std::round(SampleUniformReal(rng, 0.0, std::max(1.0, account_age_days)));
  // Devices never carry their own label.
  return g.table(NodeType::kDevice).Add(row, 0, m.ring_id, m.ring_type);
}

NodeId AddIp(GraphData& g, RandomStream& rng, const Membership& m,
             std::size_t country, double vpn_probability,
             double datacenter_probability, double abuse_mean) {
  std::array<double, 5> row{};
  row[ip_col::kIsVpn] = SampleBernoulli(rng, vpn_probability) ? 1.0 : 0.0;
  row[ip_col::kIsDatacenter] =
      SampleBernoulli(rng, datacenter_probability) ? 1.0 : 0.0;
  row[ip_col::kAbuseScore] =
      std::min(1.0, SampleGamma(rng, 1.0, abuse_mean));
  const bool foreign = SampleBernoulli(rng, 0.1);
  row[ip_col::kGeoCountry] = static_cast<double>(
      foreign ? SampleUniformInt(
                    rng, 0, static_cast<std::int64_t>(CountryCodes().size()) - 1)
              : static_cast<std::int64_t>(country));
  return g.table(NodeType::kIpAddress).Add(row, 0, m.ring_id, m.ring_type);
}

NodeId AddCard(GraphData& g, RandomStream& rng, const Membership& m,
               std::size_t country, double compromised_probability) {
  static const std::array<double, 4> kTypeWeights = {0.5, 0.3, 0.15, 0.05};
  std::array<double, 6> row{};
  row[card_col::kCardType] =
      static_cast<double>(SampleCategorical(rng, kTypeWeights));
  row[card_col::kIsCompromised] =
      SampleBernoulli(rng, compromised_probability) ? 1.0 : 0.0;
  row[card_col::kIssuerCountry] = static_cast<double>(country);
  row[card_col::kCardAgeDays] = std::round(SampleGamma(rng, 2.0, 300.0));
  row[card_col::kIsPrepaid] = SampleBernoulli(rng, 0.05) ? 1.0 : 0.0;
  return g.table(NodeType::kPaymentCard).Add(row, 0, m.ring_id, m.ring_type);
}

NodeId AddLoyalty(GraphData& g, const Membership& m, const LoyaltyDraw& d) {
  std::array<double, 7> row{};
  row[loyalty_col::kPointBalance] = d.point_balance;
  row[loyalty_col::kSuspiciousVelocity] = d.suspicious_velocity;
  row[loyalty_col::kTier] = d.tier;
  row[loyalty_col::kAccountAgeDays] = d.account_age_days;
  row[loyalty_col::kRedemptionCount30d] = d.redemption_count_30d;
  return g.table(NodeType::kLoyaltyAccount)
      .Add(row, Label(m), m.ring_id, m.ring_type);
}

NodeId AddBooking(GraphData& g, const Membership& m, const BookingDraw& d) {
  std::array<double, 9> row{};
  row[booking_col::kBookingValueUsd] = std::round(d.value_usd * 100.0) / 100.0;
  row[booking_col::kLeadTimeDays] = std::round(d.lead_time_days * 10.0) / 10.0;
  row[booking_col::kChargebackFlag] = d.chargeback ? 1.0 : 0.0;
  row[booking_col::kIsCancelled] = d.cancelled ? 1.0 : 0.0;
  row[booking_col::kTimestampHours] = std::floor(d.timestamp_hours);
  row[booking_col::kIsFlight] = d.flight ? 1.0 : 0.0;
  row[booking_col::kPassengers] = d.passengers;
  row[booking_col::kGeoMismatch] = d.geo_mismatch ? 1.0 : 0.0;
  row[booking_col::kCabinClass] = d.cabin;
  return g.table(NodeType::kBooking).Add(row, Label(m), m.ring_id, m.ring_type);
}

NodeId AddReview(GraphData& g, RandomStream& rng, const Membership& m,
                 double rating, double days_after_checkin,
                 double timestamp_hours) {
  std::array<double, 6> row{};
  row[review_col::kRating] = rating;
  row[review_col::kVerifiedBooking] = 1.0;
  row[review_col::kDaysAfterCheckin] = std::round(days_after_checkin);
  row[review_col::kTextLength] = std::round(SampleLognormal(rng, 5.0, 0.6));
  row[review_col::kHelpfulVotes] =
      static_cast<double>(SamplePoisson(rng, 1.2));
  row[review_col::kTimestampHours] =
      std::floor(std::min(timestamp_hours, kWindowHours - 1.0));
  return g.table(NodeType::kReview).Add(row, Label(m), m.ring_id, m.ring_type);
}

NodeId AddHotel(GraphData& g, const Membership& m, const HotelDraw& d) {
  std::array<double, 9> row{};
  row[hotel_col::kHotelClass] = d.hotel_class;
  row[hotel_col::kAvgRating] = std::round(d.avg_rating * 100.0) / 100.0;
  row[hotel_col::kIsGhost] = d.ghost ? 1.0 : 0.0;
  row[hotel_col::kListingAgeDays] = std::round(d.listing_age_days);
  row[hotel_col::kNightlyPrice] = std::round(d.nightly_price * 100.0) / 100.0;
  row[hotel_col::kCityCode] = d.city;
  row[hotel_col::kRoomCount] = d.room_count;
  row[hotel_col::kFreeCancellation] = d.free_cancellation ? 1.0 : 0.0;
  return g.table(NodeType::kHotel).Add(row, Label(m), m.ring_id, m.ring_type);
}

int SampleCabin(RandomStream& rng, bool premium) {
  static const std::array<double, 4> kStandard = {0.75, 0.12, 0.10, 0.03};
  static const std::array<double, 4> kPremium = {0.10, 0.20, 0.50, 0.20};
  return static_cast<int>(
      SampleCategorical(rng, premium ? std::span<const double>(kPremium)
                                     : std::span<const double>(kStandard)));
}

double SampleTimestamp(RandomStream& rng, bool recent) {
  return recent ? SampleUniformReal(rng, kRecentWindowStartHours, kWindowHours)
                : SampleUniformReal(rng, 0.0, kRecentWindowStartHours);
}

}  // namespace fraudgraph::detail
