#pragma once

// Node constructors shared by the legitimate-population simulator and the
// ring injectors. Graph-derived columns are left at 0 and filled by
// RefreshDerivedFeatures().

#include "fraudgraph/graph.hpp"
#include "fraudgraph/random.hpp"

namespace fraudgraph::detail {

struct Membership {
  std::int32_t ring_id = kNoRing;
  RingType ring_type = RingType::kNone;

  bool fraud() const { return ring_id >= 0; }
};

NodeId AddUser(GraphData& g, const Membership& m, double account_age_days,
               double velocity_score, std::size_t country);

NodeId AddDevice(GraphData& g, RandomStream& rng, const Membership& m,
                 double account_age_days, double emulator_probability);

NodeId AddIp(GraphData& g, RandomStream& rng, const Membership& m,
             std::size_t country, double vpn_probability,
             double datacenter_probability, double abuse_mean);

NodeId AddCard(GraphData& g, RandomStream& rng, const Membership& m,
               std::size_t country, double compromised_probability);

struct LoyaltyDraw {
  double point_balance = 0;
  double suspicious_velocity = 0;
  double tier = 0;
  double account_age_days = 0;
  double redemption_count_30d = 0;
};
NodeId AddLoyalty(GraphData& g, const Membership& m, const LoyaltyDraw& d);

struct BookingDraw {
  double value_usd = 0;
  double lead_time_days = 0;
  double timestamp_hours = 0;
  bool chargeback = false;
  bool cancelled = false;
  bool flight = true;
  bool geo_mismatch = false;
  int passengers = 1;
  int cabin = 0;
};
NodeId AddBooking(GraphData& g, const Membership& m, const BookingDraw& d);

NodeId AddReview(GraphData& g, RandomStream& rng, const Membership& m,
                 double rating, double days_after_checkin,
                 double timestamp_hours);

// Hotel row; review_count is derived later.
struct HotelDraw {
  double hotel_class = 3;
  double avg_rating = 4;
  bool ghost = false;
  double listing_age_days = 365;
  double nightly_price = 120;
  double city = 0;
  double room_count = 50;
  bool free_cancellation = true;
};
NodeId AddHotel(GraphData& g, const Membership& m, const HotelDraw& d);

// Samples a cabin class code; premium shifts mass to business/first.
int SampleCabin(RandomStream& rng, bool premium);

// Timestamp inside the recent (last 30 days) or earlier window.
double SampleTimestamp(RandomStream& rng, bool recent);

}  // namespace fraudgraph::detail
