#pragma once

#include <cstdint>
#include <vector>

#include "fraudgraph/graph.hpp"
#include "fraudgraph/random.hpp"

namespace fraudgraph {

// Simulation window: 90 days of hourly timestamps; the last 30 days are the
// "recent" window used by the *_30d features.
inline constexpr double kWindowHours = 90.0 * 24.0;
inline constexpr double kRecentWindowStartHours = 60.0 * 24.0;
inline constexpr double kWindowStartUnix = 1704067200.0;  // 2024-01-01

// Cap applied to the stored device shared_user_count feature.
inline constexpr double kDeviceSharedUserCap = 3.0;

// Behavioural parameters of legitimate travelers. Defaults are the
// calibrated values; every field is a documented knob.
struct TravelerParameters {
  double account_age_shape = 2.0;
  double account_age_scale = 180.0;  // days, mean 360
  double recent_booking_rate = 2.2;  // bookings in the last 30 days
  double older_booking_rate = 0.6;   // bookings earlier in the window
  double lead_time_shape = 2.0;
  double lead_time_scale = 30.0;     // days, mean 60
  double value_mu = 6.1;             // log-USD
  double value_sigma = 0.7;
  double cancellation_probability = 0.18;
  double chargeback_probability = 0.02;
  double flight_share = 0.5;         // remaining bookings are hotel stays
  double geo_mismatch_probability = 0.03;
  // Device / IP / card counts per user (index 0 = one entity).
  std::vector<double> device_count_weights = {0.58, 0.30, 0.12};
  double device_reuse_probability = 0.02;
  std::vector<double> ip_count_weights = {0.20, 0.30, 0.25, 0.25};
  double ip_reuse_probability = 0.05;
  std::vector<double> card_count_weights = {0.65, 0.35};
  double loyalty_probability = 0.6;
  double review_probability = 0.68;  // per completed hotel booking
  double referral_probability = 0.03;
  // velocity_score = clamp(base + per_booking * recent + per_device * devices
  //                        + N(0, noise))
  double velocity_base = 0.05;
  double velocity_per_booking = 0.08;
  double velocity_per_device = 0.05;
  double velocity_noise = 0.01;
  double hotel_rating_mean = 3.91;
  double hotel_rating_sd = 0.45;
  double flights_per_user = 0.15;  // medium: 1,500 flights
  double hotels_per_user = 0.079;  // medium: 790 legitimate hotels
};

// Country weights: US .20, CN .15, DE .10, UK .08, then a 12-country tail
// with geometric decay (ratio 0.8) carrying the remaining 0.47.
const std::vector<double>& CountryWeights();

// Weighted sampling over a fixed id list via a cumulative table.
class WeightedPicker {
 public:
  WeightedPicker() = default;
  WeightedPicker(std::vector<NodeId> ids, std::span<const double> weights);
  NodeId Pick(RandomStream& rng) const;
  bool empty() const { return ids_.empty(); }
  const std::vector<NodeId>& ids() const { return ids_; }

 private:
  std::vector<NodeId> ids_;
  std::vector<double> cumulative_;
};

// Shared catalogs that ring injectors draw from.
struct CatalogPools {
  WeightedPicker flights;
  WeightedPicker legit_hotels;
};

// Emits |n_legit| legitimate users with their devices, IPs, cards, loyalty
// accounts, bookings, reviews and referrals, plus the flight and hotel
// catalogs sized from |catalog_users| (the run's total user count). All
// labels are 0 and ring ids -1. Throws ConfigError when n_legit < 1.
CatalogPools GenerateLegitPopulation(GraphData& graph, std::uint32_t n_legit,
                                     std::uint32_t catalog_users,
                                     RandomStream& rng,
                                     const TravelerParameters& params = {});

// Recomputes graph-derived features: user booking/device/IP/card/review
// summaries, device/IP/card shared_user_count, hotel review_count and
// loyalty transfer counts.
void RefreshDerivedFeatures(GraphData& graph);

}  // namespace fraudgraph
