#include "fraudgraph/legit.hpp"

#include <algorithm>
#include <cmath>

#include "entities.hpp"
#include "fraudgraph/errors.hpp"

namespace fraudgraph {

using detail::BookingDraw;
using detail::Membership;

const std::vector<double>& CountryWeights() {
  static const std::vector<double> kWeights = [] {
    std::vector<double> w = {0.20, 0.15, 0.10, 0.08};
    constexpr double kRatio = 0.8;
    constexpr int kTail = 12;
    const double tail_mass = 1.0 - (0.20 + 0.15 + 0.10 + 0.08);
    const double first = tail_mass * (1.0 - kRatio) /
                         (1.0 - std::pow(kRatio, kTail));
    for (int i = 0; i < kTail; ++i) w.push_back(first * std::pow(kRatio, i));
    return w;
  }();
  return kWeights;
}

WeightedPicker::WeightedPicker(std::vector<NodeId> ids,
                               std::span<const double> weights)
    : ids_(std::move(ids)) {
  cumulative_.reserve(weights.size());
  double total = 0.0;
  for (double w : weights) {
    total += w;
    cumulative_.push_back(total);
  }
  for (double& c : cumulative_) c /= total;
}

NodeId WeightedPicker::Pick(RandomStream& rng) const {
  const double u = rng.NextUniform();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  return ids_[static_cast<std::size_t>(it - cumulative_.begin())];
}

namespace {

// Popularity weights decaying slowly with rank.
std::vector<double> PopularityWeights(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 1.0 / std::pow(static_cast<double>(i) + 10.0, 0.8);
  }
  return w;
}

WeightedPicker BuildFlightCatalog(GraphData& g, std::size_t n_flights,
                                  RandomStream& rng) {
  const auto n_airports = static_cast<std::int64_t>(AirportCodes().size());
  const auto n_airlines = static_cast<std::int64_t>(AirlineCodes().size());
  std::vector<NodeId> ids;
  for (std::size_t i = 0; i < n_flights; ++i) {
    std::array<double, 7> row{};
    const auto origin = SampleUniformInt(rng, 0, n_airports - 1);
    auto destination = SampleUniformInt(rng, 0, n_airports - 2);
    if (destination >= origin) ++destination;
    row[flight_col::kOrigin] = static_cast<double>(origin);
    row[flight_col::kDestination] = static_cast<double>(destination);
    row[flight_col::kAirline] =
        static_cast<double>(SampleUniformInt(rng, 0, n_airlines - 1));
    row[flight_col::kDepartureUnix] =
        kWindowStartUnix +
        3600.0 * std::floor(SampleUniformReal(rng, 0.0, kWindowHours + 24 * 30));
    row[flight_col::kBasePrice] =
        std::round(SampleLognormal(rng, 5.9, 0.5) * 100.0) / 100.0;
    row[flight_col::kDistanceKm] =
        std::round(SampleUniformReal(rng, 300.0, 12000.0));
    row[flight_col::kSeats] = static_cast<double>(SampleUniformInt(rng, 120, 400));
    ids.push_back(g.table(NodeType::kFlight).Add(row));
  }
  return WeightedPicker(ids, PopularityWeights(n_flights));
}

WeightedPicker BuildHotelCatalog(GraphData& g, std::size_t n_hotels,
                                 RandomStream& rng,
                                 const TravelerParameters& p) {
  const auto n_cities = static_cast<std::int64_t>(CityCodes().size());
  std::vector<NodeId> ids;
  for (std::size_t i = 0; i < n_hotels; ++i) {
    detail::HotelDraw d;
    d.hotel_class = static_cast<double>(SampleUniformInt(rng, 1, 5));
    d.avg_rating = std::clamp(
        SampleNormal(rng, p.hotel_rating_mean, p.hotel_rating_sd), 1.0, 5.0);
    d.listing_age_days = SampleGamma(rng, 2.0, 600.0);
    d.nightly_price = SampleLognormal(rng, 4.8, 0.5);
    d.city = static_cast<double>(SampleUniformInt(rng, 0, n_cities - 1));
    d.room_count = static_cast<double>(SampleUniformInt(rng, 10, 400));
    d.free_cancellation = SampleBernoulli(rng, 0.6);
    ids.push_back(detail::AddHotel(g, Membership{}, d));
  }
  return WeightedPicker(ids, PopularityWeights(n_hotels));
}

}  // namespace

CatalogPools GenerateLegitPopulation(GraphData& g, std::uint32_t n_legit,
                                     std::uint32_t catalog_users,
                                     RandomStream& rng,
                                     const TravelerParameters& p) {
  if (n_legit < 1) {
    throw ConfigError("legitimate population must have at least one user");
  }
  CatalogPools pools;
  RandomStream catalog_rng = rng.Child("catalog");
  const auto n_flights = static_cast<std::size_t>(
      std::max(20.0, std::round(p.flights_per_user * catalog_users)));
  const auto n_hotels = static_cast<std::size_t>(
      std::max(5.0, std::round(p.hotels_per_user * catalog_users)));
  pools.flights = BuildFlightCatalog(g, n_flights, catalog_rng);
  pools.legit_hotels = BuildHotelCatalog(g, n_hotels, catalog_rng, p);

  const Membership legit;
  std::vector<NodeId> legit_devices;
  std::vector<NodeId> legit_ips;
  std::vector<NodeId> users;
  users.reserve(n_legit);

  for (std::uint32_t i = 0; i < n_legit; ++i) {
    const double age =
        std::round(SampleGamma(rng, p.account_age_shape, p.account_age_scale));
    const std::size_t country = SampleCategorical(rng, CountryWeights());
    const auto n_recent = SamplePoisson(rng, p.recent_booking_rate);
    const auto n_older = SamplePoisson(rng, p.older_booking_rate);
    const std::size_t n_devices =
        1 + SampleCategorical(rng, p.device_count_weights);
    const double velocity = std::clamp(
        p.velocity_base + p.velocity_per_booking * static_cast<double>(n_recent) +
            p.velocity_per_device * static_cast<double>(n_devices) +
            SampleNormal(rng, 0.0, p.velocity_noise),
        0.0, 1.0);
    const NodeId user = detail::AddUser(g, legit, age, velocity, country);

    // Devices, with rare reuse of another traveler's device.
    std::vector<NodeId> mine;
    for (std::size_t d = 0; d < n_devices; ++d) {
      NodeId device;
      if (!legit_devices.empty() &&
          SampleBernoulli(rng, p.device_reuse_probability)) {
        device = legit_devices[static_cast<std::size_t>(SampleUniformInt(
            rng, 0, static_cast<std::int64_t>(legit_devices.size()) - 1))];
      } else {
        device = detail::AddDevice(g, rng, legit, age, 0.01);
        legit_devices.push_back(device);
      }
      if (std::find(mine.begin(), mine.end(), device) == mine.end()) {
        mine.push_back(device);
        g.AddEdge(Relation::kUsesDevice, user, device);
      }
    }

    const std::size_t n_ips = 1 + SampleCategorical(rng, p.ip_count_weights);
    mine.clear();
    for (std::size_t k = 0; k < n_ips; ++k) {
      NodeId ip;
      if (!legit_ips.empty() && SampleBernoulli(rng, p.ip_reuse_probability)) {
        ip = legit_ips[static_cast<std::size_t>(SampleUniformInt(
            rng, 0, static_cast<std::int64_t>(legit_ips.size()) - 1))];
      } else {
        ip = detail::AddIp(g, rng, legit, country, 0.05, 0.02, 0.05);
        legit_ips.push_back(ip);
      }
      if (std::find(mine.begin(), mine.end(), ip) == mine.end()) {
        mine.push_back(ip);
        g.AddEdge(Relation::kUsesIp, user, ip);
      }
    }

    const std::size_t n_cards =
        1 + SampleCategorical(rng, p.card_count_weights);
    std::vector<NodeId> cards;
    for (std::size_t c = 0; c < n_cards; ++c) {
      cards.push_back(detail::AddCard(g, rng, legit, country, 0.005));
      g.AddEdge(Relation::kOwnsCard, user, cards.back());
    }

    if (SampleBernoulli(rng, p.loyalty_probability)) {
      detail::LoyaltyDraw d;
      d.point_balance = std::round(SampleLognormal(rng, 8.0, 1.0));
      d.tier = static_cast<double>(SampleUniformInt(rng, 0, 3));
      d.account_age_days = std::round(age * SampleUniformReal(rng, 0.2, 1.0));
      d.redemption_count_30d = static_cast<double>(SamplePoisson(rng, 0.3));
      const NodeId loyalty = detail::AddLoyalty(g, legit, d);
      g.AddEdge(Relation::kHasLoyalty, user, loyalty);
    }

    const auto n_bookings = n_recent + n_older;
    for (std::int64_t b = 0; b < n_bookings; ++b) {
      BookingDraw d;
      d.timestamp_hours = detail::SampleTimestamp(rng, b < n_recent);
      d.flight = SampleBernoulli(rng, p.flight_share);
      d.value_usd = SampleLognormal(rng, p.value_mu, p.value_sigma);
      d.lead_time_days = SampleGamma(rng, p.lead_time_shape, p.lead_time_scale);
      d.cancelled = SampleBernoulli(rng, p.cancellation_probability);
      d.chargeback = SampleBernoulli(rng, p.chargeback_probability);
      d.geo_mismatch = SampleBernoulli(rng, p.geo_mismatch_probability);
      d.passengers = static_cast<int>(SampleUniformInt(rng, 1, 4));
      d.cabin = detail::SampleCabin(rng, false);
      const NodeId booking = detail::AddBooking(g, legit, d);
      g.AddEdge(Relation::kMade, user, booking);
      const NodeId card = cards[static_cast<std::size_t>(
          SampleUniformInt(rng, 0, static_cast<std::int64_t>(cards.size()) - 1))];
      g.AddEdge(Relation::kPaidWith, booking, card);
      if (d.flight) {
        g.AddEdge(Relation::kForFlight, booking, pools.flights.Pick(rng));
        continue;
      }
      const NodeId hotel = pools.legit_hotels.Pick(rng);
      g.AddEdge(Relation::kForHotel, booking, hotel);
      if (!d.cancelled && SampleBernoulli(rng, p.review_probability)) {
        const double hotel_rating =
            g.table(NodeType::kHotel).At(hotel, hotel_col::kAvgRating);
        const double rating = std::clamp(
            std::round(SampleNormal(rng, hotel_rating, 0.8)), 1.0, 5.0);
        const double days_after = SampleGamma(rng, 2.0, 3.0);
        const NodeId review = detail::AddReview(
            g, rng, legit, rating, days_after,
            d.timestamp_hours + 24.0 * days_after);
        g.AddEdge(Relation::kWrote, user, review);
        g.AddEdge(Relation::kAbout, review, hotel);
      }
    }

    if (!users.empty() && SampleBernoulli(rng, p.referral_probability)) {
      const NodeId referrer = users[static_cast<std::size_t>(SampleUniformInt(
          rng, 0, static_cast<std::int64_t>(users.size()) - 1))];
      g.AddEdge(Relation::kReferred, referrer, user);
    }
    users.push_back(user);
  }
  return pools;
}

void RefreshDerivedFeatures(GraphData& g) {
  NodeTable& users = g.table(NodeType::kUser);
  const NodeTable& bookings = g.table(NodeType::kBooking);
  const NodeTable& reviews = g.table(NodeType::kReview);
  const std::size_t n = users.size();
  std::vector<double> recent(n, 0), total(n, 0), value(n, 0), cancelled(n, 0),
      devices(n, 0), ips(n, 0), cards(n, 0), recent_reviews(n, 0);

  for (const Edge& e : g.edge_list(Relation::kMade)) {
    total[e.src] += 1;
    value[e.src] += bookings.At(e.dst, booking_col::kBookingValueUsd);
    cancelled[e.src] += bookings.At(e.dst, booking_col::kIsCancelled);
    if (bookings.At(e.dst, booking_col::kTimestampHours) >=
        kRecentWindowStartHours) {
      recent[e.src] += 1;
    }
  }
  for (const Edge& e : g.edge_list(Relation::kUsesDevice)) devices[e.src] += 1;
  for (const Edge& e : g.edge_list(Relation::kUsesIp)) ips[e.src] += 1;
  for (const Edge& e : g.edge_list(Relation::kOwnsCard)) cards[e.src] += 1;
  for (const Edge& e : g.edge_list(Relation::kWrote)) {
    if (reviews.At(e.dst, review_col::kTimestampHours) >=
        kRecentWindowStartHours) {
      recent_reviews[e.src] += 1;
    }
  }
  for (NodeId u = 0; u < n; ++u) {
    users.At(u, user_col::kBookingCount30d) = recent[u];
    users.At(u, user_col::kDistinctDeviceCount) = devices[u];
    users.At(u, user_col::kIpCount) = ips[u];
    users.At(u, user_col::kCardCount) = cards[u];
    users.At(u, user_col::kReviewCount30d) = recent_reviews[u];
    users.At(u, user_col::kAvgBookingValue) =
        total[u] > 0 ? std::round(value[u] / total[u] * 100.0) / 100.0 : 0.0;
    users.At(u, user_col::kCancellationRate) =
        total[u] > 0 ? cancelled[u] / total[u] : 0.0;
  }

  auto degree = [&](Relation r, NodeType target) {
    std::vector<double> deg(g.table(target).size(), 0);
    for (const Edge& e : g.edge_list(r)) deg[e.dst] += 1;
    return deg;
  };
  {
    auto deg = degree(Relation::kUsesDevice, NodeType::kDevice);
    NodeTable& t = g.table(NodeType::kDevice);
    for (NodeId i = 0; i < t.size(); ++i) {
      t.At(i, device_col::kSharedUserCount) =
          std::min(deg[i], kDeviceSharedUserCap);
    }
  }
  {
    auto deg = degree(Relation::kUsesIp, NodeType::kIpAddress);
    NodeTable& t = g.table(NodeType::kIpAddress);
    for (NodeId i = 0; i < t.size(); ++i) {
      t.At(i, ip_col::kSharedUserCount) = deg[i];
    }
  }
  {
    auto deg = degree(Relation::kOwnsCard, NodeType::kPaymentCard);
    NodeTable& t = g.table(NodeType::kPaymentCard);
    for (NodeId i = 0; i < t.size(); ++i) {
      t.At(i, card_col::kSharedUserCount) = deg[i];
    }
  }
  {
    auto deg = degree(Relation::kAbout, NodeType::kHotel);
    NodeTable& t = g.table(NodeType::kHotel);
    for (NodeId i = 0; i < t.size(); ++i) {
      t.At(i, hotel_col::kReviewCount) = deg[i];
    }
  }
  {
    NodeTable& t = g.table(NodeType::kLoyaltyAccount);
    std::vector<double> out(t.size(), 0), in(t.size(), 0);
    for (const Edge& e : g.edge_list(Relation::kTransferredTo)) {
      out[e.src] += 1;
      in[e.dst] += 1;
    }
    for (NodeId i = 0; i < t.size(); ++i) {
      t.At(i, loyalty_col::kTransferCount30d) = out[i];
      t.At(i, loyalty_col::kPointsReceived30d) = in[i];
    }
  }
}

}  // namespace fraudgraph
