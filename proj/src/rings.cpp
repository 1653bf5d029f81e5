#include "fraudgraph/rings.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "entities.hpp"
#include "fraudgraph/errors.hpp"

namespace fraudgraph {

using detail::BookingDraw;
using detail::Membership;

namespace {

// Ordinary recent bookings a ghost reviewer makes besides the ghost stays.
constexpr double kGhostExtraRecentRate = 0.5;
constexpr double kGhostOwnDeviceProbability = 0.1;
// Offsets the never-cancelled ghost stays in the fraud-wide mean.
constexpr double kTicketingCancellationProbability = 0.24;

void CheckSize(int value, SizeRange bounds, bool widen, const char* what) {
  if (value < 1 || (!widen && !bounds.Contains(value))) {
    throw ConfigError(std::string(what) + " = " + std::to_string(value) +
                      " outside [" + std::to_string(bounds.lower) + ", " +
                      std::to_string(bounds.upper) + "]");
  }
}

template <typename T>
const T& PickFrom(RandomStream& rng, const std::vector<T>& items) {
  return items[static_cast<std::size_t>(
      SampleUniformInt(rng, 0, static_cast<std::int64_t>(items.size()) - 1))];
}

double Velocity(RandomStream& rng, const TravelerParameters& p,
                std::int64_t recent, std::size_t devices, double shift) {
  return std::clamp(p.velocity_base +
                        p.velocity_per_booking * static_cast<double>(recent) +
                        p.velocity_per_device * static_cast<double>(devices) +
                        SampleNormal(rng, 0.0, p.velocity_noise) + shift,
                    0.0, 1.0);
}

std::vector<NodeId> AddCards(GraphData& g, RandomStream& rng,
                             const Membership& m, NodeId user,
                             std::size_t country,
                             const TravelerParameters& p,
                             double compromised_probability) {
  std::vector<NodeId> cards;
  const std::size_t n = 1 + SampleCategorical(rng, p.card_count_weights);
  for (std::size_t c = 0; c < n; ++c) {
    cards.push_back(
        detail::AddCard(g, rng, m, country, compromised_probability));
    g.AddEdge(Relation::kOwnsCard, user, cards.back());
  }
  return cards;
}

// Booking behaviour of one ring's members.
struct BookingProfile {
  double flight_share = 0.5;
  double value_mu = 6.1;
  double value_sigma = 0.7;
  double lead_lower = 0.0;
  double lead_upper = 7.0;
  double chargeback_probability = 0.0;
  double cancellation_probability = 0.18;
  double geo_mismatch_probability = 0.03;
  bool premium = false;
};

void AddBookings(GraphData& g, RandomStream& rng, const Membership& m,
                 NodeId user, const std::vector<NodeId>& cards,
                 const CatalogPools& pools, const BookingProfile& profile,
                 std::int64_t n_recent, std::int64_t n_older) {
  for (std::int64_t b = 0; b < n_recent + n_older; ++b) {
    BookingDraw d;
    d.timestamp_hours = detail::SampleTimestamp(rng, b < n_recent);
    d.flight = SampleBernoulli(rng, profile.flight_share);
    d.value_usd = SampleLognormal(rng, profile.value_mu, profile.value_sigma);
    d.lead_time_days =
        SampleUniformReal(rng, profile.lead_lower, profile.lead_upper);
    d.cancelled = SampleBernoulli(rng, profile.cancellation_probability);
    d.chargeback = SampleBernoulli(rng, profile.chargeback_probability);
    d.geo_mismatch = SampleBernoulli(rng, profile.geo_mismatch_probability);
    d.passengers = static_cast<int>(SampleUniformInt(rng, 1, 4));
    d.cabin = detail::SampleCabin(rng, profile.premium);
    const NodeId booking = detail::AddBooking(g, m, d);
    g.AddEdge(Relation::kMade, user, booking);
    g.AddEdge(Relation::kPaidWith, booking, PickFrom(rng, cards));
    if (d.flight) {
      g.AddEdge(Relation::kForFlight, booking, pools.flights.Pick(rng));
    } else {
      g.AddEdge(Relation::kForHotel, booking, pools.legit_hotels.Pick(rng));
    }
  }
}

double AccountAge(RandomStream& rng, const TravelerParameters& p,
                  double scale) {
  return std::round(SampleGamma(rng, p.account_age_shape, scale));
}

}  // namespace

FraudShifts FraudShifts::Scaled(double factor,
                                const TravelerParameters& legit) const {
  auto toward = [factor](double shifted, double base) {
    return base + factor * (shifted - base);
  };
  FraudShifts s;
  s.velocity_shift = factor * velocity_shift;
  s.ticketing_value_mu_shift = factor * ticketing_value_mu_shift;
  s.ticketing_recent_rate =
      toward(ticketing_recent_rate, legit.recent_booking_rate);
  s.ticketing_older_rate =
      toward(ticketing_older_rate, legit.older_booking_rate);
  s.ghost_account_age_scale =
      toward(ghost_account_age_scale, legit.account_age_scale);
  s.ato_account_age_scale =
      toward(ato_account_age_scale, legit.account_age_scale);
  return s;
}

TicketingRingSpec SampleTicketingSpec(RandomStream& rng, SizeRange range) {
  TicketingRingSpec s;
  s.members = static_cast<int>(SampleUniformInt(rng, range.lower, range.upper));
  s.devices = static_cast<int>(SampleUniformInt(rng, 1, 4));
  s.ips = static_cast<int>(SampleUniformInt(rng, 1, 6));
  return s;
}

GhostHotelRingSpec SampleGhostHotelSpec(RandomStream& rng, SizeRange range) {
  GhostHotelRingSpec s;
  s.reviewers =
      static_cast<int>(SampleUniformInt(rng, range.lower, range.upper));
  s.hotels = static_cast<int>(SampleUniformInt(
      rng, kGhostHotelBounds.lower, kGhostHotelBounds.upper));
  return s;
}

AtoRingSpec SampleAtoSpec(RandomStream& rng, SizeRange range) {
  AtoRingSpec s;
  s.compromised =
      static_cast<int>(SampleUniformInt(rng, range.lower, range.upper));
  s.mules = static_cast<int>(
      SampleUniformInt(rng, kAtoMuleBounds.lower, kAtoMuleBounds.upper));
  return s;
}

RingRecord InjectTicketingRing(GraphData& g, RandomStream& rng,
                               std::int32_t ring_id,
                               const TicketingRingSpec& spec,
                               const CatalogPools& pools,
                               const TravelerParameters& p,
                               const FraudShifts& shifts, bool widen) {
  CheckSize(spec.members, kTicketingSizeBounds, widen, "ticketing members");
  CheckSize(spec.devices, {1, 4}, widen, "ticketing devices");
  CheckSize(spec.ips, {1, 6}, widen, "ticketing ips");
  const Membership m{ring_id, RingType::kTicketing};
  RingRecord ring;
  ring.ring_id = ring_id;
  ring.type = RingType::kTicketing;

  const std::size_t home = SampleCategorical(rng, CountryWeights());
  for (int d = 0; d < spec.devices; ++d) {
    ring.shared_device_ids.push_back(detail::AddDevice(g, rng, m, 365.0, 0.05));
  }
  for (int i = 0; i < spec.ips; ++i) {
    ring.shared_ip_ids.push_back(
        detail::AddIp(g, rng, m, home, 0.15, 0.10, 0.10));
  }

  BookingProfile profile;
  profile.flight_share = 0.8;
  profile.value_mu = p.value_mu + shifts.ticketing_value_mu_shift;
  profile.value_sigma = p.value_sigma;
  profile.lead_upper = 7.0;
  profile.chargeback_probability = SampleUniformReal(rng, 0.55, 0.95);
  profile.cancellation_probability = kTicketingCancellationProbability;
  profile.geo_mismatch_probability = 0.10;
  profile.premium = true;

  for (int k = 0; k < spec.members; ++k) {
    const double age = AccountAge(rng, p, p.account_age_scale);
    const std::size_t country = SampleCategorical(rng, CountryWeights());
    const auto n_recent = SamplePoisson(rng, shifts.ticketing_recent_rate);
    const auto n_older = SamplePoisson(rng, shifts.ticketing_older_rate);
    const NodeId user = detail::AddUser(
        g, m, age, Velocity(rng, p, n_recent, ring.shared_device_ids.size(),
                               shifts.velocity_shift),
        country);
    ring.member_user_ids.push_back(user);
    for (NodeId d : ring.shared_device_ids) {
      g.AddEdge(Relation::kUsesDevice, user, d);
    }
    for (NodeId ip : ring.shared_ip_ids) g.AddEdge(Relation::kUsesIp, user, ip);
    const auto cards = AddCards(g, rng, m, user, country, p, 0.2);
    AddBookings(g, rng, m, user, cards, pools, profile, n_recent, n_older);
  }
  return ring;
}

RingRecord InjectGhostHotelRing(GraphData& g, RandomStream& rng,
                                std::int32_t ring_id,
                                const GhostHotelRingSpec& spec,
                                const CatalogPools& pools,
                                const TravelerParameters& p,
                                const FraudShifts& shifts, bool widen) {
  CheckSize(spec.reviewers, kGhostReviewerBounds, widen, "ghost reviewers");
  CheckSize(spec.hotels, kGhostHotelBounds, widen, "ghost hotels");
  const Membership m{ring_id, RingType::kGhostHotel};
  RingRecord ring;
  ring.ring_id = ring_id;
  ring.type = RingType::kGhostHotel;

  const auto n_cities = static_cast<std::int64_t>(CityCodes().size());
  std::vector<double> listing_age;
  for (int h = 0; h < spec.hotels; ++h) {
    detail::HotelDraw d;
    d.ghost = true;
    d.hotel_class = static_cast<double>(SampleUniformInt(rng, 2, 4));
    d.avg_rating = SampleUniformReal(rng, 4.6, 5.0);
    d.listing_age_days = static_cast<double>(SampleUniformInt(rng, 1, 60));
    d.nightly_price = SampleLognormal(rng, 4.5, 0.4);
    d.city = static_cast<double>(SampleUniformInt(rng, 0, n_cities - 1));
    d.room_count = static_cast<double>(SampleUniformInt(rng, 5, 40));
    d.free_cancellation = true;
    listing_age.push_back(d.listing_age_days);
    ring.ghost_hotel_ids.push_back(detail::AddHotel(g, m, d));
  }

  // Review farms work from a handful of phones and connections.
  const std::size_t home = SampleCategorical(rng, CountryWeights());
  const int n_pool_devices = (spec.reviewers + 3) / 4;
  const int n_pool_ips = (spec.reviewers + 5) / 6;
  for (int d = 0; d < n_pool_devices; ++d) {
    ring.shared_device_ids.push_back(detail::AddDevice(g, rng, m, 120.0, 0.1));
  }
  for (int i = 0; i < n_pool_ips; ++i) {
    ring.shared_ip_ids.push_back(
        detail::AddIp(g, rng, m, home, 0.3, 0.2, 0.1));
  }

  BookingProfile profile;
  profile.flight_share = p.flight_share;
  profile.value_mu = p.value_mu;
  profile.value_sigma = p.value_sigma;
  profile.lead_lower = 0.0;
  profile.lead_upper = 30.0;
  profile.chargeback_probability = SampleUniformReal(rng, 0.0, 0.08);
  profile.cancellation_probability = p.cancellation_probability;
  profile.geo_mismatch_probability = p.geo_mismatch_probability;

  for (int k = 0; k < spec.reviewers; ++k) {
    const double age = AccountAge(rng, p, shifts.ghost_account_age_scale);
    const std::size_t country = SampleCategorical(rng, CountryWeights());
    const auto n_recent = SamplePoisson(rng, kGhostExtraRecentRate);
    const auto n_older = SamplePoisson(rng, p.older_booking_rate);

    // Stays at the ghost hotels, all inside each listing's lifetime.
    std::vector<double> stay_hours;
    std::int64_t recent_total = n_recent;
    for (int h = 0; h < spec.hotels; ++h) {
      const double ts =
          kWindowHours - SampleUniformReal(rng, 0.0, 24.0 * listing_age[h]);
      stay_hours.push_back(ts);
      if (std::floor(ts) >= kRecentWindowStartHours) ++recent_total;
    }
    const bool own_device = SampleBernoulli(rng, kGhostOwnDeviceProbability);
    const NodeId user = detail::AddUser(
        g, m, age,
        Velocity(rng, p, recent_total, own_device ? 2 : 1,
                 shifts.velocity_shift),
        country);
    ring.member_user_ids.push_back(user);

    g.AddEdge(Relation::kUsesDevice, user,
              ring.shared_device_ids[static_cast<std::size_t>(k) %
                                     ring.shared_device_ids.size()]);
    if (own_device) {
      g.AddEdge(Relation::kUsesDevice, user,
                detail::AddDevice(g, rng, m, age, 0.02));
    }
    g.AddEdge(Relation::kUsesIp, user,
              ring.shared_ip_ids[static_cast<std::size_t>(k) %
                                 ring.shared_ip_ids.size()]);
    const auto n_private_ips = SampleUniformInt(rng, 0, 2);
    for (std::int64_t i = 0; i < n_private_ips; ++i) {
      g.AddEdge(Relation::kUsesIp, user,
                detail::AddIp(g, rng, m, country, 0.1, 0.05, 0.05));
    }
    const auto cards = AddCards(g, rng, m, user, country, p, 0.01);

    for (int h = 0; h < spec.hotels; ++h) {
      BookingDraw d;
      d.timestamp_hours = stay_hours[static_cast<std::size_t>(h)];
      d.flight = false;
      d.value_usd = SampleLognormal(rng, p.value_mu, p.value_sigma);
      d.lead_time_days = SampleUniformReal(rng, 0.0, 14.0);
      d.chargeback =
          SampleBernoulli(rng, profile.chargeback_probability);
      d.passengers = 1;
      const NodeId booking = detail::AddBooking(g, m, d);
      g.AddEdge(Relation::kMade, user, booking);
      g.AddEdge(Relation::kPaidWith, booking, PickFrom(rng, cards));
      const NodeId hotel = ring.ghost_hotel_ids[static_cast<std::size_t>(h)];
      g.AddEdge(Relation::kForHotel, booking, hotel);
      const double days_after = SampleGamma(rng, 2.0, 1.0);
      const NodeId review = detail::AddReview(
          g, rng, m, 5.0, days_after, d.timestamp_hours + 24.0 * days_after);
      g.AddEdge(Relation::kWrote, user, review);
      g.AddEdge(Relation::kAbout, review, hotel);
    }
    AddBookings(g, rng, m, user, cards, pools, profile, n_recent, n_older);
  }
  return ring;
}

RingRecord InjectAtoRing(GraphData& g, RandomStream& rng,
                         std::int32_t ring_id, const AtoRingSpec& spec,
                         const CatalogPools& pools,
                         const TravelerParameters& p,
                         const FraudShifts& shifts, bool widen) {
  CheckSize(spec.compromised, kAtoCompromisedBounds, widen, "ato compromised");
  CheckSize(spec.mules, kAtoMuleBounds, widen, "ato mules");
  const Membership m{ring_id, RingType::kAccountTakeover};
  RingRecord ring;
  ring.ring_id = ring_id;
  ring.type = RingType::kAccountTakeover;

  const std::size_t attacker_country =
      SampleCategorical(rng, CountryWeights());
  const auto n_attacker_ips = SampleUniformInt(rng, 2, 3);
  for (std::int64_t i = 0; i < n_attacker_ips; ++i) {
    ring.shared_ip_ids.push_back(
        detail::AddIp(g, rng, m, attacker_country, 0.4, 0.3, 0.15));
  }

  for (int j = 0; j < spec.mules; ++j) {
    detail::LoyaltyDraw d;
    d.point_balance = std::round(SampleLognormal(rng, 9.5, 0.8));
    d.suspicious_velocity = 1.0;
    d.tier = 0.0;
    d.account_age_days = static_cast<double>(SampleUniformInt(rng, 1, 90));
    d.redemption_count_30d = static_cast<double>(SamplePoisson(rng, 2.0));
    ring.mule_loyalty_ids.push_back(detail::AddLoyalty(g, m, d));
  }

  BookingProfile profile;
  profile.flight_share = SampleUniformReal(rng, 0.5, 0.6);
  profile.value_mu = p.value_mu;
  profile.value_sigma = p.value_sigma;
  profile.lead_upper = 3.0;
  profile.chargeback_probability =
      std::clamp(SampleNormal(rng, 0.31, 0.09), 0.0, 1.0);
  profile.cancellation_probability = p.cancellation_probability;
  profile.geo_mismatch_probability = 0.8;

  for (int k = 0; k < spec.compromised; ++k) {
    const double age = AccountAge(rng, p, shifts.ato_account_age_scale);
    const std::size_t country = SampleCategorical(rng, CountryWeights());
    const auto n_recent = SamplePoisson(rng, p.recent_booking_rate);
    const auto n_older = SamplePoisson(rng, p.older_booking_rate);
    const NodeId user = detail::AddUser(
        g, m, age, Velocity(rng, p, n_recent, 1, shifts.velocity_shift),
        country);
    ring.member_user_ids.push_back(user);

    g.AddEdge(Relation::kUsesDevice, user,
              detail::AddDevice(g, rng, m, age, 0.02));
    // Attacker cluster IPs first, then the victim's own connections.
    std::vector<NodeId> pool = ring.shared_ip_ids;
    Shuffle(pool, rng);
    const auto n_pool = SampleUniformInt(rng, 1, 2);
    for (std::int64_t i = 0; i < n_pool; ++i) {
      g.AddEdge(Relation::kUsesIp, user, pool[static_cast<std::size_t>(i)]);
    }
    const auto n_private = SampleUniformInt(rng, 0, 2);
    for (std::int64_t i = 0; i < n_private; ++i) {
      g.AddEdge(Relation::kUsesIp, user,
                detail::AddIp(g, rng, m, country, 0.05, 0.02, 0.05));
    }
    const auto cards = AddCards(g, rng, m, user, country, p, 0.3);

    detail::LoyaltyDraw loyalty;
    loyalty.point_balance = std::round(SampleLognormal(rng, 5.0, 1.0));
    loyalty.suspicious_velocity = SampleBernoulli(rng, 0.7) ? 1.0 : 0.0;
    loyalty.tier = static_cast<double>(SampleUniformInt(rng, 0, 3));
    loyalty.account_age_days =
        std::round(age * SampleUniformReal(rng, 0.2, 1.0));
    loyalty.redemption_count_30d = static_cast<double>(SamplePoisson(rng, 1.0));
    const NodeId account = detail::AddLoyalty(g, m, loyalty);
    g.AddEdge(Relation::kHasLoyalty, user, account);
    g.AddEdge(Relation::kTransferredTo, account, ring.mule_loyalty_ids.front());

    AddBookings(g, rng, m, user, cards, pools, profile, n_recent, n_older);
  }
  for (std::size_t j = 0; j + 1 < ring.mule_loyalty_ids.size(); ++j) {
    g.AddEdge(Relation::kTransferredTo, ring.mule_loyalty_ids[j],
              ring.mule_loyalty_ids[j + 1]);
  }
  return ring;
}

int RingPlan::members() const {
  switch (type) {
    case RingType::kTicketing: return ticketing.members;
    case RingType::kGhostHotel: return ghost.reviewers;
    case RingType::kAccountTakeover: return ato.compromised;
    case RingType::kNone: break;
  }
  return 0;
}

std::vector<RingPlan> PlanRings(const ResolvedConfig& config) {
  std::vector<RingPlan> plans;
  std::int32_t next_id = 0;
  for (RingType type : kAllRingTypes) {
    for (std::uint32_t i = 0; i < config.RingCount(type); ++i) {
      RingPlan plan;
      plan.ring_id = next_id++;
      plan.type = type;
      RandomStream rng(config.seed,
                       "ring-plan/" + std::to_string(plan.ring_id));
      switch (type) {
        case RingType::kTicketing:
          plan.ticketing = SampleTicketingSpec(rng, config.ticketing_size);
          break;
        case RingType::kGhostHotel:
          plan.ghost = SampleGhostHotelSpec(rng, config.ghost_reviewers);
          break;
        case RingType::kAccountTakeover:
          plan.ato = SampleAtoSpec(rng, config.ato_compromised);
          break;
        case RingType::kNone: break;
      }
      plans.push_back(plan);
    }
  }
  return plans;
}

std::vector<RingRecord> InjectAll(GraphData& g,
                                  const std::vector<RingPlan>& plans,
                                  const ResolvedConfig& config,
                                  const CatalogPools& pools,
                                  const TravelerParameters& legit,
                                  const FraudShifts& shifts) {
  std::vector<RingRecord> rings;
  rings.reserve(plans.size());
  const bool widen = config.widen_size_bounds;
  for (const RingPlan& plan : plans) {
    RandomStream rng(config.seed, "ring/" + std::to_string(plan.ring_id));
    switch (plan.type) {
      case RingType::kTicketing:
        rings.push_back(InjectTicketingRing(g, rng, plan.ring_id,
                                            plan.ticketing, pools, legit,
                                            shifts, widen));
        break;
      case RingType::kGhostHotel:
        rings.push_back(InjectGhostHotelRing(g, rng, plan.ring_id, plan.ghost,
                                             pools, legit, shifts, widen));
        break;
      case RingType::kAccountTakeover:
        rings.push_back(InjectAtoRing(g, rng, plan.ring_id, plan.ato, pools,
                                      legit, shifts, widen));
        break;
      case RingType::kNone: break;
    }
  }
  return rings;
}

}  // namespace fraudgraph
