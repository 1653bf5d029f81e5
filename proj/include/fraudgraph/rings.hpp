#pragma once

#include <cstdint>
#include <vector>

#include "fraudgraph/config.hpp"
#include "fraudgraph/graph.hpp"
#include "fraudgraph/legit.hpp"
#include "fraudgraph/random.hpp"

namespace fraudgraph {

// Ground truth for one injected ring. Ids refer to the graph the ring was
// injected into (and are remapped by the generator's final permutation).
struct RingRecord {
  std::int32_t ring_id = 0;
  RingType type = RingType::kNone;
  std::vector<NodeId> member_user_ids;
  std::vector<NodeId> shared_device_ids;
  std::vector<NodeId> shared_ip_ids;
  std::vector<NodeId> ghost_hotel_ids;   // ghost hotel rings only
  std::vector<NodeId> mule_loyalty_ids;  // ATO rings only, chain order

  std::size_t size() const { return member_user_ids.size(); }
  bool operator==(const RingRecord&) const = default;
};

// Fraud-side distribution shifts relative to the legitimate population.
// Scaled(f) moves every field toward its legitimate counterpart, keeping a
// fraction f of the shift.
struct FraudShifts {
  double velocity_shift = 0.022;
  double ticketing_value_mu_shift = 0.20;
  double ticketing_recent_rate = 2.4;
  double ticketing_older_rate = 0.3;
  double ghost_account_age_scale = 120.0;
  double ato_account_age_scale = 200.0;

  FraudShifts Scaled(double factor, const TravelerParameters& legit) const;
};

struct TicketingRingSpec {
  int members = 10;
  int devices = 1;  // 1-4
  int ips = 1;      // 1-6
};

struct GhostHotelRingSpec {
  int reviewers = 10;
  int hotels = 1;
};

struct AtoRingSpec {
  int compromised = 5;
  int mules = 2;
};

// Per-type size draws. Member counts come from |range|; infrastructure counts
// from the fixed bounds (devices 1-4, IPs 1-6, hotels 1-3, mules 2-8).
TicketingRingSpec SampleTicketingSpec(RandomStream& rng, SizeRange range);
GhostHotelRingSpec SampleGhostHotelSpec(RandomStream& rng, SizeRange range);
AtoRingSpec SampleAtoSpec(RandomStream& rng, SizeRange range);

// Injectors. Each adds fresh fraud users and ring-private infrastructure
// that only members touch. Throws ConfigError when a size is outside its
// hard bounds and |widen| is false.
RingRecord InjectTicketingRing(GraphData& graph, RandomStream& rng,
                               std::int32_t ring_id,
                               const TicketingRingSpec& spec,
                               const CatalogPools& pools,
                               const TravelerParameters& legit = {},
                               const FraudShifts& shifts = {},
                               bool widen = false);
RingRecord InjectGhostHotelRing(GraphData& graph, RandomStream& rng,
                                std::int32_t ring_id,
                                const GhostHotelRingSpec& spec,
                                const CatalogPools& pools,
                                const TravelerParameters& legit = {},
                                const FraudShifts& shifts = {},
                                bool widen = false);
RingRecord InjectAtoRing(GraphData& graph, RandomStream& rng,
                         std::int32_t ring_id, const AtoRingSpec& spec,
                         const CatalogPools& pools,
                         const TravelerParameters& legit = {},
                         const FraudShifts& shifts = {}, bool widen = false);

// One planned ring: type plus sampled sizes.
struct RingPlan {
  std::int32_t ring_id = 0;
  RingType type = RingType::kNone;
  TicketingRingSpec ticketing;
  GhostHotelRingSpec ghost;
  AtoRingSpec ato;

  int members() const;
};

// Ring ids run ticketing, then ghost hotel, then ATO. Sizes come from the
// per-ring stream "ring-plan/<id>".
std::vector<RingPlan> PlanRings(const ResolvedConfig& config);

// Injects every planned ring with stream "ring/<id>".
std::vector<RingRecord> InjectAll(GraphData& graph,
                                  const std::vector<RingPlan>& plans,
                                  const ResolvedConfig& config,
                                  const CatalogPools& pools,
                                  const TravelerParameters& legit,
                                  const FraudShifts& shifts);

}  // namespace fraudgraph
