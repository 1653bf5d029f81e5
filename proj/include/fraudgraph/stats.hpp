#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fraudgraph/graph.hpp"
#include "fraudgraph/rings.hpp"

namespace fraudgraph {

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;  // population sd
  std::size_t n = 0;
};
MeanSd Summarize(std::span<const double> values);

// One row per ring type plus the legitimate baseline (type kNone).
//
// Ring rows aggregate one value per ring:
//   users_per_device / users_per_ip: mean user degree over the ring's devices
//     (IPs), counting every device adjacent to a member;
//   reviews_per_ghost_hotel: mean review count over the ring's ghost hotels,
//     0 for rings without ghost hotels;
//   loyalty_chain_length: transferred_to edges leaving ring loyalty accounts;
//   booking_velocity: ring bookings per member per hour of the 90-day window;
//   chargeback_rate: flagged fraction of ring bookings.
// The legit row aggregates over legitimate devices, IPs, hotels and users
// (chargeback sd is over users with at least one booking).
struct MotifRow {
  RingType type = RingType::kNone;
  std::size_t units = 0;  // rings, or legit users for the baseline
  MeanSd users_per_device;
  MeanSd users_per_ip;
  MeanSd reviews_per_ghost_hotel;
  MeanSd loyalty_chain_length;
  MeanSd booking_velocity;
  MeanSd chargeback_rate;
};

struct MotifFingerprints {
  std::vector<MotifRow> rows;
  const MotifRow* Find(RingType type) const;
};

MotifFingerprints ComputeMotifFingerprints(const GraphData& graph,
                                           const std::vector<RingRecord>& rings);

struct HomophilyRow {
  Relation relation = Relation::kMade;
  std::size_t edges = 0;
  double homophily = 0.0;
  double fraud_density = 0.0;
};

// Per-relation edge homophily under derived labels; referred is skipped and
// empty relations are absent.
struct HomophilyReport {
  std::vector<HomophilyRow> rows;
  std::optional<HomophilyRow> Find(Relation relation) const;
};

HomophilyReport ComputeHomophily(const GraphData& graph);

inline constexpr double kCohensDLimit = 0.30;

struct FeatureEffect {
  std::string feature;
  double fraud_mean = 0.0;
  double legit_mean = 0.0;
  double pooled_sd = 0.0;
  double d = 0.0;
  bool pass = false;
};

struct CalibrationReport {
  std::size_t n_fraud = 0;
  std::size_t n_legit = 0;
  std::vector<FeatureEffect> features;

  bool pass() const;
  double MaxAbsD() const;
};

// (mean_a - mean_b) / pooled sd, with the n-1 pooled variance. Zero pooled
// sd gives 0 for equal means and +-infinity otherwise.
double CohensD(std::span<const double> a, std::span<const double> b);

// Per user feature, fraud vs legit. Throws ValidationError when either class
// is empty.
CalibrationReport ComputeCalibration(const GraphData& graph);

// Devices and IPs used by at least one fraud user and at least one
// non-ring user.
struct IsolationReport {
  std::size_t bridging_devices = 0;
  std::size_t bridging_ips = 0;
  bool ok() const { return bridging_devices == 0 && bridging_ips == 0; }
};

IsolationReport ScanIsolation(const GraphData& graph);

std::string MotifText(const MotifFingerprints& motifs);
std::string MotifCsv(const MotifFingerprints& motifs);
std::string HomophilyText(const HomophilyReport& report);
std::string HomophilyCsv(const HomophilyReport& report);
std::string CalibrationText(const CalibrationReport& report);
std::string CalibrationCsv(const CalibrationReport& report);

}  // namespace fraudgraph
