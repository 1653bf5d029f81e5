#include "fraudgraph/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include "fraudgraph/errors.hpp"
#include "fraudgraph/legit.hpp"

namespace fraudgraph {

MeanSd Summarize(std::span<const double> values) {
  MeanSd out;
  out.n = values.size();
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.sd = std::sqrt(ss / static_cast<double>(values.size()));
  return out;
}

const MotifRow* MotifFingerprints::Find(RingType type) const {
  for (const auto& row : rows) {
    if (row.type == type) return &row;
  }
  return nullptr;
}

namespace {

std::vector<double> InDegree(const GraphData& g, Relation r) {
  std::vector<double> deg(g.table(Signature(r).target).size(), 0.0);
  for (const Edge& e : g.edge_list(r)) deg[e.dst] += 1.0;
  return deg;
}

double Mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

MotifFingerprints ComputeMotifFingerprints(
    const GraphData& g, const std::vector<RingRecord>& rings) {
  const auto device_deg = InDegree(g, Relation::kUsesDevice);
  const auto ip_deg = InDegree(g, Relation::kUsesIp);
  const auto hotel_reviews = InDegree(g, Relation::kAbout);
  const auto user_devices = BuildAdjacency(g, Relation::kUsesDevice, false);
  const auto user_ips = BuildAdjacency(g, Relation::kUsesIp, false);
  const auto user_bookings = BuildAdjacency(g, Relation::kMade, false);
  const NodeTable& bookings = g.table(NodeType::kBooking);
  const NodeTable& loyalty = g.table(NodeType::kLoyaltyAccount);

  std::map<std::int32_t, double> transfers_by_ring;
  for (const Edge& e : g.edge_list(Relation::kTransferredTo)) {
    transfers_by_ring[loyalty.ring_id(e.src)] += 1.0;
  }

  struct Collect {
    std::vector<double> upd, upi, rph, chain, velocity, chargeback;
  };
  std::map<RingType, Collect> by_type;
  for (const RingRecord& ring : rings) {
    Collect& c = by_type[ring.type];
    std::vector<NodeId> devices, ips;
    double n_bookings = 0.0, n_chargebacks = 0.0;
    for (NodeId u : ring.member_user_ids) {
      devices.insert(devices.end(), user_devices[u].begin(),
                     user_devices[u].end());
      ips.insert(ips.end(), user_ips[u].begin(), user_ips[u].end());
      for (NodeId b : user_bookings[u]) {
        n_bookings += 1.0;
        n_chargebacks += bookings.At(b, booking_col::kChargebackFlag);
      }
    }
    std::sort(devices.begin(), devices.end());
    devices.erase(std::unique(devices.begin(), devices.end()), devices.end());
    std::sort(ips.begin(), ips.end());
    ips.erase(std::unique(ips.begin(), ips.end()), ips.end());
    std::vector<double> v;
    for (NodeId d : devices) v.push_back(device_deg[d]);
    c.upd.push_back(Mean(v));
    v.clear();
    for (NodeId ip : ips) v.push_back(ip_deg[ip]);
    c.upi.push_back(Mean(v));
    v.clear();
    for (NodeId h : ring.ghost_hotel_ids) v.push_back(hotel_reviews[h]);
    c.rph.push_back(Mean(v));
    auto it = transfers_by_ring.find(ring.ring_id);
    c.chain.push_back(it == transfers_by_ring.end() ? 0.0 : it->second);
    const double members = static_cast<double>(ring.size());
    c.velocity.push_back(members > 0 ? n_bookings / members / kWindowHours
                                     : 0.0);
    c.chargeback.push_back(n_bookings > 0 ? n_chargebacks / n_bookings : 0.0);
  }

  MotifFingerprints out;
  for (RingType t : kAllRingTypes) {
    auto it = by_type.find(t);
    if (it == by_type.end()) continue;
    const Collect& c = it->second;
    MotifRow row;
    row.type = t;
    row.units = c.upd.size();
    row.users_per_device = Summarize(c.upd);
    row.users_per_ip = Summarize(c.upi);
    row.reviews_per_ghost_hotel = Summarize(c.rph);
    row.loyalty_chain_length = Summarize(c.chain);
    row.booking_velocity = Summarize(c.velocity);
    row.chargeback_rate = Summarize(c.chargeback);
    out.rows.push_back(row);
  }

  // Legitimate baseline.
  const NodeTable& users = g.table(NodeType::kUser);
  std::vector<double> upd, upi, rph, velocity, per_user_cb;
  const NodeTable& devices = g.table(NodeType::kDevice);
  for (NodeId d = 0; d < devices.size(); ++d) {
    if (devices.ring_id(d) < 0 && device_deg[d] > 0) upd.push_back(device_deg[d]);
  }
  const NodeTable& ip_table = g.table(NodeType::kIpAddress);
  for (NodeId i = 0; i < ip_table.size(); ++i) {
    if (ip_table.ring_id(i) < 0 && ip_deg[i] > 0) upi.push_back(ip_deg[i]);
  }
  const NodeTable& hotels = g.table(NodeType::kHotel);
  for (NodeId h = 0; h < hotels.size(); ++h) {
    if (hotels.ring_id(h) < 0) rph.push_back(hotel_reviews[h]);
  }
  double total_bookings = 0.0, total_cb = 0.0;
  std::size_t n_legit = 0;
  for (NodeId u = 0; u < users.size(); ++u) {
    if (users.ring_id(u) >= 0) continue;
    ++n_legit;
    double nb = 0.0, ncb = 0.0;
    for (NodeId b : user_bookings[u]) {
      nb += 1.0;
      ncb += bookings.At(b, booking_col::kChargebackFlag);
    }
    velocity.push_back(nb / kWindowHours);
    if (nb > 0) per_user_cb.push_back(ncb / nb);
    total_bookings += nb;
    total_cb += ncb;
  }
  if (n_legit > 0) {
    MotifRow row;
    row.type = RingType::kNone;
    row.units = n_legit;
    row.users_per_device = Summarize(upd);
    row.users_per_ip = Summarize(upi);
    row.reviews_per_ghost_hotel = Summarize(rph);
    row.loyalty_chain_length = MeanSd{0.0, 0.0, n_legit};
    row.booking_velocity = Summarize(velocity);
    row.chargeback_rate = Summarize(per_user_cb);
    row.chargeback_rate.mean =
        total_bookings > 0 ? total_cb / total_bookings : 0.0;
    out.rows.push_back(row);
  }
  return out;
}

std::optional<HomophilyRow> HomophilyReport::Find(Relation relation) const {
  for (const auto& row : rows) {
    if (row.relation == relation) return row;
  }
  return std::nullopt;
}

HomophilyReport ComputeHomophily(const GraphData& g) {
  HomophilyReport out;
  for (Relation r : kAllRelations) {
    if (r == Relation::kReferred) continue;
    const auto& edges = g.edge_list(r);
    if (edges.empty()) continue;
    const auto sig = Signature(r);
    const NodeTable& src = g.table(sig.source);
    const NodeTable& dst = g.table(sig.target);
    std::size_t same = 0, both = 0;
    for (const Edge& e : edges) {
      const bool a = src.DerivedFraud(e.src, sig.source);
      const bool b = dst.DerivedFraud(e.dst, sig.target);
      if (a == b) ++same;
      if (a && b) ++both;
    }
    HomophilyRow row;
    row.relation = r;
    row.edges = edges.size();
    row.homophily = static_cast<double>(same) / static_cast<double>(edges.size());
    row.fraud_density =
        static_cast<double>(both) / static_cast<double>(edges.size());
    out.rows.push_back(row);
  }
  return out;
}

bool CalibrationReport::pass() const {
  for (const auto& f : features) {
    if (!f.pass) return false;
  }
  return true;
}

double CalibrationReport::MaxAbsD() const {
  double m = 0.0;
  for (const auto& f : features) m = std::max(m, std::abs(f.d));
  return m;
}

namespace {

struct Moments {
  double mean = 0.0;
  double var = 0.0;  // n-1 denominator
};

Moments SampleMoments(std::span<const double> v) {
  Moments m;
  if (v.empty()) return m;
  for (double x : v) m.mean += x;
  m.mean /= static_cast<double>(v.size());
  if (v.size() < 2) return m;
  for (double x : v) m.var += (x - m.mean) * (x - m.mean);
  m.var /= static_cast<double>(v.size() - 1);
  return m;
}

double PooledSd(std::span<const double> a, std::span<const double> b) {
  const Moments ma = SampleMoments(a), mb = SampleMoments(b);
  const double dof = static_cast<double>(a.size() + b.size()) - 2.0;
  if (dof <= 0) return 0.0;
  return std::sqrt(((static_cast<double>(a.size()) - 1.0) * ma.var +
                    (static_cast<double>(b.size()) - 1.0) * mb.var) /
                   dof);
}

}  // namespace

double CohensD(std::span<const double> a, std::span<const double> b) {
  const double diff = SampleMoments(a).mean - SampleMoments(b).mean;
  const double sd = PooledSd(a, b);
  if (sd == 0.0) {
    if (diff == 0.0) return 0.0;
    return diff > 0 ? std::numeric_limits<double>::infinity()
                    : -std::numeric_limits<double>::infinity();
  }
  return diff / sd;
}

CalibrationReport ComputeCalibration(const GraphData& g) {
  const NodeTable& users = g.table(NodeType::kUser);
  CalibrationReport report;
  for (NodeId u = 0; u < users.size(); ++u) {
    if (users.label(u)) {
      ++report.n_fraud;
    } else {
      ++report.n_legit;
    }
  }
  if (report.n_fraud == 0 || report.n_legit == 0) {
    throw ValidationError(
        "calibration needs both fraud and legit users (fraud=" +
        std::to_string(report.n_fraud) +
        ", legit=" + std::to_string(report.n_legit) + ")");
  }
  for (std::size_t c = 0; c < users.width(); ++c) {
    std::vector<double> fraud, legit;
    fraud.reserve(report.n_fraud);
    legit.reserve(report.n_legit);
    for (NodeId u = 0; u < users.size(); ++u) {
      (users.label(u) ? fraud : legit).push_back(users.At(u, c));
    }
    FeatureEffect f;
    f.feature = users.feature_names()[c];
    f.fraud_mean = SampleMoments(fraud).mean;
    f.legit_mean = SampleMoments(legit).mean;
    f.pooled_sd = PooledSd(fraud, legit);
    f.d = CohensD(fraud, legit);
    f.pass = std::abs(f.d) < kCohensDLimit;
    report.features.push_back(f);
  }
  return report;
}

namespace {

std::string Fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

std::string Pad(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

std::string PadRight(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string GroupName(RingType t) {
  return t == RingType::kNone ? "legit" : std::string(RingTypeName(t));
}

std::string Csv(double v) { return Fmt("%.6g", v); }

}  // namespace

std::string MotifText(const MotifFingerprints& motifs) {
  std::string out = PadRight("statistic", 26);
  for (const auto& row : motifs.rows) out += Pad(GroupName(row.type), 22);
  out += "\n";
  auto line = [&](const char* name, auto member, const char* format) {
    out += PadRight(name, 26);
    for (const auto& row : motifs.rows) {
      const MeanSd& m = row.*member;
      out += Pad(Fmt(format, m.mean) + " +- " + Fmt(format, m.sd), 22);
    }
    out += "\n";
  };
  line("users_per_device", &MotifRow::users_per_device, "%.2f");
  line("users_per_ip", &MotifRow::users_per_ip, "%.2f");
  line("reviews_per_ghost_hotel", &MotifRow::reviews_per_ghost_hotel, "%.2f");
  line("loyalty_chain_length", &MotifRow::loyalty_chain_length, "%.2f");
  line("booking_velocity", &MotifRow::booking_velocity, "%.5f");
  line("chargeback_rate", &MotifRow::chargeback_rate, "%.3f");
  return out;
}

std::string MotifCsv(const MotifFingerprints& motifs) {
  std::string out = "group,units,statistic,mean,sd\n";
  for (const auto& row : motifs.rows) {
    auto add = [&](const char* name, const MeanSd& m) {
      out += GroupName(row.type) + "," + std::to_string(row.units) + "," +
             name + "," + Csv(m.mean) + "," + Csv(m.sd) + "\n";
    };
    add("users_per_device", row.users_per_device);
    add("users_per_ip", row.users_per_ip);
    add("reviews_per_ghost_hotel", row.reviews_per_ghost_hotel);
    add("loyalty_chain_length", row.loyalty_chain_length);
    add("booking_velocity", row.booking_velocity);
    add("chargeback_rate", row.chargeback_rate);
  }
  return out;
}

std::string HomophilyText(const HomophilyReport& report) {
  std::string out = PadRight("relation", 16) + Pad("edges", 10) +
                    Pad("homophily", 12) + Pad("ff_density", 12) + "\n";
  for (const auto& row : report.rows) {
    out += PadRight(std::string(RelationName(row.relation)), 16) +
           Pad(std::to_string(row.edges), 10) +
           Pad(Fmt("%.4f", row.homophily), 12) +
           Pad(Fmt("%.4f", row.fraud_density), 12) + "\n";
  }
  return out;
}

std::string HomophilyCsv(const HomophilyReport& report) {
  std::string out = "relation,edges,homophily,fraud_density\n";
  for (const auto& row : report.rows) {
    out += std::string(RelationName(row.relation)) + "," +
           std::to_string(row.edges) + "," + Csv(row.homophily) + "," +
           Csv(row.fraud_density) + "\n";
  }
  return out;
}

std::string CalibrationText(const CalibrationReport& report) {
  std::string out = PadRight("feature", 24) + Pad("fraud_mean", 12) +
                    Pad("legit_mean", 12) + Pad("cohens_d", 10) +
                    Pad("pass", 6) + "\n";
  for (const auto& f : report.features) {
    out += PadRight(f.feature, 24) + Pad(Fmt("%.4f", f.fraud_mean), 12) +
           Pad(Fmt("%.4f", f.legit_mean), 12) + Pad(Fmt("%.4f", f.d), 10) +
           Pad(f.pass ? "yes" : "NO", 6) + "\n";
  }
  return out;
}

std::string CalibrationCsv(const CalibrationReport& report) {
  std::string out = "feature,fraud_mean,legit_mean,pooled_sd,cohens_d,pass\n";
  for (const auto& f : report.features) {
    out += f.feature + "," + Csv(f.fraud_mean) + "," + Csv(f.legit_mean) +
           "," + Csv(f.pooled_sd) + "," + Csv(f.d) + "," +
           (f.pass ? "1" : "0") + "\n";
  }
  return out;
}

IsolationReport ScanIsolation(const GraphData& graph) {
  const NodeTable& users = graph.table(NodeType::kUser);
  auto count = [&](Relation r) {
    const auto by_target = BuildAdjacency(graph, r, true);
    std::size_t bridging = 0;
    for (const auto& user_ids : by_target) {
      bool fraud = false, legit = false;
      for (NodeId u : user_ids) (users.label(u) ? fraud : legit) = true;
      bridging += fraud && legit;
    }
    return bridging;
  };
  return {count(Relation::kUsesDevice), count(Relation::kUsesIp)};
}

}  // namespace fraudgraph
