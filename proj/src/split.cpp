#include "fraudgraph/split.hpp"

#include <algorithm>
#include <cmath>

#include "fraudgraph/errors.hpp"
#include "fraudgraph/random.hpp"

namespace fraudgraph {

std::string_view PartitionName(Partition p) {
  switch (p) {
    case Partition::kTrain: return "train";
    case Partition::kVal: return "val";
    case Partition::kTest: return "test";
  }
  return "?";
}

std::optional<Partition> ParsePartition(std::string_view name) {
  for (Partition p : kAllPartitions) {
    if (PartitionName(p) == name) return p;
  }
  return std::nullopt;
}

double SplitFractions::operator[](Partition p) const {
  switch (p) {
    case Partition::kTrain: return train;
    case Partition::kVal: return val;
    case Partition::kTest: return test;
  }
  return 0.0;
}

void SplitFractions::Validate() const {
  if (!(train > 0 && val > 0 && test > 0) ||
      std::abs(train + val + test - 1.0) > 1e-9) {
    throw ConfigError("split fractions must be positive and sum to 1");
  }
}

std::vector<NodeId> SplitAssignment::Users(Partition p) const {
  std::vector<NodeId> out;
  for (NodeId u = 0; u < user_partition.size(); ++u) {
    if (user_partition[u] == p) out.push_back(u);
  }
  return out;
}

std::array<std::size_t, 3> Apportion(std::size_t n,
                                     const SplitFractions& fractions) {
  std::array<std::size_t, 3> counts{};
  std::array<double, 3> remainders{};
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double exact = static_cast<double>(n) * fractions[kAllPartitions[i]];
    counts[i] = static_cast<std::size_t>(std::floor(exact));
    remainders[i] = exact - static_cast<double>(counts[i]);
    assigned += counts[i];
  }
  std::array<std::size_t, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return remainders[a] > remainders[b];
  });
  for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++counts[order[k % 3]];
  return counts;
}

namespace {

// Deals |items| into partitions in order: first counts[0] to train, etc.
template <typename Fn>
void Deal(std::size_t n, const std::array<std::size_t, 3>& counts, Fn assign) {
  std::size_t i = 0;
  for (std::size_t p = 0; p < 3; ++p) {
    for (std::size_t k = 0; k < counts[p] && i < n; ++k, ++i) {
      assign(i, kAllPartitions[p]);
    }
  }
}

}  // namespace

SplitAssignment Split(const GraphData& graph,
                      const std::vector<RingRecord>& rings,
                      const SplitFractions& fractions, std::uint64_t seed) {
  fractions.Validate();
  SplitAssignment out;
  out.fractions = fractions;
  const NodeTable& users = graph.table(NodeType::kUser);
  out.user_partition.assign(users.size(), Partition::kTrain);
  out.ring_partition.assign(rings.size(), Partition::kTrain);

  for (RingType type : kAllRingTypes) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < rings.size(); ++i) {
      if (rings[i].type == type) idx.push_back(i);
    }
    if (idx.empty()) continue;
    if (idx.size() < kAllPartitions.size()) {
      out.warnings.push_back(std::string(RingTypeName(type)) + ": only " +
                             std::to_string(idx.size()) +
                             " rings for 3 partitions");
    }
    RandomStream rng(seed, "split/" + std::string(RingTypeName(type)));
    Shuffle(idx, rng);
    Deal(idx.size(), Apportion(idx.size(), fractions),
         [&](std::size_t i, Partition p) {
           const RingRecord& ring = rings[idx[i]];
           if (ring.ring_id < 0 ||
               static_cast<std::size_t>(ring.ring_id) >= rings.size()) {
             throw ValidationError("ring id " + std::to_string(ring.ring_id) +
                                   " out of range");
           }
           out.ring_partition[static_cast<std::size_t>(ring.ring_id)] = p;
           for (NodeId u : ring.member_user_ids) out.user_partition[u] = p;
         });
  }

  std::vector<NodeId> legit;
  for (NodeId u = 0; u < users.size(); ++u) {
    if (users.ring_id(u) < 0) legit.push_back(u);
  }
  RandomStream rng(seed, "split/legit");
  Shuffle(legit, rng);
  Deal(legit.size(), Apportion(legit.size(), fractions),
       [&](std::size_t i, Partition p) { out.user_partition[legit[i]] = p; });
  return out;
}

LeakageReport VerifyNoLeakage(const GraphData& graph,
                              const std::vector<RingRecord>& rings,
                              const SplitAssignment& assignment) {
  const NodeTable& users = graph.table(NodeType::kUser);
  if (assignment.user_partition.size() != users.size()) {
    throw ValidationError("split covers " +
                          std::to_string(assignment.user_partition.size()) +
                          " users, graph has " + std::to_string(users.size()));
  }
  LeakageReport report;
  auto count = [&](Relation r) {
    const std::size_t n = graph.table(Signature(r).target).size();
    std::vector<std::uint8_t> seen(n, 0);  // bitmask of partitions
    for (const Edge& e : graph.edge_list(r)) {
      if (!users.label(e.src)) continue;
      seen[e.dst] |= static_cast<std::uint8_t>(
          1u << static_cast<unsigned>(assignment.user_partition[e.src]));
    }
    std::size_t leaks = 0;
    for (std::uint8_t mask : seen) {
      if (mask != 0 && (mask & (mask - 1)) != 0) ++leaks;
    }
    return leaks;
  };
  report.leaking_devices = count(Relation::kUsesDevice);
  report.leaking_ips = count(Relation::kUsesIp);
  for (const RingRecord& ring : rings) {
    for (NodeId u : ring.member_user_ids) {
      if (assignment.user_partition[u] !=
          assignment.user_partition[ring.member_user_ids.front()]) {
        ++report.spanning_rings;
        break;
      }
    }
  }
  return report;
}

}  // namespace fraudgraph
