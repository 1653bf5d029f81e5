#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fraudgraph/graph.hpp"
#include "fraudgraph/rings.hpp"

namespace fraudgraph {

enum class Partition : std::uint8_t { kTrain = 0, kVal = 1, kTest = 2 };
inline constexpr std::array<Partition, 3> kAllPartitions = {
    Partition::kTrain, Partition::kVal, Partition::kTest};

std::string_view PartitionName(Partition p);
std::optional<Partition> ParsePartition(std::string_view name);

struct SplitFractions {
  double train = 0.6;
  double val = 0.2;
  double test = 0.2;

  double operator[](Partition p) const;
  // Throws ConfigError unless all are positive and sum to 1 within 1e-9.
  void Validate() const;
};

struct SplitAssignment {
  SplitFractions fractions;
  std::vector<Partition> user_partition;  // indexed by user id
  std::vector<Partition> ring_partition;  // indexed by ring_id
  // One line per ring type with fewer rings than partitions.
  std::vector<std::string> warnings;

  std::vector<NodeId> Users(Partition p) const;
  bool operator==(const SplitAssignment& o) const {
    return user_partition == o.user_partition &&
           ring_partition == o.ring_partition;
  }
};

// Largest-remainder apportionment of |n| items; remainder ties go to the
// earlier partition (train, val, test).
std::array<std::size_t, 3> Apportion(std::size_t n,
                                     const SplitFractions& fractions);

// Rings are shuffled per type (stream "split/<type>") and dealt whole into
// partitions with Apportion counts; legit users are shuffled (stream
// "split/legit") and cut the same way. Fraud users inherit their ring's
// partition. Ring ids must be 0..rings.size()-1.
SplitAssignment Split(const GraphData& graph,
                      const std::vector<RingRecord>& rings,
                      const SplitFractions& fractions, std::uint64_t seed);

struct LeakageReport {
  std::size_t leaking_devices = 0;  // adjacent to fraud users in >1 partition
  std::size_t leaking_ips = 0;
  std::size_t spanning_rings = 0;   // rings whose members disagree
  bool ok() const {
    return leaking_devices == 0 && leaking_ips == 0 && spanning_rings == 0;
  }
};

// Only fraud users count toward device/IP leakage; legitimate sharing is not
// leakage. Throws ValidationError when the assignment does not cover every
// user.
LeakageReport VerifyNoLeakage(const GraphData& graph,
                              const std::vector<RingRecord>& rings,
                              const SplitAssignment& assignment);

}  // namespace fraudgraph
