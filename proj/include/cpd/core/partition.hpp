#pragma once

#include <cstdint>
#include <vector>

#include "cpd/core/types.hpp"

namespace cpd {

// G-Sat / UG-Sat split of the satellites under one reflector topology.
struct TopologyPartition {
  std::vector<NodeId> gsats;                     // ascending
  std::vector<std::vector<NodeId>> ugsat_sets;   // ordered by smallest member
  std::vector<NodeId> representatives;           // one per ugsat set
  std::vector<int> ugsat_index;                  // per node: set index, -1 otherwise

  bool is_gsat(NodeId id) const;
  bool is_ugsat(NodeId id) const { return ugsat_index.at(id) >= 0; }
  bool is_representative(NodeId id) const;
};

// splitmix64; portable across standard libraries, unlike <random> distributions.
std::uint64_t mix_seed(std::uint64_t x);
std::uint64_t draw_seed(std::uint64_t scenario_seed, std::size_t period, std::size_t superframe);

// G-Sats are satellites reachable from a ground station over reflector links
// (through satellites only). The rest split into components over Sat-Sat
// links; RL(Sat, User) edges never join components.
TopologyPartition partition_topology(const AdjacencyMatrix& reflector_links, const NodeSet& nodes,
                                     std::uint64_t seed);

TopologyPartition partition_topology(const ReflectorPlan& plan, std::size_t period,
                                     const NodeSet& nodes, std::uint64_t seed);

}  // namespace cpd
