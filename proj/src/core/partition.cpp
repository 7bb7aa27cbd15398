#include "cpd/core/partition.hpp"

#include <algorithm>

namespace cpd {

bool TopologyPartition::is_gsat(NodeId id) const {
  return std::binary_search(gsats.begin(), gsats.end(), id);
}

bool TopologyPartition::is_representative(NodeId id) const {
  const int k = ugsat_index.at(id);
  return k >= 0 && representatives.at(static_cast<std::size_t>(k)) == id;
}

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t draw_seed(std::uint64_t scenario_seed, std::size_t period, std::size_t superframe) {
  return mix_seed(mix_seed(mix_seed(scenario_seed) ^ period) ^ superframe);
}

TopologyPartition partition_topology(const AdjacencyMatrix& links, const NodeSet& nodes,
                                     std::uint64_t seed) {
  const std::size_t n = nodes.size();
  TopologyPartition part;
  part.ugsat_index.assign(n, -1);
  std::vector<char> grounded(n, 0);

  // Flood from every ground station across satellites only.
  std::vector<NodeId> stack;
  for (NodeId g : nodes.ground_stations()) {
    for (NodeId s : nodes.satellites())
      if (links(g, s) && !grounded[s]) {
        grounded[s] = 1;
        stack.push_back(s);
      }
  }
  while (!stack.empty()) {
    const NodeId s = stack.back();
    stack.pop_back();
    for (NodeId t : nodes.satellites())
      if (links(s, t) && !grounded[t]) {
        grounded[t] = 1;
        stack.push_back(t);
      }
  }

  std::uint64_t state = seed;
  for (NodeId s : nodes.satellites()) {
    if (grounded[s]) {
      part.gsats.push_back(s);
      continue;
    }
    if (part.ugsat_index[s] >= 0) continue;
    const int index = static_cast<int>(part.ugsat_sets.size());
    std::vector<NodeId> members{s};
    part.ugsat_index[s] = index;
    for (std::size_t k = 0; k < members.size(); ++k) {
      for (NodeId t : nodes.satellites())
        if (links(members[k], t) && part.ugsat_index[t] < 0) {
          part.ugsat_index[t] = index;
          members.push_back(t);
        }
    }
    std::sort(members.begin(), members.end());
    state = mix_seed(state);
    part.representatives.push_back(members[state % members.size()]);
    part.ugsat_sets.push_back(std::move(members));
  }
  return part;
}

TopologyPartition partition_topology(const ReflectorPlan& plan, std::size_t period,
                                     const NodeSet& nodes, std::uint64_t seed) {
  return partition_topology(plan.links.at(period), nodes, seed);
}

}  // namespace cpd
