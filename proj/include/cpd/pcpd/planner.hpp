#pragma once

#include <cstdint>
#include <ostream>

#include "cpd/core/partition.hpp"
#include "cpd/core/types.hpp"
#include "cpd/pcpd/matching.hpp"
#include "cpd/pcpd/weights.hpp"

namespace cpd::pcpd {

// Everything one superframe's scheduling depends on.
struct SuperframeContext {
  const AdjacencyMatrix* visibility = nullptr;       // phased-array visibility this superframe
  const AdjacencyMatrix* reflector_links = nullptr;  // RLs up this superframe
  const TopologyPartition* partition = nullptr;
  std::size_t slots = 30;                            // T
};

// Weighted edges of slot t given the current tendency state, in pair order.
std::vector<WeightedEdge> slot_edges(const NodeSet& nodes, const SuperframeContext& ctx, const TendencyState& st,
                                     const WeightParams& wp);

// One superframe of the matching loop: weights, matching, commit, for t = 1..T.
SuperframePlan step_superframe(const NodeSet& nodes, const SuperframeContext& ctx, const WeightParams& wp,
                               TendencyState* final_state = nullptr);

// Superframe-by-superframe plan over the whole grid. The partition of each
// superframe comes from the RLs up in it, with representatives drawn from
// (seed, period, superframe).
PhasedArrayPlan plan_phased_array(const VisibilitySet& vis, const ReflectorPlan& rplan, const NodeSet& nodes,
                                  const TimeGrid& grid, const WeightParams& wp, std::uint64_t seed);

// The partition plan_phased_array uses for global superframe g.
TopologyPartition superframe_partition(const ReflectorPlan& rplan, const NodeSet& nodes, const TimeGrid& grid,
                                       std::size_t global_superframe, std::uint64_t seed);

// CSV: period,superframe,slot,node_i,node_j
void write_phased_array_plan(std::ostream& out, const PhasedArrayPlan& plan, const NodeSet& nodes);

}  // namespace cpd::pcpd
