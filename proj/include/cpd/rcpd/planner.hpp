#pragma once

#include <ostream>

#include "cpd/rcpd/model.hpp"
#include "cpd/rcpd/solver.hpp"

namespace cpd::rcpd {

struct HorizonStats {
  std::size_t windows = 0;
  std::size_t truncated_windows = 0;  // solves stopped by the time or node budget
  std::uint64_t nodes = 0;
};

// Rolling-horizon solve: windows of params.horizon periods overlapping by
// f - 1 periods, with the overlap pinned to the previous window's decisions.
ReflectorPlan plan_horizon(const VisibilitySet& vis, const NodeSet& nodes, const RcpdParams& params,
                           HorizonStats* stats = nullptr);

// Plan in the shape of a single model solve (used by tests and plan_horizon).
ReflectorPlan plan_from_solution(const IlpModel& model, const Solution& sol, const RcpdParams& params,
                                 std::size_t node_count);

// CSV: period,node_i,node_j,kind  (one row per active link)
void write_reflector_plan(std::ostream& out, const ReflectorPlan& plan, const NodeSet& nodes);
// CSV: period,ground_links,deficit
void write_deficits(std::ostream& out, const ReflectorPlan& plan, const NodeSet& nodes);

}  // namespace cpd::rcpd
