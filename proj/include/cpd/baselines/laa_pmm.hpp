#pragma once

#include "cpd/core/types.hpp"

namespace cpd::baselines {

// Terminal-utilization reflector planner. Per period: attach up to L_G
// satellite-GS links greedily (least recently attached satellite first), then
// take a maximum b-matching over the remaining terminals in which every
// served R-user outweighs any set of inter-satellite links. No access-window
// or penalty logic.
ReflectorPlan laa_pmm_plan(const VisibilitySet& vis, const NodeSet& nodes, const ReflectorParams& params);

}  // namespace cpd::baselines
