#pragma once

#include <cstdint>

#include "cpd/core/types.hpp"
#include "cpd/pcpd/weights.hpp"

namespace cpd::baselines {

struct BaselineConfig {
  std::int64_t fairness_gain = 1;
  std::uint64_t seed = 0;

  void validate() const;  // throws ModelError
};

// One superframe of fairness-aged matchings. Every visible pair weighs
// fairness_gain x (slots since it was last matched, starting at 1); a user's
// edges drop to 0 once it has its quota of PLs. Reflector links and the
// G-Sat partition are never consulted.
SuperframePlan dfcp_step(const NodeSet& nodes, const AdjacencyMatrix& visibility, std::size_t slots,
                         const pcpd::WeightParams& wp, const BaselineConfig& config);

PhasedArrayPlan dfcp_plan(const VisibilitySet& vis, const NodeSet& nodes, const TimeGrid& grid,
                          const pcpd::WeightParams& wp, const BaselineConfig& config);

}  // namespace cpd::baselines
