#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cpd/cli/scenario.hpp"
#include "cpd/core/validate.hpp"
#include "cpd/eval/metrics.hpp"
#include "cpd/rcpd/planner.hpp"

namespace cpd::cli {

// Geometry, or the scenario's trace file when one is given.
VisibilitySet scenario_visibility(const Scenario& s, const NodeSet& nodes);

ReflectorPlan make_reflector_plan(const std::string& scheme, const Scenario& s, const NodeSet& nodes,
                                  const VisibilitySet& vis, rcpd::HorizonStats* stats = nullptr);
PhasedArrayPlan make_phased_plan(const std::string& scheme, const Scenario& s, const NodeSet& nodes,
                                 const VisibilitySet& vis, const ReflectorPlan& rplan);

// Throws std::logic_error listing the violations when a planner emitted an
// invalid plan.
void check_reflector_plan(const ReflectorPlan& plan, const VisibilitySet& vis, const NodeSet& nodes);
void check_phased_plan(const PhasedArrayPlan& plan, const VisibilitySet& vis, const NodeSet& nodes,
                       const TimeGrid& grid);

struct SchemeResult {
  SchemePair schemes;
  std::size_t rplan_index = 0;  // into RunResult::reflector_plans
  PhasedArrayPlan pplan;
  eval::MetricReport report;
};

struct RunResult {
  NodeSet nodes;
  VisibilitySet vis;
  std::vector<std::pair<std::string, ReflectorPlan>> reflector_plans;
  std::vector<SchemeResult> results;
};

// Visibility, then every scheme pair in the scenario's matrix.
RunResult run_scenario(const Scenario& s);

// One scenario per point of the sweep grid (unset axes keep the base value).
struct SweepCell {
  std::string label;
  Scenario scenario;
};
std::vector<SweepCell> sweep_cells(const Scenario& base);

// Runs the cells on up to `jobs` threads; results come back in cell order.
std::vector<RunResult> run_cells(const std::vector<SweepCell>& cells, unsigned jobs);

}  // namespace cpd::cli
