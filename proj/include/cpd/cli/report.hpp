#pragma once

#include <istream>
#include <ostream>
#include <string>

#include "cpd/cli/pipeline.hpp"

namespace cpd::cli {

// CSV: layer,index,node_i,node_j  (layer is "period" or "superframe")
void write_visibility(std::ostream& out, const VisibilitySet& vis, const NodeSet& nodes);

// Plans, deficits and report.csv of one run, under `dir`.
void write_run(const RunResult& run, const std::string& dir);

// Cells under dir/<label>/ plus dir/sweep_report.csv.
void write_sweep(const std::vector<SweepCell>& cells, const std::vector<RunResult>& runs, const std::string& dir);

// Readers for the plan exports, used by `evaluate`.
ReflectorPlan read_reflector_plan(std::istream& in, const NodeSet& nodes, const TimeGrid& grid,
                                  const ReflectorParams& params, const std::string& scheme);
PhasedArrayPlan read_phased_array_plan(std::istream& in, const NodeSet& nodes, const TimeGrid& grid,
                                       const std::string& scheme);

std::string file_tag(const std::string& scheme);

}  // namespace cpd::cli
