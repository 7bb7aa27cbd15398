#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "cpd/core/types.hpp"

namespace cpd::eval {

struct DelaySamples {
  std::vector<long> delays;  // delivered bundles only
  std::size_t censored = 0;  // still undelivered when the horizon ends

  std::size_t generated() const { return delays.size() + censored; }
  double mean() const;  // NaN when nothing was delivered
};

// Bulk traffic: one bundle per (R-user, period) access. A bundle floods its
// RL component each period and is delivered once the component holds a GS.
// Delay counts periods, same-period delivery being 1.
DelaySamples r_delay(const ReflectorPlan& rplan, const NodeSet& nodes);

struct PDelay {
  DelaySamples gsat;   // always 0
  DelaySamples ugsat;
  DelaySamples puser;
};

// Small traffic: every satellite and P-user emits a bundle at the first slot
// of each superframe. Per slot a bundle crosses at most one PL, then spreads
// across RL components; it is delivered on reaching a grounded satellite. A
// bundle delivered during the k-th slot has delay k - 1.
PDelay p_delay(const PhasedArrayPlan& pplan, const ReflectorPlan& rplan, const NodeSet& nodes,
               const TimeGrid& grid);

// Distinct satellite partners per satellite per superframe (PL or RL up in
// the superframe), one entry per (superframe, satellite).
std::vector<int> ranging_partners(const PhasedArrayPlan& pplan, const ReflectorPlan& rplan, const NodeSet& nodes,
                                  const TimeGrid& grid);
double ranging_count(const PhasedArrayPlan& pplan, const ReflectorPlan& rplan, const NodeSet& nodes,
                     const TimeGrid& grid);

struct UtilizationComposition {
  double utilization = 0.0;       // engaged satellite slot-endpoints / (satellites x slots)
  double sat_sat_per_superframe = 0.0;
  double user_sat_per_superframe = 0.0;
};
UtilizationComposition utilization_and_composition(const PhasedArrayPlan& pplan, const NodeSet& nodes);

struct MetricReport {
  std::string scenario;
  std::string scheme;  // "<R-planner>+<P-planner>"
  double r_user_delay = 0.0;
  std::size_t r_delivered = 0, r_censored = 0;
  double ugsat_delay = 0.0;
  std::size_t ugsat_delivered = 0, ugsat_censored = 0;
  double puser_delay = 0.0;
  std::size_t puser_delivered = 0, puser_censored = 0;
  double ranging_links_per_sat = 0.0;
  double link_utilization = 0.0;
  double pl_sat_sat = 0.0;
  double pl_user_sat = 0.0;
  long long ground_deficit_total = 0;
};

MetricReport evaluate(const std::string& scenario, const ReflectorPlan& rplan, const PhasedArrayPlan& pplan,
                      const NodeSet& nodes, const TimeGrid& grid);

// CSV: scenario,scheme,metric,value  (fixed metric order, %.6f values)
void write_report_header(std::ostream& out);
void write_report_rows(std::ostream& out, const MetricReport& r);

}  // namespace cpd::eval
