#include "cpd/baselines/dfcp.hpp"

#include "cpd/pcpd/matching.hpp"

namespace cpd::baselines {

void BaselineConfig::validate() const {
  if (fairness_gain <= 0) throw ModelError("dfcp: fairness_gain must be positive");
}

SuperframePlan dfcp_step(const NodeSet& nodes, const AdjacencyMatrix& visibility, std::size_t slots,
                         const pcpd::WeightParams& wp, const BaselineConfig& config) {
  std::vector<NodePair> pairs;
  for (const NodePair& p : visibility.pairs())
    if (phased_array_capable(nodes, p.a, p.b)) pairs.push_back(p);
  std::vector<std::int64_t> age(pairs.size(), 1);
  std::vector<int> served(nodes.size(), 0);

  SuperframePlan plan;
  for (std::size_t t = 0; t < slots; ++t) {
    std::vector<pcpd::WeightedEdge> edges;
    edges.reserve(pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const NodePair& p = pairs[k];
      bool quota_met = false;
      for (NodeId x : {p.a, p.b})
        if (nodes.kind(x) == NodeKind::PUser && served[x] >= wp.required_for(x)) quota_met = true;
      edges.push_back({p.a, p.b, quota_met ? 0 : config.fairness_gain * age[k]});
    }
    Matching m = pcpd::max_weight_matching(nodes.size(), edges);
    std::size_t cursor = 0;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      while (cursor < m.size() && m[cursor] < pairs[k]) ++cursor;
      if (cursor < m.size() && m[cursor] == pairs[k]) {
        age[k] = 1;
        for (NodeId x : {pairs[k].a, pairs[k].b})
          if (nodes.kind(x) == NodeKind::PUser) ++served[x];
      } else {
        ++age[k];
      }
    }
    plan.slots.push_back(std::move(m));
  }
  return plan;
}

PhasedArrayPlan dfcp_plan(const VisibilitySet& vis, const NodeSet& nodes, const TimeGrid& grid,
                          const pcpd::WeightParams& wp, const BaselineConfig& config) {
  config.validate();
  wp.validate();
  if (vis.superframe.size() != grid.superframe_count())
    throw ModelError("dfcp: visibility and time grid disagree on the horizon");
  PhasedArrayPlan plan;
  plan.scheme = "DFCP";
  plan.superframes_per_period = grid.superframes_per_period;
  for (const AdjacencyMatrix& layer : vis.superframe)
    plan.superframes.push_back(dfcp_step(nodes, layer, grid.slots_per_superframe(), wp, config));
  return plan;
}

}  // namespace cpd::baselines
