#include "cpd/pcpd/planner.hpp"

namespace cpd::pcpd {

std::vector<WeightedEdge> slot_edges(const NodeSet& nodes, const SuperframeContext& ctx, const TendencyState& st,
                                     const WeightParams& wp) {
  std::vector<WeightedEdge> edges;
  for (const NodePair& p : ctx.visibility->pairs()) {
    if (!phased_array_capable(nodes, p.a, p.b)) continue;
    std::int64_t w = 0;
    if (nodes.is_satellite(p.a) && nodes.is_satellite(p.b))
      w = sat_weight(p.a, p.b, *ctx.partition, *ctx.reflector_links, st, wp);
    else if (nodes.kind(p.b) == NodeKind::PUser)
      w = user_weight(p.b, p.a, st, wp);
    else
      w = user_weight(p.a, p.b, st, wp);
    edges.push_back({p.a, p.b, w});
  }
  return edges;
}

SuperframePlan step_superframe(const NodeSet& nodes, const SuperframeContext& ctx, const WeightParams& wp,
                               TendencyState* final_state) {
  if (ctx.slots == 0) throw ModelError("pcpd: a superframe needs at least one slot");
  TendencyState st(nodes, *ctx.visibility);
  SuperframePlan plan;
  plan.slots.reserve(ctx.slots);
  for (std::size_t t = 0; t < ctx.slots; ++t) {
    Matching m = max_weight_matching(nodes.size(), slot_edges(nodes, ctx, st, wp));
    st.commit(m, nodes, *ctx.partition);
    plan.slots.push_back(std::move(m));
  }
  if (final_state) *final_state = std::move(st);
  return plan;
}

TopologyPartition superframe_partition(const ReflectorPlan& rplan, const NodeSet& nodes, const TimeGrid& grid,
                                       std::size_t global_superframe, std::uint64_t seed) {
  const std::size_t m = global_superframe / grid.superframes_per_period;
  const std::size_t s = global_superframe % grid.superframes_per_period;
  return partition_topology(active_reflector_links(rplan, grid, m, s), nodes, draw_seed(seed, m, s));
}

PhasedArrayPlan plan_phased_array(const VisibilitySet& vis, const ReflectorPlan& rplan, const NodeSet& nodes,
                                  const TimeGrid& grid, const WeightParams& wp, std::uint64_t seed) {
  wp.validate();
  if (vis.superframe.size() != grid.superframe_count() || rplan.links.size() != grid.period_count)
    throw ModelError("pcpd: visibility, reflector plan and time grid disagree on the horizon");
  PhasedArrayPlan plan;
  plan.scheme = "P-CPD";
  plan.superframes_per_period = grid.superframes_per_period;
  plan.superframes.reserve(grid.superframe_count());
  for (std::size_t g = 0; g < grid.superframe_count(); ++g) {
    const std::size_t m = g / grid.superframes_per_period;
    const AdjacencyMatrix rl = active_reflector_links(rplan, grid, m, g % grid.superframes_per_period);
    const TopologyPartition part = superframe_partition(rplan, nodes, grid, g, seed);
    SuperframeContext ctx{&vis.superframe[g], &rl, &part, grid.slots_per_superframe()};
    plan.superframes.push_back(step_superframe(nodes, ctx, wp));
  }
  return plan;
}

void write_phased_array_plan(std::ostream& out, const PhasedArrayPlan& plan, const NodeSet& nodes) {
  out << "period,superframe,slot,node_i,node_j\n";
  const std::size_t per = plan.superframes_per_period == 0 ? 1 : plan.superframes_per_period;
  for (std::size_t g = 0; g < plan.superframes.size(); ++g)
    for (std::size_t t = 0; t < plan.superframes[g].slots.size(); ++t)
      for (const NodePair& p : plan.superframes[g].slots[t])
        out << g / per << ',' << g % per << ',' << t + 1 << ',' << nodes[p.a].name << ',' << nodes[p.b].name << '\n';
}

}  // namespace cpd::pcpd
