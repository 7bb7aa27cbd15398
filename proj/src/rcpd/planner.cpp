#include "cpd/rcpd/planner.hpp"

#include <algorithm>

namespace cpd::rcpd {

ReflectorPlan plan_from_solution(const IlpModel& model, const Solution& sol, const RcpdParams& params,
                                 std::size_t node_count) {
  ReflectorPlan plan;
  plan.scheme = "R-CPD";
  plan.params = params.reflector();
  plan.links.assign(model.period_count, AdjacencyMatrix(node_count));
  for (std::size_t k = 0; k < model.vars.size(); ++k)
    if (sol.values[k]) plan.links[model.vars[k].period].set(model.vars[k].a, model.vars[k].b, true);
  plan.deficits = sol.deficits;
  plan.waived_windows = model.waived;
  plan.proven_optimal = sol.optimal;
  return plan;
}

namespace {

bool stranded_user(const VisibilitySet& vis, const NodeSet& nodes, const IlpModel& model, const Solution& sol,
                   NodeId user, int access_window) {
  const std::size_t f = static_cast<std::size_t>(access_window);
  const std::size_t count = model.period_count, end = model.first_period + count;
  for (std::size_t first = count >= f ? count - f + 1 : 0; first < count; ++first) {
    if (model.first_period + first + f > vis.period.size()) break;
    bool served = false;
    for (std::size_t k = model.period_begin[first]; k < model.vars.size() && !served; ++k)
      served = sol.values[k] && model.vars[k].kind == VarKind::SatUser && model.vars[k].b == user;
    if (served) continue;
    bool visible = false;
    for (std::size_t m = end; m < model.first_period + first + f && !visible; ++m)
      for (NodeId s : nodes.satellites()) visible = visible || vis.period[m](user, s);
    if (!visible) return true;
  }
  return false;
}

}  // namespace

ReflectorPlan plan_horizon(const VisibilitySet& vis, const NodeSet& nodes, const RcpdParams& params,
                           HorizonStats* stats) {
  params.validate(nodes);
  const std::size_t total = vis.period.size();
  if (total == 0) throw ModelError("rcpd: visibility has no periods");

  ReflectorPlan plan;
  plan.scheme = "R-CPD";
  plan.params = params.reflector();
  plan.links.assign(total, AdjacencyMatrix(nodes.size()));
  plan.deficits.assign(total, 0);
  plan.waived_windows = params.soft_access ? starved_windows(vis, nodes, params.access_window)
                                           : std::vector<WaivedWindow>{};
  if (!params.soft_access) {
    const auto starved = starved_windows(vis, nodes, params.access_window);
    if (!starved.empty()) {
      // build_model formats the diagnostic for the first failing window.
      build_model(vis, nodes, params, {starved.front().first_period,
                                       static_cast<std::size_t>(params.access_window)});
    }
  }

  const std::size_t overlap = static_cast<std::size_t>(params.access_window - 1);
  HorizonStats local;
  std::size_t first = 0;
  while (true) {
    const std::size_t count = std::min(params.horizon, total - first);
    IlpModel model = build_model(vis, nodes, params, {first, count});
    if (first > 0)
      for (std::size_t lm = 0; lm < std::min(overlap, count); ++lm) fix_period(model, lm, plan.links[first + lm]);
    Solution sol = solve(model, params);
    if (first + count < total && overlap > 0) {
      // Users the next window could no longer serve: no access in the periods
      // it inherits and nothing visible in the periods it adds.
      IlpModel tightened = model;
      bool stranded = false;
      for (NodeId u : nodes.r_users())
        if (stranded_user(vis, nodes, model, sol, u, params.access_window)) {
          add_tail_rows(tightened, u, params.access_window);
          stranded = true;
        }
      if (stranded) {
        try {
          Solution retry = solve(tightened, params);
          local.nodes += sol.nodes;
          sol = std::move(retry);
          model = std::move(tightened);
        } catch (const InfeasibleError&) {
        }
      }
    }
    ++local.windows;
    local.nodes += sol.nodes;
    if (!sol.optimal) {
      ++local.truncated_windows;
      plan.proven_optimal = false;
    }
    const ReflectorPlan part = plan_from_solution(model, sol, params, nodes.size());
    for (std::size_t lm = 0; lm < count; ++lm) {
      plan.links[first + lm] = part.links[lm];
      plan.deficits[first + lm] = part.deficits[lm];
    }
    if (first + count >= total) break;
    first += count - overlap;
  }
  if (stats) *stats = local;
  return plan;
}

void write_reflector_plan(std::ostream& out, const ReflectorPlan& plan, const NodeSet& nodes) {
  out << "period,node_i,node_j,kind\n";
  for (std::size_t m = 0; m < plan.links.size(); ++m)
    for (const NodePair& p : plan.links[m].pairs())
      out << m << ',' << nodes[p.a].name << ',' << nodes[p.b].name << ',' << to_string(nodes.kind(p.a)) << '-'
          << to_string(nodes.kind(p.b)) << '\n';
}

void write_deficits(std::ostream& out, const ReflectorPlan& plan, const NodeSet& nodes) {
  out << "period,ground_links,deficit\n";
  for (std::size_t m = 0; m < plan.links.size(); ++m) {
    int ground = 0;
    for (NodeId s : nodes.satellites())
      for (NodeId g : nodes.ground_stations()) ground += plan.links[m](s, g) ? 1 : 0;
    out << m << ',' << ground << ',' << plan.deficits.at(m) << '\n';
  }
}

}  // namespace cpd::rcpd
