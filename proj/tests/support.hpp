#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cpd/core/types.hpp"
#include "cpd/core/validate.hpp"
#include "cpd/pcpd/matching.hpp"
#include "cpd/rcpd/model.hpp"

namespace cpd::test {

// Nodes named S1.., RU1.., PU1.., G1.. in kind order.
inline NodeSet make_nodes(std::size_t sats, std::size_t r_users, std::size_t p_users, std::size_t gss,
                          int terminals = 2) {
  std::vector<Node> v;
  for (std::size_t k = 1; k <= sats; ++k) v.push_back(Node::satellite("S" + std::to_string(k), terminals));
  for (std::size_t k = 1; k <= r_users; ++k) v.push_back(Node::r_user("RU" + std::to_string(k)));
  for (std::size_t k = 1; k <= p_users; ++k) v.push_back(Node::p_user("PU" + std::to_string(k)));
  for (std::size_t k = 1; k <= gss; ++k) v.push_back(Node::ground_station("G" + std::to_string(k)));
  return NodeSet(std::move(v));
}

inline NodeId id(const NodeSet& nodes, const std::string& name) { return nodes.find(name).value(); }

inline TimeGrid small_grid(std::size_t periods, std::size_t superframes = 12, std::size_t switching = 2,
                           std::size_t slots = 30) {
  TimeGrid g;
  g.period_count = periods;
  g.superframes_per_period = superframes;
  g.switching_superframes = switching;
  g.slot_length = std::chrono::seconds(10);
  g.period_length = std::chrono::seconds(10 * slots * superframes);
  return g;
}

// Every link-capable pair visible in every layer.
inline VisibilitySet full_visibility(const NodeSet& nodes, const TimeGrid& grid) {
  const std::size_t n = nodes.size();
  AdjacencyMatrix rl(n), pl(n);
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j) {
      if (reflector_capable(nodes, i, j)) rl.set(i, j, true);
      if (phased_array_capable(nodes, i, j)) pl.set(i, j, true);
    }
  VisibilitySet vis;
  vis.period.assign(grid.period_count, rl);
  vis.superframe.assign(grid.superframe_count(), pl);
  return vis;
}

// Exhaustive maximum-weight matching over edges with positive weight.
inline std::int64_t brute_force_matching(std::size_t n, const std::vector<pcpd::WeightedEdge>& edges) {
  std::vector<std::vector<std::int64_t>> w(n, std::vector<std::int64_t>(n, 0));
  for (const auto& e : edges) {
    w[e.u][e.v] = std::max(w[e.u][e.v], e.weight);
    w[e.v][e.u] = w[e.u][e.v];
  }
  std::vector<char> used(n, 0);
  std::function<std::int64_t(std::size_t)> best = [&](std::size_t i) -> std::int64_t {
    while (i < n && used[i]) ++i;
    if (i >= n) return 0;
    used[i] = 1;
    std::int64_t b = best(i + 1);
    for (std::size_t j = i + 1; j < n; ++j) {
      if (used[j] || w[i][j] <= 0) continue;
      used[j] = 1;
      b = std::max(b, w[i][j] + best(i + 1));
      used[j] = 0;
    }
    used[i] = 0;
    return b;
  };
  return best(0);
}

struct IlpOracle {
  bool feasible = false;
  long long objective = std::numeric_limits<long long>::min();
  std::vector<std::uint8_t> values;  // first optimum in 1-first lexicographic order
};

// Enumerates every assignment of the free variables.
inline IlpOracle enumerate_ilp(const rcpd::IlpModel& model) {
  IlpOracle out;
  std::vector<std::size_t> free;
  std::vector<std::uint8_t> v(model.vars.size(), 0);
  for (std::size_t k = 0; k < model.vars.size(); ++k) {
    if (model.fixed[k] < 0)
      free.push_back(k);
    else
      v[k] = static_cast<std::uint8_t>(model.fixed[k]);
  }
  const std::size_t f = free.size();
  // Descending counter with free[0] as the most significant bit visits
  // assignments in the order the solver's 1-first search does.
  for (std::uint64_t c = (std::uint64_t{1} << f); c-- > 0;) {
    for (std::size_t q = 0; q < f; ++q) v[free[q]] = static_cast<std::uint8_t>((c >> (f - 1 - q)) & 1);
    if (!model.feasible(v)) continue;
    const long long obj = model.objective(v);
    if (!out.feasible || obj > out.objective) {
      out.feasible = true;
      out.objective = obj;
      out.values = v;
    }
  }
  return out;
}

// Objective of a stitched plan over the whole horizon: ISLs - P * deficits.
inline long long plan_objective(const ReflectorPlan& plan, const NodeSet& nodes) {
  long long obj = 0;
  for (std::size_t m = 0; m < plan.links.size(); ++m) {
    int ground = 0;
    for (const NodePair& p : plan.links[m].pairs()) {
      if (nodes.is_satellite(p.a) && nodes.is_satellite(p.b)) ++obj;
      if (nodes.kind(p.b) == NodeKind::GroundStation) ++ground;
    }
    obj -= plan.params.penalty * std::max(0, plan.params.ground_links - ground);
  }
  return obj;
}

inline VisibilitySet periods_only(const NodeSet& nodes, std::size_t periods) {
  VisibilitySet vis;
  vis.period.assign(periods, AdjacencyMatrix(nodes.size()));
  return vis;
}

inline rcpd::RcpdParams params_with(int f, int lg, std::size_t horizon = 6) {
  rcpd::RcpdParams p;
  p.access_window = f;
  p.ground_links = lg;
  p.horizon = horizon;
  return p;
}

struct RandomInstance {
  NodeSet nodes;
  VisibilitySet vis;
  rcpd::RcpdParams params;
};

// Small random instance whose model has between 1 and 20 variables.
inline RandomInstance random_instance(std::mt19937_64& rng) {
  for (;;) {
    RandomInstance in;
    const std::size_t sats = 2 + rng() % 3, users = rng() % 3, gss = rng() % 3;
    in.nodes = make_nodes(sats, users, 0, gss, 1 + static_cast<int>(rng() % 2));
    const std::size_t periods = 1 + rng() % 3;
    in.vis = periods_only(in.nodes, periods);
    const unsigned density = 2 + rng() % 5;
    for (auto& y : in.vis.period)
      for (NodeId i = 0; i < in.nodes.size(); ++i)
        for (NodeId j = i + 1; j < in.nodes.size(); ++j)
          if (reflector_capable(in.nodes, i, j) && rng() % 8 < density) y.set(i, j, true);
    in.params = params_with(1 + static_cast<int>(rng() % 2), static_cast<int>(rng() % 3));
    in.params.terminals_per_satellite = in.nodes[0].reflector_terminals.value();
    in.params.access_window = std::min<int>(in.params.access_window, static_cast<int>(periods));
    const rcpd::IlpModel m = rcpd::build_model(in.vis, in.nodes, in.params, {0, periods});
    if (!m.vars.empty() && m.vars.size() <= 20) return in;
  }
}

// Violations as text, empty when the plan is admissible.
inline std::string violations(const ReflectorPlan& plan, const VisibilitySet& vis, const NodeSet& nodes,
                              bool enforce_access = true) {
  std::string out;
  for (const Violation& v : validate_reflector_plan(plan, vis, nodes, enforce_access))
    out += std::string(to_string(v.constraint)) + " period " + std::to_string(v.period) + ": " + v.detail + "\n";
  return out;
}

}  // namespace cpd::test
