#include <doctest.h>

#include <map>
#include <random>
#include <set>
#include <sstream>

#include "cpd/core/partition.hpp"
#include "cpd/core/validate.hpp"
#include "cpd/pcpd/planner.hpp"
#include "cpd/pcpd/weights.hpp"
#include "support.hpp"

using namespace cpd;
using namespace cpd::pcpd;
using test::id;

namespace {

// Four satellites, one station and the R-Topo S2-S3, S3-G1, S1-S4:
// S2 and S3 are G-Sats, {S1, S4} is the only UG-Sat set.
struct Topo {
  NodeSet nodes;
  AdjacencyMatrix rl, pl;
  TopologyPartition part;

  explicit Topo(std::size_t p_users) : nodes(test::make_nodes(4, 0, p_users, 1)), rl(nodes.size()), pl(nodes.size()) {
    rl.set(id(nodes, "S2"), id(nodes, "S3"), true);
    rl.set(id(nodes, "S3"), id(nodes, "G1"), true);
    rl.set(id(nodes, "S1"), id(nodes, "S4"), true);
    part = partition_topology(rl, nodes, 3);
  }
  NodeId operator[](const std::string& name) const { return id(nodes, name); }
};

bool valid_matching(const Matching& m, const NodeSet& nodes, const AdjacencyMatrix& vis) {
  std::vector<int> used(nodes.size(), 0);
  for (const NodePair& p : m) {
    if (!vis(p.a, p.b) || !phased_array_capable(nodes, p.a, p.b)) return false;
    if (used[p.a]++ || used[p.b]++) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("partition of the sample topology") {
  const Topo t(0);
  CHECK(t.part.gsats == std::vector<NodeId>{t["S2"], t["S3"]});
  REQUIRE(t.part.ugsat_sets.size() == 1);
  CHECK(t.part.ugsat_sets[0] == std::vector<NodeId>{t["S1"], t["S4"]});
}

TEST_CASE("user weight cases") {
  Topo t(1);
  const NodeId u = t["PU1"];
  for (const char* s : {"S1", "S2", "S3"}) t.pl.set(u, t[s], true);
  WeightParams wp;
  TendencyState st(t.nodes, t.pl);
  CHECK(st.visible_satellites(u) == 3);

  SUBCASE("fresh user is C1") {
    CHECK(user_case(u, t["S1"], st, wp) == UserCase::C1);
    CHECK(user_weight(u, t["S1"], st, wp) == 4);
    st.set_access_tendency(u, 3);
    CHECK(user_weight(u, t["S1"], st, wp) == 12);
  }
  SUBCASE("repeat partner is C3, a new one stays C1") {
    st.commit({NodePair(u, t["S1"])}, t.nodes, t.part);
    CHECK(user_case(u, t["S1"], st, wp) == UserCase::C3);
    CHECK(user_weight(u, t["S1"], st, wp) == 1);
    CHECK(user_case(u, t["S2"], st, wp) == UserCase::C1);
    CHECK(user_weight(u, t["S2"], st, wp) == 3);
  }
  SUBCASE("after as many PLs as visible satellites the user is C2") {
    for (int k = 0; k < 3; ++k) st.commit({NodePair(u, t["S1"])}, t.nodes, t.part);
    CHECK(user_case(u, t["S1"], st, wp) == UserCase::C2);
    CHECK(user_weight(u, t["S1"], st, wp) == 1);
    wp.distinct_partner_mode = true;
    CHECK(user_case(u, t["S1"], st, wp) == UserCase::C3);
  }
  SUBCASE("quota met is C4") {
    for (int k = 0; k < 4; ++k) st.commit({NodePair(u, t["S1"])}, t.nodes, t.part);
    CHECK(user_case(u, t["S2"], st, wp) == UserCase::C4);
    CHECK(user_weight(u, t["S2"], st, wp) == 0);
  }
  SUBCASE("per-user quota override") {
    wp.required[u] = 1;
    st.commit({NodePair(u, t["S1"])}, t.nodes, t.part);
    CHECK(user_weight(u, t["S2"], st, wp) == 0);
  }
}

TEST_CASE("satellite weights") {
  const Topo t(0);
  const WeightParams wp;
  TendencyState st(t.nodes, t.pl);
  const NodeId rep = t.part.representatives.at(0);
  const NodeId other = rep == t["S1"] ? t["S4"] : t["S1"];

  CHECK(comm_weight(rep, t["S2"], t.part, st, wp) == 8);
  CHECK(comm_weight(t["S2"], rep, t.part, st, wp) == 8);
  CHECK(comm_weight(other, t["S2"], t.part, st, wp) == 0);
  CHECK(comm_weight(t["S2"], t["S3"], t.part, st, wp) == 0);
  CHECK(sat_weight(rep, t["S2"], t.part, t.rl, st, wp) == 38);
  CHECK(sat_weight(other, t["S2"], t.part, t.rl, st, wp) == 30);
  // RL-linked pairs gain nothing from ranging.
  CHECK(sat_weight(t["S2"], t["S3"], t.part, t.rl, st, wp) == 0);
  CHECK(sat_weight(t["S1"], t["S4"], t.part, t.rl, st, wp) == 0);

  st.set_ground_tendency(rep, 3);
  CHECK(comm_weight(rep, t["S3"], t.part, st, wp) == 24);
  st.set_pair_count(rep, t["S3"], 1);
  CHECK(ranging_weight(rep, t["S3"], t.rl, st, wp) == 0);
  CHECK(sat_weight(rep, t["S3"], t.part, t.rl, st, wp) == 24);
}

TEST_CASE("tendencies age and reset") {
  Topo t(2);
  const NodeId u1 = t["PU1"], u2 = t["PU2"];
  t.pl.set(u1, t["S2"], true);
  t.pl.set(u2, t["S2"], true);
  TendencyState st(t.nodes, t.pl);
  const NodeId s1 = t["S1"], s4 = t["S4"];

  st.commit({}, t.nodes, t.part);
  st.commit({NodePair(u1, t["S2"])}, t.nodes, t.part);
  CHECK(st.access_tendency(u1) == 1);
  CHECK(st.access_tendency(u2) == 3);
  CHECK(st.ground_tendency(s1) == 3);
  CHECK(st.ground_tendency(s4) == 3);
  // Grounding either member resets the whole UG-Sat set.
  st.commit({NodePair(s4, t["S3"])}, t.nodes, t.part);
  CHECK(st.ground_tendency(s1) == 1);
  CHECK(st.ground_tendency(s4) == 1);
  CHECK(st.ground_tendency(t["S2"]) == 1);
}

TEST_CASE("two slots ground every satellite and serve six users") {
  Topo t(6);
  t.pl.set(t["S1"], t["S2"], true);
  for (const auto& [u, s] : std::vector<std::pair<const char*, const char*>>{
           {"PU1", "S3"}, {"PU2", "S3"}, {"PU3", "S4"}, {"PU4", "S4"}, {"PU5", "S1"}, {"PU6", "S2"}})
    t.pl.set(t[u], t[s], true);
  const SuperframeContext ctx{&t.pl, &t.rl, &t.part, 2};
  const SuperframePlan plan = step_superframe(t.nodes, ctx, WeightParams{});
  REQUIRE(plan.slots.size() == 2);
  CHECK(plan.slots[0].size() == 3);
  CHECK(std::count(plan.slots[0].begin(), plan.slots[0].end(), NodePair(t["S1"], t["S2"])) == 1);

  std::set<NodeId> served;
  for (const Matching& m : plan.slots) {
    CHECK(valid_matching(m, t.nodes, t.pl));
    for (const NodePair& p : m)
      for (NodeId x : {p.a, p.b})
        if (t.nodes.kind(x) == NodeKind::PUser) served.insert(x);
  }
  CHECK(served.size() == 6);
}

TEST_CASE("complete graph of four satellites, one slot, no users") {
  const NodeSet nodes = test::make_nodes(4, 0, 0, 0);
  AdjacencyMatrix pl(4), rl(4);
  for (NodeId i = 0; i < 4; ++i)
    for (NodeId j = i + 1; j < 4; ++j) pl.set(i, j, true);
  const TopologyPartition part = partition_topology(rl, nodes, 1);
  const SuperframeContext ctx{&pl, &rl, &part, 1};
  const WeightParams wp;
  TendencyState st(nodes, pl);
  const auto edges = slot_edges(nodes, ctx, st, wp);
  const SuperframePlan plan = step_superframe(nodes, ctx, wp);
  REQUIRE(plan.slots.size() == 1);
  CHECK(plan.slots[0].size() == 2);
  CHECK(matching_weight(plan.slots[0], edges) == 60);
}

TEST_CASE("a zero quota keeps users off the phased array") {
  const NodeSet nodes = test::make_nodes(2, 0, 3, 0);
  AdjacencyMatrix pl(nodes.size()), rl(nodes.size());
  for (NodeId i = 0; i < nodes.size(); ++i)
    for (NodeId j = i + 1; j < nodes.size(); ++j)
      if (phased_array_capable(nodes, i, j)) pl.set(i, j, true);
  const TopologyPartition part = partition_topology(rl, nodes, 1);
  WeightParams wp;
  wp.default_required = 0;
  const SuperframePlan plan = step_superframe(nodes, SuperframeContext{&pl, &rl, &part, 30}, wp);
  for (const Matching& m : plan.slots)
    for (const NodePair& p : m) CHECK(nodes.is_satellite(p.b));
}

TEST_CASE("random superframes respect quotas, visibility and RL exemption") {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t sats = 2 + rng() % 5, users = rng() % 7;
    const NodeSet nodes = test::make_nodes(sats, 0, users, 1 + rng() % 2);
    const std::size_t n = nodes.size();
    AdjacencyMatrix pl(n), rl(n);
    for (NodeId i = 0; i < n; ++i)
      for (NodeId j = i + 1; j < n; ++j) {
        if (phased_array_capable(nodes, i, j) && rng() % 3 != 0) pl.set(i, j, true);
        if (reflector_capable(nodes, i, j) && nodes.kind(i) == NodeKind::Satellite && rng() % 4 == 0)
          rl.set(i, j, true);
      }
    const TopologyPartition part = partition_topology(rl, nodes, rng());
    WeightParams wp;
    wp.default_required = static_cast<int>(rng() % 5);
    const std::size_t slots = 1 + rng() % 30;
    TendencyState final_state;
    const SuperframePlan plan = step_superframe(nodes, SuperframeContext{&pl, &rl, &part, slots}, wp, &final_state);
    INFO("trial " << trial);
    REQUIRE(plan.slots.size() == slots);
    std::map<NodePair, int> sat_pairs;
    for (const Matching& m : plan.slots) {
      CHECK(valid_matching(m, nodes, pl));
      for (const NodePair& p : m) {
        if (!(nodes.is_satellite(p.a) && nodes.is_satellite(p.b))) continue;
        CHECK_FALSE(rl(p.a, p.b));
        ++sat_pairs[p];
      }
    }
    for (NodeId u : nodes.p_users()) CHECK(final_state.user_total(u) <= wp.default_required);
    // Only a representative grounding through a G-Sat can reuse a pair.
    for (const auto& [p, count] : sat_pairs)
      if (count > 1)
        CHECK(((part.is_representative(p.a) && part.is_gsat(p.b)) ||
               (part.is_representative(p.b) && part.is_gsat(p.a))));
  }
}

TEST_CASE("phased-array plan over a grid") {
  const NodeSet nodes = test::make_nodes(3, 1, 4, 1);
  const TimeGrid grid = test::small_grid(2, 4, 1, 5);
  const VisibilitySet vis = test::full_visibility(nodes, grid);
  ReflectorPlan rplan;
  rplan.links.assign(2, AdjacencyMatrix(nodes.size()));
  rplan.links[0].set(0, 1, true);
  rplan.links[1].set(0, 1, true);
  rplan.links[1].set(1, id(nodes, "G1"), true);
  const PhasedArrayPlan a = plan_phased_array(vis, rplan, nodes, grid, WeightParams{}, 9);
  const PhasedArrayPlan b = plan_phased_array(vis, rplan, nodes, grid, WeightParams{}, 9);
  REQUIRE(a.superframes.size() == 8);
  for (const SuperframePlan& sf : a.superframes) CHECK(sf.slots.size() == 5);
  std::ostringstream ta, tb;
  write_phased_array_plan(ta, a, nodes);
  write_phased_array_plan(tb, b, nodes);
  CHECK(ta.str() == tb.str());
  CHECK(ta.str().rfind("period,superframe,slot,node_i,node_j\n", 0) == 0);
  CHECK(validate_phased_array_plan(a, vis, nodes, grid).empty());

  WeightParams bad;
  bad.ranging = 0;
  CHECK_THROWS_AS(plan_phased_array(vis, rplan, nodes, grid, bad, 9), ModelError);
}
