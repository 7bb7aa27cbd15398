#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "cpd/eval/metrics.hpp"
#include "cpd/pcpd/planner.hpp"
#include "support.hpp"

using namespace cpd;
using namespace cpd::eval;
using test::id;

namespace {

ReflectorPlan empty_plan(const NodeSet& nodes, std::size_t periods) {
  ReflectorPlan p;
  p.links.assign(periods, AdjacencyMatrix(nodes.size()));
  p.deficits.assign(periods, 0);
  return p;
}

PhasedArrayPlan empty_pplan(const TimeGrid& grid) {
  PhasedArrayPlan p;
  p.superframes_per_period = grid.superframes_per_period;
  p.superframes.assign(grid.superframe_count(), SuperframePlan{std::vector<Matching>(grid.slots_per_superframe())});
  return p;
}

}  // namespace

TEST_CASE("R-delay of a directly grounded user is one period") {
  const NodeSet nodes = test::make_nodes(1, 1, 0, 1);
  ReflectorPlan p = empty_plan(nodes, 1);
  p.links[0].set(id(nodes, "RU1"), id(nodes, "S1"), true);
  p.links[0].set(id(nodes, "S1"), id(nodes, "G1"), true);
  const DelaySamples d = r_delay(p, nodes);
  CHECK(d.delays == std::vector<long>{1});
  CHECK(d.censored == 0);
  CHECK(d.mean() == doctest::Approx(1.0));
}

TEST_CASE("R-delay waits for a later grounding and censors at the horizon") {
  const NodeSet nodes = test::make_nodes(2, 1, 0, 1);
  const NodeId s1 = id(nodes, "S1"), s2 = id(nodes, "S2"), u = id(nodes, "RU1"), g = id(nodes, "G1");
  ReflectorPlan p = empty_plan(nodes, 3);
  p.links[0].set(u, s1, true);
  p.links[1].set(s1, s2, true);  // data moves to S2
  p.links[2].set(s2, g, true);   // and lands with S2
  DelaySamples d = r_delay(p, nodes);
  CHECK(d.delays == std::vector<long>{3});

  p.links[2].set(s2, g, false);
  p.links[2].set(u, s2, true);
  d = r_delay(p, nodes);
  CHECK(d.delays.empty());
  CHECK(d.censored == 2);
  CHECK(d.generated() == 2);
  CHECK(std::isnan(d.mean()));
}

TEST_CASE("R-delay is two when the grounding comes one period later") {
  const NodeSet nodes = test::make_nodes(1, 1, 0, 1);
  ReflectorPlan p = empty_plan(nodes, 2);
  p.links[0].set(id(nodes, "RU1"), id(nodes, "S1"), true);
  p.links[1].set(id(nodes, "S1"), id(nodes, "G1"), true);
  CHECK(r_delay(p, nodes).delays == std::vector<long>{2});
}

TEST_CASE("users never relay reflector traffic") {
  const NodeSet nodes = test::make_nodes(2, 1, 0, 1);
  const NodeId s1 = id(nodes, "S1"), s2 = id(nodes, "S2"), u = id(nodes, "RU1"), g = id(nodes, "G1");
  ReflectorPlan p = empty_plan(nodes, 1);
  p.links[0].set(u, s1, true);
  p.links[0].set(u, s2, true);
  p.links[0].set(s2, g, true);
  const DelaySamples d = r_delay(p, nodes);
  CHECK(d.delays == std::vector<long>{1});
  CHECK(d.censored == 1);
}

TEST_CASE("P-delay over the sample topology") {
  // R-Topo S2-S3, S3-G1, S1-S4; S1 reaches S2 over a PL in the first slot.
  const NodeSet nodes = test::make_nodes(4, 0, 1, 1);
  const TimeGrid grid = test::small_grid(2, 4, 0, 3);
  const NodeId s1 = id(nodes, "S1"), s2 = id(nodes, "S2"), s3 = id(nodes, "S3"), s4 = id(nodes, "S4"),
               u = id(nodes, "PU1"), g = id(nodes, "G1");
  ReflectorPlan r = empty_plan(nodes, 2);
  for (AdjacencyMatrix& x : r.links) {
    x.set(s2, s3, true);
    x.set(s3, g, true);
    x.set(s1, s4, true);
  }
  PhasedArrayPlan p = empty_pplan(grid);
  for (SuperframePlan& sf : p.superframes) {
    sf.slots[0] = {NodePair(s1, s2)};
    sf.slots[1] = {NodePair(u, s4)};
  }
  const PDelay d = p_delay(p, r, nodes, grid);
  CHECK(d.gsat.delays == std::vector<long>(16, 0));
  CHECK(d.ugsat.delays == std::vector<long>(16, 0));
  CHECK(d.ugsat.censored == 0);
  // The user hands its bundle to S4 in the second slot, after S1-S2 is gone.
  CHECK(d.puser.delays.empty());
  CHECK(d.puser.censored == 8);

  for (SuperframePlan& sf : p.superframes) std::swap(sf.slots[0], sf.slots[1]);
  const PDelay e = p_delay(p, r, nodes, grid);
  CHECK(e.puser.delays == std::vector<long>(8, 1));
  CHECK(e.ugsat.delays == std::vector<long>(16, 1));
}

TEST_CASE("a bundle crosses at most one phased-array link per slot") {
  const NodeSet nodes = test::make_nodes(3, 0, 0, 1);
  const TimeGrid grid = test::small_grid(1, 1, 0, 3);
  ReflectorPlan r = empty_plan(nodes, 1);
  r.links[0].set(id(nodes, "S3"), id(nodes, "G1"), true);
  PhasedArrayPlan p = empty_pplan(grid);
  // S1-S2 then S2-S3: two hops, two slots.
  p.superframes[0].slots[0] = {NodePair(0, 1)};
  p.superframes[0].slots[1] = {NodePair(1, 2)};
  const PDelay d = p_delay(p, r, nodes, grid);
  CHECK(d.gsat.delays.size() == 1);
  CHECK(d.ugsat.delays == std::vector<long>{1, 1});
}

TEST_CASE("switching superframes only carry links kept from the previous period") {
  const NodeSet nodes = test::make_nodes(1, 0, 0, 1);
  const TimeGrid grid = test::small_grid(2, 4, 2, 2);
  ReflectorPlan r = empty_plan(nodes, 2);
  r.links[1].set(0, 1, true);
  const PDelay d = p_delay(empty_pplan(grid), r, nodes, grid);
  CHECK(d.gsat.delays.size() == 2);  // superframes 6 and 7
  CHECK(d.ugsat.censored == 6);
}

TEST_CASE("ranging counts distinct partners") {
  const NodeSet nodes = test::make_nodes(4, 0, 0, 0);
  const TimeGrid grid = test::small_grid(1, 1, 0, 3);
  const ReflectorPlan r = empty_plan(nodes, 1);
  PhasedArrayPlan p = empty_pplan(grid);
  p.superframes[0].slots = {{NodePair(0, 1), NodePair(2, 3)}, {NodePair(0, 2), NodePair(1, 3)},
                            {NodePair(0, 3), NodePair(1, 2)}};
  CHECK(ranging_count(p, r, nodes, grid) == doctest::Approx(3.0));

  p.superframes[0].slots = {{NodePair(0, 1)}, {NodePair(0, 1)}, {NodePair(0, 1)}};
  CHECK(ranging_partners(p, r, nodes, grid) == std::vector<int>{1, 1, 0, 0});

  ReflectorPlan with_rl = r;
  with_rl.links[0].set(2, 3, true);
  with_rl.links[0].set(0, 1, true);
  CHECK(ranging_partners(p, with_rl, nodes, grid) == std::vector<int>{1, 1, 1, 1});
}

TEST_CASE("utilization bounds and link composition") {
  const NodeSet nodes = test::make_nodes(2, 0, 2, 0);
  const TimeGrid grid = test::small_grid(1, 2, 0, 2);
  PhasedArrayPlan p = empty_pplan(grid);
  UtilizationComposition u = utilization_and_composition(p, nodes);
  CHECK(u.utilization == 0.0);
  for (SuperframePlan& sf : p.superframes)
    for (Matching& m : sf.slots) m = {NodePair(0, 2), NodePair(1, 3)};
  u = utilization_and_composition(p, nodes);
  CHECK(u.utilization == doctest::Approx(1.0));
  CHECK(u.user_sat_per_superframe == doctest::Approx(4.0));
  p.superframes[0].slots[0] = {NodePair(0, 1)};
  u = utilization_and_composition(p, nodes);
  CHECK(u.utilization == doctest::Approx(1.0));
  CHECK(u.sat_sat_per_superframe == doctest::Approx(0.5));
  CHECK(u.user_sat_per_superframe == doctest::Approx(3.0));
}

TEST_CASE("delay bookkeeping conserves bundles and removing RLs never helps") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const NodeSet nodes = test::make_nodes(2 + rng() % 4, 1 + rng() % 3, 1 + rng() % 4, 1);
    const TimeGrid grid = test::small_grid(3, 4, 1, 4);
    VisibilitySet vis = test::full_visibility(nodes, grid);
    ReflectorPlan r = empty_plan(nodes, 3);
    for (std::size_t m = 0; m < 3; ++m)
      for (const NodePair& p : vis.period[m].pairs())
        if (rng() % 3 == 0) r.links[m].set(p.a, p.b, true);
    const PhasedArrayPlan pp = pcpd::plan_phased_array(vis, r, nodes, grid, pcpd::WeightParams{}, 5);

    const PDelay d = p_delay(pp, r, nodes, grid);
    const std::size_t origins = grid.superframe_count() * (nodes.satellites().size() + nodes.p_users().size());
    CHECK(d.gsat.generated() + d.ugsat.generated() + d.puser.generated() == origins);
    std::size_t accesses = 0;
    for (const AdjacencyMatrix& x : r.links)
      for (NodeId u : nodes.r_users()) accesses += x.degree(u);
    const DelaySamples rd = r_delay(r, nodes);
    CHECK(rd.generated() == accesses);

    // Dropping a Sat-Sat RL can only delay R traffic.
    ReflectorPlan fewer = r;
    for (AdjacencyMatrix& x : fewer.links)
      for (const NodePair& p : x.pairs())
        if (nodes.is_satellite(p.a) && nodes.is_satellite(p.b)) {
          x.set(p.a, p.b, false);
          break;
        }
    const DelaySamples rf = r_delay(fewer, nodes);
    CHECK(rf.delays.size() <= rd.delays.size());
    long sum_r = 0, sum_f = 0;
    for (long v : rd.delays) sum_r += v;
    for (long v : rf.delays) sum_f += v;
    // Censored bundles count as one past the horizon.
    CHECK(sum_f + 4 * static_cast<long>(rf.censored) >= sum_r + 4 * static_cast<long>(rd.censored));
  }
}

TEST_CASE("report rows come in a fixed order") {
  const NodeSet nodes = test::make_nodes(1, 1, 1, 1);
  const TimeGrid grid = test::small_grid(1, 2, 0, 2);
  ReflectorPlan r = empty_plan(nodes, 1);
  r.links[0].set(0, id(nodes, "G1"), true);
  r.deficits = {1};
  const MetricReport rep = evaluate("unit", r, empty_pplan(grid), nodes, grid);
  CHECK(rep.ground_deficit_total == 1);
  std::ostringstream out;
  write_report_header(out);
  write_report_rows(out, rep);
  const std::string s = out.str();
  CHECK(s.rfind("scenario,scheme,metric,value\n", 0) == 0);
  CHECK(s.find("unit,") != std::string::npos);
  CHECK(s.find("r_user_delay_periods") < s.find("ground_deficit_total"));
}
