#include <doctest.h>

#include <random>
#include <set>

#include "cpd/core/partition.hpp"
#include "cpd/core/validate.hpp"
#include "support.hpp"

using namespace cpd;
using cpd::test::id;
using cpd::test::make_nodes;

TEST_CASE("node inventory is kind ordered with dense ids") {
  std::vector<Node> v{Node::ground_station("G"), Node::p_user("P"), Node::satellite("S", 2), Node::r_user("R")};
  const NodeSet nodes(v);
  REQUIRE(nodes.size() == 4);
  CHECK(nodes[0].name == "S");
  CHECK(nodes[1].name == "R");
  CHECK(nodes[2].name == "P");
  CHECK(nodes[3].name == "G");
  CHECK(nodes.satellites().size() == 1);
  CHECK(nodes.find("P") == NodeId{2});
  CHECK_FALSE(nodes.find("nope").has_value());
}

TEST_CASE("node inventory rejects bad terminals and duplicates") {
  CHECK_THROWS_AS(NodeSet({Node::satellite("S", 2), Node::satellite("S", 2)}), ModelError);
  CHECK_THROWS_AS(NodeSet({Node::satellite("S", 0)}), ModelError);
  Node bad = Node::r_user("R");
  bad.has_phased_array = true;
  CHECK_THROWS_AS(NodeSet({bad}), ModelError);
  Node gs = Node::ground_station("G");
  gs.has_phased_array = true;
  CHECK_THROWS_AS(NodeSet({gs}), ModelError);
}

TEST_CASE("time grid derives slots per superframe") {
  TimeGrid g;
  g.period_count = 3;
  CHECK_NOTHROW(g.validate());
  CHECK(g.slots_per_superframe() == 30);
  CHECK(g.superframe_count() == 36);
  CHECK(g.total_slots() == 1080);

  TimeGrid bad = g;
  bad.switching_superframes = 12;
  CHECK_THROWS_AS(bad.validate(), ModelError);
  bad = g;
  bad.slot_length = std::chrono::seconds(0);
  CHECK_THROWS_AS(bad.validate(), ModelError);
  bad = g;
  bad.slot_length = std::chrono::seconds(7);
  CHECK_THROWS_AS(bad.validate(), ModelError);
}

TEST_CASE("adjacency matrix is symmetric through set") {
  AdjacencyMatrix a(4);
  a.set(2, 1, true);
  a.set(0, 3, true);
  CHECK(a(1, 2));
  CHECK(a(2, 1));
  CHECK(a.degree(1) == 1);
  const auto p = a.pairs();
  REQUIRE(p.size() == 2);
  CHECK(p[0] == NodePair(0, 3));
  CHECK(p[1] == NodePair(1, 2));
}

TEST_CASE("link capability by node kind") {
  const NodeSet nodes = make_nodes(2, 1, 1, 1);
  const NodeId s1 = id(nodes, "S1"), s2 = id(nodes, "S2"), ru = id(nodes, "RU1"), pu = id(nodes, "PU1"),
               g = id(nodes, "G1");
  CHECK(reflector_capable(nodes, s1, s2));
  CHECK(reflector_capable(nodes, s1, ru));
  CHECK(reflector_capable(nodes, g, s2));
  CHECK_FALSE(reflector_capable(nodes, s1, pu));
  CHECK_FALSE(reflector_capable(nodes, ru, g));
  CHECK(phased_array_capable(nodes, s1, s2));
  CHECK(phased_array_capable(nodes, pu, s2));
  CHECK_FALSE(phased_array_capable(nodes, s1, ru));
  CHECK_FALSE(phased_array_capable(nodes, s1, g));
}

TEST_CASE("switching superframes keep only links carried over") {
  const NodeSet nodes = make_nodes(3, 0, 0, 1);
  const TimeGrid grid = test::small_grid(2);
  ReflectorPlan plan;
  plan.links.assign(2, AdjacencyMatrix(nodes.size()));
  plan.links[0].set(0, 1, true);
  plan.links[1].set(0, 1, true);
  plan.links[1].set(1, 2, true);
  CHECK(active_reflector_links(plan, grid, 0, 0).pairs().empty());
  CHECK(active_reflector_links(plan, grid, 0, 2) == plan.links[0]);
  const auto kept = active_reflector_links(plan, grid, 1, 1);
  CHECK(kept(0, 1));
  CHECK_FALSE(kept(1, 2));
  CHECK(active_reflector_links(plan, grid, 1, 2) == plan.links[1]);
}

TEST_CASE("partition of the two-component example topology") {
  const NodeSet nodes = make_nodes(4, 0, 0, 1);
  AdjacencyMatrix x(nodes.size());
  x.set(id(nodes, "S2"), id(nodes, "S3"), true);
  x.set(id(nodes, "S3"), id(nodes, "G1"), true);
  x.set(id(nodes, "S1"), id(nodes, "S4"), true);
  const TopologyPartition p = partition_topology(x, nodes, 7);
  CHECK(p.gsats == std::vector<NodeId>{id(nodes, "S2"), id(nodes, "S3")});
  REQUIRE(p.ugsat_sets.size() == 1);
  CHECK(p.ugsat_sets[0] == std::vector<NodeId>{id(nodes, "S1"), id(nodes, "S4")});
  REQUIRE(p.representatives.size() == 1);
  const NodeId rep = p.representatives[0];
  CHECK((rep == id(nodes, "S1") || rep == id(nodes, "S4")));
  CHECK(p.is_representative(rep));
}

TEST_CASE("partition without links gives singletons") {
  const NodeSet nodes = make_nodes(4, 0, 0, 1);
  const TopologyPartition p = partition_topology(AdjacencyMatrix(nodes.size()), nodes, 1);
  CHECK(p.gsats.empty());
  REQUIRE(p.ugsat_sets.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(p.ugsat_sets[k] == std::vector<NodeId>{static_cast<NodeId>(k)});
    CHECK(p.representatives[k] == static_cast<NodeId>(k));
  }
}

TEST_CASE("partition follows chains to the ground") {
  const NodeSet nodes = make_nodes(3, 0, 0, 1);
  AdjacencyMatrix x(nodes.size());
  x.set(0, 1, true);
  x.set(1, 2, true);
  x.set(2, id(nodes, "G1"), true);
  const TopologyPartition p = partition_topology(x, nodes, 3);
  CHECK(p.gsats == std::vector<NodeId>{0, 1, 2});
  CHECK(p.ugsat_sets.empty());
}

TEST_CASE("user links never join components") {
  const NodeSet nodes = make_nodes(2, 1, 0, 1);
  AdjacencyMatrix x(nodes.size());
  const NodeId ru = id(nodes, "RU1");
  x.set(0, ru, true);
  x.set(1, ru, true);
  const TopologyPartition p = partition_topology(x, nodes, 3);
  CHECK(p.ugsat_sets.size() == 2);
}

TEST_CASE("partition property: every satellite lands in exactly one class") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const NodeSet nodes = make_nodes(6, 1, 0, 2);
    AdjacencyMatrix x(nodes.size());
    for (NodeId i = 0; i < nodes.size(); ++i)
      for (NodeId j = i + 1; j < nodes.size(); ++j)
        if (reflector_capable(nodes, i, j) && rng() % 4 == 0) x.set(i, j, true);
    const std::uint64_t seed = rng();
    const TopologyPartition p = partition_topology(x, nodes, seed);
    std::multiset<NodeId> seen(p.gsats.begin(), p.gsats.end());
    for (const auto& set : p.ugsat_sets) seen.insert(set.begin(), set.end());
    CHECK(seen.size() == 6);
    for (NodeId s : nodes.satellites()) CHECK(seen.count(s) == 1);
    for (std::size_t k = 0; k < p.ugsat_sets.size(); ++k) {
      const auto& set = p.ugsat_sets[k];
      CHECK(std::find(set.begin(), set.end(), p.representatives[k]) != set.end());
    }
    const TopologyPartition again = partition_topology(x, nodes, seed);
    CHECK(again.representatives == p.representatives);
  }
}

TEST_CASE("seed mixing is stable") {
  CHECK(mix_seed(0) == 0xe220a8397b1dcdafULL);
  CHECK(draw_seed(1, 2, 3) == draw_seed(1, 2, 3));
  CHECK(draw_seed(1, 2, 3) != draw_seed(1, 3, 2));
}

namespace {

struct ValidateFixture {
  NodeSet nodes = make_nodes(3, 1, 0, 1);
  VisibilitySet vis;
  ReflectorPlan plan;

  ValidateFixture() {
    const TimeGrid grid = test::small_grid(2);
    vis = test::full_visibility(nodes, grid);
    plan.scheme = "R-CPD";
    plan.params.access_window = 2;
    plan.params.ground_links = 1;
    plan.links.assign(2, AdjacencyMatrix(nodes.size()));
    plan.deficits.assign(2, 0);
    for (auto& x : plan.links) {
      x.set(0, 1, true);
      x.set(2, id(nodes, "G1"), true);
    }
    plan.links[0].set(0, id(nodes, "RU1"), true);
  }

  bool has(Constraint c, bool enforce = true) const {
    for (const Violation& v : validate_reflector_plan(plan, vis, nodes, enforce))
      if (v.constraint == c) return true;
    return false;
  }
};

}  // namespace

TEST_CASE("validator accepts an admissible plan") {
  ValidateFixture f;
  CHECK(validate_reflector_plan(f.plan, f.vis, f.nodes).empty());
}

TEST_CASE("validator flags a link without visibility") {
  ValidateFixture f;
  f.vis.period[1].set(0, 1, false);
  CHECK(f.has(Constraint::Visibility));
}

TEST_CASE("validator flags a satellite over its terminal count") {
  ValidateFixture f;
  f.plan.links[1].set(0, 2, true);
  f.plan.links[1].set(0, f.nodes.find("G1").value(), true);
  CHECK(f.has(Constraint::SatelliteDegree));
}

TEST_CASE("validator flags a missing access window") {
  ValidateFixture f;
  f.plan.links[0].set(0, f.nodes.find("RU1").value(), false);
  CHECK(f.has(Constraint::AccessFrequency));
  CHECK_FALSE(f.has(Constraint::AccessFrequency, false));
}

TEST_CASE("validator flags asymmetric and non-binary cells") {
  ValidateFixture f;
  f.plan.links[0].set_cell(1, 2, 1);
  CHECK(f.has(Constraint::Symmetry));
  ValidateFixture g;
  g.plan.links[0].set_cell(0, 1, 2);
  g.plan.links[0].set_cell(1, 0, 2);
  CHECK(g.has(Constraint::Binary));
}

TEST_CASE("validator flags an understated deficit") {
  ValidateFixture f;
  f.plan.params.ground_links = 2;
  CHECK(f.has(Constraint::GroundFloor));
  f.plan.deficits = {1, 1};
  CHECK_FALSE(f.has(Constraint::GroundFloor));
}

TEST_CASE("validator flags forbidden link kinds and dimension mismatch") {
  ValidateFixture f;
  f.plan.links[0].set(f.nodes.find("RU1").value(), f.nodes.find("G1").value(), true);
  f.vis.period[0].set(f.nodes.find("RU1").value(), f.nodes.find("G1").value(), true);
  CHECK(f.has(Constraint::LinkKind));
  ValidateFixture g;
  g.plan.links.pop_back();
  CHECK_THROWS_AS(validate_reflector_plan(g.plan, g.vis, g.nodes), DimensionMismatch);
}

TEST_CASE("phased-array validator catches reused terminals") {
  const NodeSet nodes = make_nodes(3, 0, 1, 0);
  const TimeGrid grid = test::small_grid(1, 2, 1, 2);
  const VisibilitySet vis = test::full_visibility(nodes, grid);
  PhasedArrayPlan plan;
  plan.superframes_per_period = 2;
  plan.superframes.assign(2, SuperframePlan{{Matching{}, Matching{}}});
  plan.superframes[0].slots[0] = {NodePair(0, 1), NodePair(2, 3)};
  CHECK(validate_phased_array_plan(plan, vis, nodes, grid).empty());
  plan.superframes[1].slots[1] = {NodePair(0, 1), NodePair(1, 2)};
  CHECK_FALSE(validate_phased_array_plan(plan, vis, nodes, grid).empty());
}
