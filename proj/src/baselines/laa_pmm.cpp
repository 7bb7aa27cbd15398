#include "cpd/baselines/laa_pmm.hpp"

#include <limits>
#include <tuple>

#include "cpd/pcpd/matching.hpp"

namespace cpd::baselines {

namespace {

constexpr std::int64_t kUserWeight = 3;
constexpr std::int64_t kSatWeight = 1;

// Maximum-weight b-matching through edge gadgets: edge (a, b) becomes the
// path copy(a) - e_a - e_b - copy(b), all three edges carrying w. A gadget
// adds w when idle and 2w when both ends reach a copy, so the matching
// optimum is sum(w) plus the best b-matching.
std::vector<NodePair> b_matching(const std::vector<NodePair>& pairs, const std::vector<std::int64_t>& weights,
                                 const std::vector<int>& capacity) {
  std::vector<std::vector<NodeId>> copies(capacity.size());
  NodeId next = 0;
  for (std::size_t v = 0; v < capacity.size(); ++v)
    for (int k = 0; k < capacity[v]; ++k) copies[v].push_back(next++);
  std::vector<pcpd::WeightedEdge> edges;
  std::vector<std::pair<NodeId, NodeId>> gadget;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const NodeId ea = next++, eb = next++;
    gadget.emplace_back(ea, eb);
    for (NodeId c : copies[pairs[k].a]) edges.push_back({c, ea, weights[k]});
    edges.push_back({ea, eb, weights[k]});
    for (NodeId c : copies[pairs[k].b]) edges.push_back({eb, c, weights[k]});
  }
  const Matching m = pcpd::max_weight_matching(next, edges);
  std::vector<NodeId> mate(next, std::numeric_limits<NodeId>::max());
  for (const NodePair& p : m) {
    mate[p.a] = p.b;
    mate[p.b] = p.a;
  }
  const NodeId first_gadget = next - static_cast<NodeId>(2 * pairs.size());
  std::vector<NodePair> used;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [ea, eb] = gadget[k];
    if (mate[ea] < first_gadget && mate[eb] < first_gadget) used.push_back(pairs[k]);
  }
  return used;
}

}  // namespace

ReflectorPlan laa_pmm_plan(const VisibilitySet& vis, const NodeSet& nodes, const ReflectorParams& params) {
  if (params.terminals_per_satellite < 1 || params.ground_links < 0)
    throw ModelError("laa-pmm: invalid reflector parameters");
  const std::size_t n = nodes.size();
  ReflectorPlan plan;
  plan.scheme = "LAA-PMM";
  plan.params = params;
  plan.links.assign(vis.period.size(), AdjacencyMatrix(n));
  plan.deficits.assign(vis.period.size(), 0);
  std::vector<long long> last_attached(n, -1);

  for (std::size_t m = 0; m < vis.period.size(); ++m) {
    const AdjacencyMatrix& y = vis.period[m];
    AdjacencyMatrix& x = plan.links[m];
    std::vector<int> room(n, 0);
    for (NodeId s : nodes.satellites()) room[s] = params.terminals_per_satellite;

    int ground = 0;
    for (; ground < params.ground_links; ++ground) {
      std::tuple<long long, NodeId, NodeId> best{std::numeric_limits<long long>::max(), 0, 0};
      bool any = false;
      for (NodeId s : nodes.satellites()) {
        if (room[s] == 0) continue;
        for (NodeId g : nodes.ground_stations()) {
          if (!y(s, g) || x(s, g)) continue;
          const std::tuple<long long, NodeId, NodeId> key{last_attached[s], s, g};
          if (!any || key < best) best = key;
          any = true;
        }
      }
      if (!any) break;
      const auto [when, s, g] = best;
      x.set(s, g, true);
      --room[s];
      last_attached[s] = static_cast<long long>(m);
    }
    plan.deficits[m] = params.ground_links - ground;

    std::vector<NodePair> pairs;
    std::vector<std::int64_t> weights;
    for (const NodePair& p : y.pairs()) {
      if (!nodes.is_satellite(p.a) || room[p.a] == 0) continue;
      const NodeKind kb = nodes.kind(p.b);
      if (kb == NodeKind::Satellite && room[p.b] > 0) {
        pairs.push_back(p);
        weights.push_back(kSatWeight);
      } else if (kb == NodeKind::RUser) {
        pairs.push_back(p);
        weights.push_back(kUserWeight);
      }
    }
    std::vector<int> capacity(n, 0);
    for (NodeId s : nodes.satellites()) capacity[s] = room[s];
    for (NodeId u : nodes.r_users()) capacity[u] = 1;
    for (const NodePair& p : b_matching(pairs, weights, capacity)) x.set(p.a, p.b, true);
  }
  return plan;
}

}  // namespace cpd::baselines
