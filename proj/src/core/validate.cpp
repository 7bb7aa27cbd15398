#include "cpd/core/validate.hpp"

#include <algorithm>
#include <set>

namespace cpd {

const char* to_string(Constraint c) {
  switch (c) {
    case Constraint::Binary: return "binary";
    case Constraint::Symmetry: return "symmetry";
    case Constraint::Visibility: return "visibility";
    case Constraint::SatelliteDegree: return "satellite-degree";
    case Constraint::UserDegree: return "user-degree";
    case Constraint::AccessFrequency: return "access-frequency";
    case Constraint::GroundFloor: return "ground-floor";
    case Constraint::LinkKind: return "link-kind";
    case Constraint::Waiver: return "waiver";
    case Constraint::PhasedArray: return "phased-array";
  }
  return "unknown";
}

namespace {

bool user_sees_any_satellite(const VisibilitySet& vis, const NodeSet& nodes, NodeId user,
                             std::size_t first, std::size_t last) {
  for (std::size_t m = first; m <= last; ++m)
    for (NodeId s : nodes.satellites())
      if (vis.period[m](user, s)) return true;
  return false;
}

}  // namespace

std::vector<Violation> validate_reflector_plan(const ReflectorPlan& plan, const VisibilitySet& vis,
                                               const NodeSet& nodes, bool enforce_access) {
  const std::size_t n = nodes.size();
  const std::size_t periods = plan.links.size();
  if (vis.period.size() != periods)
    throw DimensionMismatch("plan has " + std::to_string(periods) + " periods, visibility has " +
                            std::to_string(vis.period.size()));
  if (plan.deficits.size() != periods)
    throw DimensionMismatch("deficit vector length differs from period count");
  for (std::size_t m = 0; m < periods; ++m)
    if (plan.links[m].size() != n || vis.period[m].size() != n)
      throw DimensionMismatch("period " + std::to_string(m) + " has wrong node dimension");

  std::vector<Violation> out;
  const ReflectorParams& prm = plan.params;

  for (std::size_t m = 0; m < periods; ++m) {
    const AdjacencyMatrix& x = plan.links[m];
    const AdjacencyMatrix& y = vis.period[m];
    for (NodeId i = 0; i < n; ++i) {
      for (NodeId j = 0; j < n; ++j) {
        const std::uint8_t v = x.cell(i, j);
        if (v > 1) out.push_back({Constraint::Binary, m, i, j, "value " + std::to_string(v)});
        if (j > i && v != x.cell(j, i)) out.push_back({Constraint::Symmetry, m, i, j, "asymmetric"});
        if (v && !y(i, j)) out.push_back({Constraint::Visibility, m, i, j, "link without visibility"});
        if (v && j > i && !reflector_capable(nodes, i, j))
          out.push_back({Constraint::LinkKind, m, i, j, "pair cannot carry a reflector link"});
      }
    }
    for (NodeId s : nodes.satellites()) {
      const std::size_t d = x.degree(s);
      if (d > static_cast<std::size_t>(prm.terminals_per_satellite))
        out.push_back({Constraint::SatelliteDegree, m, s, s, std::to_string(d) + " links"});
    }
    for (NodeId u : nodes.r_users()) {
      const std::size_t d = x.degree(u);
      if (d > 1) out.push_back({Constraint::UserDegree, m, u, u, std::to_string(d) + " links"});
    }
    int ground = 0;
    for (NodeId s : nodes.satellites())
      for (NodeId g : nodes.ground_stations()) ground += x(s, g) ? 1 : 0;
    const int p = plan.deficits[m];
    if (p < 0 || ground < prm.ground_links - p)
      out.push_back({Constraint::GroundFloor, m, 0, 0,
                     std::to_string(ground) + " ground links, deficit " + std::to_string(p)});
  }

  const std::size_t f = static_cast<std::size_t>(std::max(prm.access_window, 1));
  std::set<std::tuple<NodeId, std::size_t>> waived;
  for (const WaivedWindow& w : plan.waived_windows) {
    waived.emplace(w.user, w.first_period);
    if (w.last_period >= periods || user_sees_any_satellite(vis, nodes, w.user, w.first_period, w.last_period))
      out.push_back({Constraint::Waiver, w.first_period, w.user, w.user, "waived window is satisfiable"});
  }
  if (enforce_access && periods >= f) {
    for (NodeId u : nodes.r_users()) {
      for (std::size_t first = 0; first + f <= periods; ++first) {
        bool hit = false;
        for (std::size_t m = first; m < first + f && !hit; ++m)
          for (NodeId s : nodes.satellites())
            if (plan.links[m](u, s)) {
              hit = true;
              break;
            }
        if (!hit && !waived.count({u, first}))
          out.push_back({Constraint::AccessFrequency, first, u, u,
                         "no access in periods " + std::to_string(first) + ".." + std::to_string(first + f - 1)});
      }
    }
  }
  return out;
}

std::vector<Violation> validate_phased_array_plan(const PhasedArrayPlan& plan, const VisibilitySet& vis,
                                                  const NodeSet& nodes, const TimeGrid& grid) {
  if (plan.superframes.size() != vis.superframe.size())
    throw DimensionMismatch("phased-array plan superframe count differs from visibility");
  std::vector<Violation> out;
  const std::size_t n = nodes.size();
  for (std::size_t g = 0; g < plan.superframes.size(); ++g) {
    const auto& slots = plan.superframes[g].slots;
    if (slots.size() != grid.slots_per_superframe())
      throw DimensionMismatch("superframe " + std::to_string(g) + " has wrong slot count");
    const std::size_t period = g / grid.superframes_per_period;
    for (const Matching& m : slots) {
      std::vector<char> used(n, 0);
      for (const NodePair& p : m) {
        if (p.a >= n || p.b >= n || p.a == p.b) {
          out.push_back({Constraint::PhasedArray, period, p.a, p.b, "malformed pair"});
          continue;
        }
        if (!phased_array_capable(nodes, p.a, p.b))
          out.push_back({Constraint::PhasedArray, period, p.a, p.b, "pair cannot carry a phased-array link"});
        if (!vis.superframe[g](p.a, p.b))
          out.push_back({Constraint::PhasedArray, period, p.a, p.b, "link without visibility"});
        if (used[p.a] || used[p.b])
          out.push_back({Constraint::PhasedArray, period, p.a, p.b, "node matched twice in one slot"});
        used[p.a] = used[p.b] = 1;
      }
    }
  }
  return out;
}

}  // namespace cpd
