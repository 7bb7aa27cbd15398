#include "cpd/geometry/visibility.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <numbers>
#include <sstream>

namespace cpd::geometry {

void PointingSpec::validate() const {
  for (double a : {rl_half_cone_deg, pl_half_cone_deg, gs_half_cone_deg})
    if (!(a > 0.0 && a <= 90.0)) throw ModelError("pointing: half-cone angles must lie in (0, 90] degrees");
}

namespace {

constexpr double deg2rad(double d) { return d * std::numbers::pi / 180.0; }

Vec3 earth_centre(double mu) { return {-mu, 0.0, 0.0}; }
Vec3 moon_centre(double mu) { return {1.0 - mu, 0.0, 0.0}; }

// Distance from c to the closest point of segment a-b.
double segment_distance(const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a;
  const double len2 = ab.dot(ab);
  double t = len2 > 0.0 ? (c - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (a + ab * t - c).norm();
}

bool within_cone(const Vec3& axis, const Vec3& dir, double half_cone_rad) {
  const double na = axis.norm(), nd = dir.norm();
  if (na == 0.0 || nd == 0.0) return false;
  const double c = std::clamp(axis.dot(dir) / (na * nd), -1.0, 1.0);
  return std::acos(c) <= half_cone_rad + 1e-12;
}

struct CandidatePair {
  NodeId i, j;
  bool reflector, phased_array;
};

std::vector<CandidatePair> candidate_pairs(const NodeSet& nodes) {
  std::vector<CandidatePair> out;
  for (NodeId i = 0; i < nodes.size(); ++i)
    for (NodeId j = i + 1; j < nodes.size(); ++j) {
      const bool r = reflector_capable(nodes, i, j);
      const bool p = phased_array_capable(nodes, i, j);
      if (r || p) out.push_back({i, j, r, p});
    }
  return out;
}

bool combined_flag(const CandidatePair& c, const SlotFlags& f) {
  if (c.reflector && c.phased_array) return f.reflector && f.phased_array;
  return c.reflector ? f.reflector : f.phased_array;
}

std::string interval_where(int lineno) { return "visibility trace line " + std::to_string(lineno) + ": "; }

}  // namespace

Vec3 ground_station_position(const GroundSite& site, double t, double mu) {
  const double spin = earth_moon::kEarthRotationRadS * earth_moon::time_unit_s() - 1.0;
  const double lat = deg2rad(site.latitude_deg);
  const double theta = deg2rad(site.longitude_deg) + spin * t;
  const double r = earth_moon::kEarthRadiusKm / earth_moon::kDistanceKm;
  return earth_centre(mu) + Vec3{std::cos(lat) * std::cos(theta), std::cos(lat) * std::sin(theta), std::sin(lat)} * r;
}

PositionSource orbit_position_source(const NodeSet& nodes, const OrbitCatalog& catalog, const TimeGrid& grid,
                                     double step) {
  const double mu = earth_moon::mass_ratio();
  const double slot_nd = static_cast<double>(grid.slot_length.count()) / earth_moon::time_unit_s();
  const double sub = std::min(step, slot_nd);

  struct Track {
    bool ground = false;
    GroundSite site;
    Cr3bpState state;
  };
  std::vector<Track> tracks(nodes.size());
  for (NodeId id = 0; id < nodes.size(); ++id) {
    const Node& n = nodes[id];
    if (const auto* g = std::get_if<GroundSite>(&n.trajectory)) {
      tracks[id].ground = true;
      tracks[id].site = *g;
    } else if (const auto* o = std::get_if<OrbitRef>(&n.trajectory)) {
      const OrbitEntry& e = catalog.at(o->orbit);
      Cr3bpState s = e.initial;
      s.epoch = 0.0;
      const double phase_dt = std::fmod(std::max(o->phase, 0.0), 1.0) * e.period;
      s = propagate(s, phase_dt, std::min(step, e.period / 2000.0));
      s.epoch = 0.0;
      // First sample sits at the midpoint of slot 0.
      tracks[id].state = propagate(s, 0.5 * slot_nd, sub);
    } else {
      throw ModelError("node '" + n.name + "' has no trajectory");
    }
  }

  struct State {
    std::vector<Track> tracks;
    std::size_t next_slot = 0;
  };
  auto state = std::make_shared<State>(State{std::move(tracks), 0});
  return [state, slot_nd, sub, mu](std::size_t slot, std::vector<Vec3>& out) {
    if (slot < state->next_slot) throw std::logic_error("orbit position source must be sampled in slot order");
    out.resize(state->tracks.size());
    const double t = (static_cast<double>(slot) + 0.5) * slot_nd;
    for (std::size_t id = 0; id < state->tracks.size(); ++id) {
      Track& tr = state->tracks[id];
      if (tr.ground) {
        out[id] = ground_station_position(tr.site, t, mu);
        continue;
      }
      const double dt = t - tr.state.epoch;
      if (dt > 0.0) tr.state = propagate(tr.state, dt, sub);
      out[id] = tr.state.position;
    }
    state->next_slot = slot + 1;
  };
}

bool line_of_sight(const Vec3& a, const Vec3& b, double mu, bool a_on_earth, bool b_on_earth) {
  const double re = earth_moon::kEarthRadiusKm / earth_moon::kDistanceKm;
  const double rm = earth_moon::kMoonRadiusKm / earth_moon::kDistanceKm;
  if (!a_on_earth && !b_on_earth && segment_distance(a, b, earth_centre(mu)) < re) return false;
  return segment_distance(a, b, moon_centre(mu)) >= rm;
}

SlotFlags slot_visibility(const NodeSet& nodes, NodeId i, NodeId j, const std::vector<Vec3>& pos,
                          const PointingSpec& pointing, double mu) {
  const bool gi = nodes.kind(i) == NodeKind::GroundStation;
  const bool gj = nodes.kind(j) == NodeKind::GroundStation;
  SlotFlags f;
  if (!line_of_sight(pos[i], pos[j], mu, gi, gj)) return f;
  const Vec3 earth = earth_centre(mu);
  auto cone_ok = [&](NodeId self, NodeId other, bool ground, double space_cone_deg) {
    const Vec3 dir = pos[other] - pos[self];
    if (ground) return within_cone(pos[self] - earth, dir, deg2rad(pointing.gs_half_cone_deg));
    return within_cone(earth - pos[self], dir, deg2rad(space_cone_deg));
  };
  if (reflector_capable(nodes, i, j))
    f.reflector = cone_ok(i, j, gi, pointing.rl_half_cone_deg) && cone_ok(j, i, gj, pointing.rl_half_cone_deg);
  if (phased_array_capable(nodes, i, j))
    f.phased_array = cone_ok(i, j, gi, pointing.pl_half_cone_deg) && cone_ok(j, i, gj, pointing.pl_half_cone_deg);
  return f;
}

VisibilitySet compute_visibility(const NodeSet& nodes, const TimeGrid& grid, const PointingSpec& pointing,
                                 const PositionSource& source) {
  grid.validate();
  pointing.validate();
  const double mu = earth_moon::mass_ratio();
  const std::size_t n = nodes.size();
  const std::size_t per_sf = grid.slots_per_superframe();
  const auto pairs = candidate_pairs(nodes);

  VisibilitySet vis;
  vis.period.assign(grid.period_count, AdjacencyMatrix(n));
  vis.superframe.assign(grid.superframe_count(), AdjacencyMatrix(n));
  std::vector<char> rl_acc(pairs.size()), pl_acc(pairs.size());
  std::vector<Vec3> pos;
  std::size_t slot = 0;
  for (std::size_t m = 0; m < grid.period_count; ++m) {
    std::fill(rl_acc.begin(), rl_acc.end(), 1);
    for (std::size_t s = 0; s < grid.superframes_per_period; ++s) {
      std::fill(pl_acc.begin(), pl_acc.end(), 1);
      for (std::size_t k = 0; k < per_sf; ++k, ++slot) {
        source(slot, pos);
        for (std::size_t p = 0; p < pairs.size(); ++p) {
          if (!rl_acc[p] && !pl_acc[p]) continue;
          const SlotFlags f = slot_visibility(nodes, pairs[p].i, pairs[p].j, pos, pointing, mu);
          rl_acc[p] = rl_acc[p] && f.reflector;
          pl_acc[p] = pl_acc[p] && f.phased_array;
        }
      }
      AdjacencyMatrix& layer = vis.superframe[m * grid.superframes_per_period + s];
      for (std::size_t p = 0; p < pairs.size(); ++p)
        if (pairs[p].phased_array && pl_acc[p]) layer.set(pairs[p].i, pairs[p].j, true);
    }
    for (std::size_t p = 0; p < pairs.size(); ++p)
      if (pairs[p].reflector && rl_acc[p]) vis.period[m].set(pairs[p].i, pairs[p].j, true);
  }
  return vis;
}

VisibilitySet compute_visibility(const NodeSet& nodes, const OrbitCatalog& catalog, const TimeGrid& grid,
                                 const PointingSpec& pointing, double step) {
  return compute_visibility(nodes, grid, pointing, orbit_position_source(nodes, catalog, grid, step));
}

std::vector<TraceInterval> parse_visibility_trace(std::istream& in, const NodeSet& nodes) {
  std::vector<TraceInterval> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string a, b;
    if (!(ls >> a)) continue;
    long long start = 0, end = 0;
    if (!(ls >> b >> start >> end))
      throw TraceError(interval_where(lineno) + "expected: node_i node_j start_slot end_slot");
    const auto ia = nodes.find(a), ib = nodes.find(b);
    if (!ia) throw TraceError(interval_where(lineno) + "unknown node '" + a + "'");
    if (!ib) throw TraceError(interval_where(lineno) + "unknown node '" + b + "'");
    if (start < 0 || end < start) throw TraceError(interval_where(lineno) + "need 0 <= start_slot <= end_slot");
    if (!reflector_capable(nodes, *ia, *ib) && !phased_array_capable(nodes, *ia, *ib))
      throw TraceError(interval_where(lineno) + "pair " + a + "-" + b + " cannot carry any link");
    out.push_back({std::min(*ia, *ib), std::max(*ia, *ib), static_cast<std::size_t>(start),
                   static_cast<std::size_t>(end)});
  }
  return out;
}

void write_visibility_trace(std::ostream& out, const std::vector<TraceInterval>& intervals, const NodeSet& nodes) {
  out << "# node_i node_j start_slot end_slot\n";
  for (const TraceInterval& t : intervals)
    out << nodes[t.i].name << ' ' << nodes[t.j].name << ' ' << t.start_slot << ' ' << t.end_slot << '\n';
}

VisibilitySet visibility_from_trace(const NodeSet& nodes, const TimeGrid& grid,
                                    const std::vector<TraceInterval>& intervals) {
  grid.validate();
  std::map<std::pair<NodeId, NodeId>, std::vector<std::pair<std::size_t, std::size_t>>> by_pair;
  for (const TraceInterval& t : intervals)
    if (t.end_slot > t.start_slot) by_pair[{t.i, t.j}].emplace_back(t.start_slot, t.end_slot);

  const std::size_t n = nodes.size();
  const std::size_t per_sf = grid.slots_per_superframe();
  const std::size_t per_period = grid.slots_per_period();
  VisibilitySet vis;
  vis.period.assign(grid.period_count, AdjacencyMatrix(n));
  vis.superframe.assign(grid.superframe_count(), AdjacencyMatrix(n));

  for (auto& [pair, spans] : by_pair) {
    std::sort(spans.begin(), spans.end());
    std::vector<std::pair<std::size_t, std::size_t>> merged;
    for (const auto& s : spans) {
      if (!merged.empty() && s.first <= merged.back().second)
        merged.back().second = std::max(merged.back().second, s.second);
      else
        merged.push_back(s);
    }
    auto covered = [&](std::size_t a, std::size_t b) {
      auto it = std::upper_bound(merged.begin(), merged.end(), std::make_pair(a, SIZE_MAX));
      if (it == merged.begin()) return false;
      --it;
      return it->first <= a && it->second >= b;
    };
    const auto [i, j] = pair;
    const bool rl = reflector_capable(nodes, i, j);
    const bool pl = phased_array_capable(nodes, i, j);
    for (std::size_t m = 0; m < grid.period_count; ++m) {
      if (rl && covered(m * per_period, (m + 1) * per_period)) vis.period[m].set(i, j, true);
      if (!pl) continue;
      for (std::size_t s = 0; s < grid.superframes_per_period; ++s) {
        const std::size_t g = m * grid.superframes_per_period + s;
        if (covered(g * per_sf, (g + 1) * per_sf)) vis.superframe[g].set(i, j, true);
      }
    }
  }
  return vis;
}

std::vector<TraceInterval> trace_from_geometry(const NodeSet& nodes, const TimeGrid& grid,
                                               const PointingSpec& pointing, const PositionSource& source) {
  grid.validate();
  pointing.validate();
  const double mu = earth_moon::mass_ratio();
  const auto pairs = candidate_pairs(nodes);
  std::vector<long long> open(pairs.size(), -1);
  std::vector<TraceInterval> out;
  std::vector<Vec3> pos;
  const std::size_t total = grid.total_slots();
  for (std::size_t slot = 0; slot < total; ++slot) {
    source(slot, pos);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const bool v = combined_flag(pairs[p], slot_visibility(nodes, pairs[p].i, pairs[p].j, pos, pointing, mu));
      if (v && open[p] < 0) open[p] = static_cast<long long>(slot);
      if (!v && open[p] >= 0) {
        out.push_back({pairs[p].i, pairs[p].j, static_cast<std::size_t>(open[p]), slot});
        open[p] = -1;
      }
    }
  }
  for (std::size_t p = 0; p < pairs.size(); ++p)
    if (open[p] >= 0) out.push_back({pairs[p].i, pairs[p].j, static_cast<std::size_t>(open[p]), total});
  std::sort(out.begin(), out.end(), [](const TraceInterval& a, const TraceInterval& b) {
    return std::tie(a.i, a.j, a.start_slot) < std::tie(b.i, b.j, b.start_slot);
  });
  return out;
}

double mean_visible_satellites_per_puser(const VisibilitySet& vis, const NodeSet& nodes) {
  if (nodes.p_users().empty() || vis.superframe.empty()) return 0.0;
  double total = 0.0;
  for (const AdjacencyMatrix& layer : vis.superframe)
    for (NodeId u : nodes.p_users())
      for (NodeId s : nodes.satellites()) total += layer(u, s) ? 1.0 : 0.0;
  return total / static_cast<double>(vis.superframe.size() * nodes.p_users().size());
}

}  // namespace cpd::geometry
