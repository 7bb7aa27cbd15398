#pragma once

#include <functional>
#include <istream>
#include <ostream>
#include <vector>

#include "cpd/core/types.hpp"
#include "cpd/geometry/cr3bp.hpp"
#include "cpd/geometry/orbit_catalog.hpp"

namespace cpd::geometry {

// Half-cone angles in degrees. Space terminals are boresighted at the Earth
// centre; the ground-station cone is measured from local zenith.
struct PointingSpec {
  double rl_half_cone_deg = 75.0;
  double pl_half_cone_deg = 75.0;
  double gs_half_cone_deg = 85.0;

  void validate() const;  // throws ModelError
};

// Fills `out` (one entry per node) with rotating-frame positions at the
// midpoint of global slot `slot`. Called with strictly increasing slots.
using PositionSource = std::function<void(std::size_t slot, std::vector<Vec3>& out)>;

// Earth-fixed site in the rotating frame at nondimensional time t. The
// Earth spin axis is taken parallel to the orbit normal.
Vec3 ground_station_position(const GroundSite& site, double t, double mu);

// Propagates every node's catalog orbit slot by slot.
PositionSource orbit_position_source(const NodeSet& nodes, const OrbitCatalog& catalog, const TimeGrid& grid,
                                     double step = kDefaultStep);

// Segment a-b misses both primaries. Endpoints flagged as surface points are
// exempt from Earth occlusion (their cone check already guarantees they look
// upward).
bool line_of_sight(const Vec3& a, const Vec3& b, double mu, bool a_on_earth, bool b_on_earth);

// Per-slot link feasibility for one pair (kind-aware cones).
struct SlotFlags {
  bool reflector = false;
  bool phased_array = false;
};
SlotFlags slot_visibility(const NodeSet& nodes, NodeId i, NodeId j, const std::vector<Vec3>& pos,
                          const PointingSpec& pointing, double mu);

// Reflector visibility holds for a period only if every slot midpoint of the
// period is visible; phased-array visibility likewise per superframe.
VisibilitySet compute_visibility(const NodeSet& nodes, const TimeGrid& grid, const PointingSpec& pointing,
                                 const PositionSource& source);

VisibilitySet compute_visibility(const NodeSet& nodes, const OrbitCatalog& catalog, const TimeGrid& grid,
                                 const PointingSpec& pointing, double step = kDefaultStep);

// Visibility-trace override: pair (i, j) visible over global slots [start, end).
struct TraceInterval {
  NodeId i = 0;
  NodeId j = 0;
  std::size_t start_slot = 0;
  std::size_t end_slot = 0;
};

class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Lines "name_i name_j start_slot end_slot"; '#' comments.
std::vector<TraceInterval> parse_visibility_trace(std::istream& in, const NodeSet& nodes);
void write_visibility_trace(std::ostream& out, const std::vector<TraceInterval>& intervals, const NodeSet& nodes);

// Builds visibility from intervals; the same per-slot flag feeds both link kinds.
VisibilitySet visibility_from_trace(const NodeSet& nodes, const TimeGrid& grid,
                                    const std::vector<TraceInterval>& intervals);

// Per-slot intervals from geometry, for freezing into a trace file.
std::vector<TraceInterval> trace_from_geometry(const NodeSet& nodes, const TimeGrid& grid,
                                               const PointingSpec& pointing, const PositionSource& source);

// Mean number of distinct satellites phased-array visible to a P-user,
// averaged over P-users and superframes.
double mean_visible_satellites_per_puser(const VisibilitySet& vis, const NodeSet& nodes);

}  // namespace cpd::geometry
