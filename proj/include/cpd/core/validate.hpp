#pragma once

#include <string>
#include <vector>

#include "cpd/core/types.hpp"

namespace cpd {

enum class Constraint {
  Binary,           // link variables are 0/1
  Symmetry,         // x(i,j,m) = x(j,i,m)
  Visibility,       // x <= y
  SatelliteDegree,  // at most r reflector links per satellite
  UserDegree,       // at most one reflector link per R-user
  AccessFrequency,  // every f-period window holds an access per R-user
  GroundFloor,      // Sat-GS links >= L_G - p(m), p(m) >= 0
  LinkKind,         // only Sat-Sat, Sat-RUser, Sat-GS reflector links
  Waiver,           // a waived window that was in fact satisfiable
  PhasedArray,      // matching validity for phased-array plans
};

const char* to_string(Constraint c);

struct Violation {
  Constraint constraint;
  std::size_t period = 0;
  NodeId a = 0;
  NodeId b = 0;
  std::string detail;
};

// Thrown when the plan and visibility do not describe the same grid.
class DimensionMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Independent re-check of every reflector-plan constraint. Empty result
// means the plan is admissible. `enforce_access` = false reports access
// windows only for plans whose scheme does not promise them (baselines).
std::vector<Violation> validate_reflector_plan(const ReflectorPlan& plan, const VisibilitySet& vis,
                                               const NodeSet& nodes, bool enforce_access = true);

// Per-slot matchings are disjoint, visible, unordered-unique pairs of
// phased-array capable nodes.
std::vector<Violation> validate_phased_array_plan(const PhasedArrayPlan& plan, const VisibilitySet& vis,
                                                  const NodeSet& nodes, const TimeGrid& grid);

}  // namespace cpd
