#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cpd/baselines/dfcp.hpp"
#include "cpd/core/types.hpp"
#include "cpd/geometry/visibility.hpp"
#include "cpd/pcpd/weights.hpp"
#include "cpd/rcpd/model.hpp"

namespace cpd::cli {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SpaceNodeSpec {
  std::string name;
  std::string orbit;
  double phase = 0.0;
};

struct GroundSpec {
  std::string name;
  double latitude_deg = 0.0;
  double longitude_deg = 0.0;
};

// Users are either listed explicitly or generated: user k flies family
// k mod |families| at phase frac(0.6180339887 (k + 1) + offset).
struct UserSpec {
  std::vector<SpaceNodeSpec> listed;
  std::optional<std::size_t> count;
};

struct SchemePair {
  std::string reflector;  // R-CPD | LAA-PMM
  std::string phased;     // P-CPD | DFCP
};

struct SweepSpec {
  std::vector<std::size_t> p_users;
  std::vector<std::size_t> r_users;
  std::vector<int> ground_links;
};

struct Scenario {
  std::string name = "scenario";
  std::string base_dir;  // directory of the scenario file, for relative paths
  std::uint64_t seed = 1;
  std::string orbit_catalog;
  std::optional<std::string> visibility_trace;
  double integrator_step = geometry::kDefaultStep;
  TimeGrid grid;
  geometry::PointingSpec pointing;
  int terminals_per_satellite = 2;
  std::vector<SpaceNodeSpec> satellites;
  std::vector<GroundSpec> ground_stations;
  std::vector<std::string> user_families;
  UserSpec r_users;
  UserSpec p_users;
  rcpd::RcpdParams rcpd;
  pcpd::WeightParams weights;
  std::map<std::string, int> required_by_name;  // per-user L^u overrides
  baselines::BaselineConfig baseline;
  std::vector<SchemePair> schemes;
  SweepSpec sweep;

  std::string resolve(const std::string& path) const;
};

inline const std::vector<std::string> kDefaultUserFamilies = {"L1-LYAP", "L2-LYAP", "L3-VERT", "L4-VERT",
                                                              "L5-VERT", "DRO-U",   "NRHO",    "ELFO"};

// JSON scenario. Syntax and type problems raise ParseError; semantically
// invalid values raise ValidationError naming the field.
Scenario parse_scenario(const std::string& text, const std::string& base_dir = ".");
Scenario load_scenario(const std::string& path);

// Node inventory with generated users expanded.
NodeSet build_nodes(const Scenario& s);

// Weight parameters with per-user overrides bound to node ids.
pcpd::WeightParams bound_weights(const Scenario& s, const NodeSet& nodes);

// Checks cross references (orbits exist, schemes known, ...). Throws ValidationError.
void validate_scenario(const Scenario& s);

// Reads CPD_SOLVER_TIME_LIMIT (seconds) if set.
void apply_environment(Scenario& s);

}  // namespace cpd::cli
