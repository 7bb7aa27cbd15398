#include "cpd/cli/scenario.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#ifndef CPD_DATA_DIR
#define CPD_DATA_DIR "data"
#endif

namespace cpd::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ParseError(where() + "expected an object");
  }

  void allow(std::initializer_list<const char*> keys) const {
    std::set<std::string> ok(keys.begin(), keys.end());
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!ok.count(it.key())) throw ValidationError(field(it.key()) + ": unknown field");
  }

  bool has(const char* key) const { return j_.contains(key); }
  const json& raw(const char* key) const { return j_.at(key); }
  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  template <class T>
  void get(const char* key, T& out) const {
    if (!j_.contains(key)) return;
    out = as<T>(j_.at(key), field(key));
  }

  template <class T>
  static T as(const json& v, const std::string& name) {
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ParseError(name + ": expected true or false");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw ParseError(name + ": expected an integer");
        if constexpr (std::is_unsigned_v<T>)
          if (v.get<long long>() < 0) throw ValidationError(name + ": must be nonnegative");
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw ParseError(name + ": expected a number");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw ParseError(name + ": expected a string");
      }
      return v.get<T>();
    } catch (const json::exception& e) {
      throw ParseError(name + ": " + e.what());
    }
  }

 private:
  std::string where() const { return path_.empty() ? "scenario: " : path_ + ": "; }
  const json& j_;
  std::string path_;
};

std::vector<SpaceNodeSpec> space_nodes(const json& arr, const std::string& name) {
  if (!arr.is_array()) throw ParseError(name + ": expected an array");
  std::vector<SpaceNodeSpec> out;
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const std::string f = name + "[" + std::to_string(k) + "]";
    Reader r(arr[k], f);
    r.allow({"name", "orbit", "phase"});
    SpaceNodeSpec s;
    if (!r.has("name") || !r.has("orbit")) throw ValidationError(f + ": needs name and orbit");
    r.get("name", s.name);
    r.get("orbit", s.orbit);
    r.get("phase", s.phase);
    out.push_back(std::move(s));
  }
  return out;
}

UserSpec users(const json& v, const std::string& name) {
  UserSpec u;
  if (v.is_number_integer()) {
    if (v.get<long long>() < 0) throw ValidationError(name + ": count must be nonnegative");
    u.count = v.get<std::size_t>();
  } else if (v.is_array()) {
    u.listed = space_nodes(v, name);
  } else {
    throw ParseError(name + ": expected a count or an array of users");
  }
  return u;
}

std::chrono::seconds whole_seconds(double value, const std::string& name) {
  if (!(value > 0.0) || std::abs(value - std::round(value)) > 1e-9)
    throw ValidationError(name + ": must be a positive whole number of seconds");
  return std::chrono::seconds(static_cast<long long>(std::llround(value)));
}

template <class T>
std::vector<T> list(const json& v, const std::string& name) {
  if (!v.is_array()) throw ParseError(name + ": expected an array");
  std::vector<T> out;
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(Reader::as<T>(v[k], name + "[" + std::to_string(k) + "]"));
  return out;
}

double frac(double x) { return x - std::floor(x); }

std::vector<Node> expand_users(const Scenario& s, const UserSpec& spec, bool phased) {
  std::vector<Node> out;
  auto make = [&](std::string name, OrbitRef ref) {
    return phased ? Node::p_user(std::move(name), ref) : Node::r_user(std::move(name), ref);
  };
  if (spec.count) {
    const std::string prefix = phased ? "PU" : "RU";
    for (std::size_t k = 0; k < *spec.count; ++k) {
      const std::string& family = s.user_families[k % s.user_families.size()];
      const double phase = frac(0.6180339887 * static_cast<double>(k + 1) + (phased ? 0.5 : 0.0));
      out.push_back(make(prefix + std::to_string(k + 1), OrbitRef{family, phase}));
    }
  } else {
    for (const SpaceNodeSpec& u : spec.listed) out.push_back(make(u.name, OrbitRef{u.orbit, u.phase}));
  }
  return out;
}

}  // namespace

std::string Scenario::resolve(const std::string& path) const {
  const fs::path p(path);
  if (p.is_absolute()) return path;
  const fs::path local = fs::path(base_dir) / p;
  if (fs::exists(local)) return local.string();
  const fs::path data = fs::path(CPD_DATA_DIR) / p.filename();
  if (fs::exists(data)) return data.string();
  return local.string();
}

Scenario parse_scenario(const std::string& text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("scenario is not valid JSON: ") + e.what());
  }
  Scenario s;
  s.base_dir = base_dir;
  s.orbit_catalog = std::string(CPD_DATA_DIR) + "/orbits.txt";
  s.user_families = kDefaultUserFamilies;
  s.schemes = {{"R-CPD", "P-CPD"}, {"R-CPD", "DFCP"}, {"LAA-PMM", "P-CPD"}, {"LAA-PMM", "DFCP"}};

  Reader top(j, "");
  top.allow({"name", "seed", "orbit_catalog", "visibility_trace", "integrator_step_tu", "time", "pointing",
             "terminals_per_satellite", "satellites", "ground_stations", "user_families", "r_users", "p_users",
             "rcpd", "weights", "baseline", "schemes", "sweep"});
  top.get("name", s.name);
  top.get("seed", s.seed);
  top.get("orbit_catalog", s.orbit_catalog);
  if (top.has("visibility_trace")) s.visibility_trace = Reader::as<std::string>(top.raw("visibility_trace"), "visibility_trace");
  top.get("integrator_step_tu", s.integrator_step);
  top.get("terminals_per_satellite", s.terminals_per_satellite);

  if (top.has("time")) {
    Reader t(top.raw("time"), "time");
    t.allow({"period_count", "period_length_min", "superframes_per_period", "switching_superframes",
             "slot_length_s"});
    t.get("period_count", s.grid.period_count);
    if (t.has("period_length_min"))
      s.grid.period_length =
          whole_seconds(60.0 * Reader::as<double>(t.raw("period_length_min"), "time.period_length_min"),
                        "time.period_length_min");
    t.get("superframes_per_period", s.grid.superframes_per_period);
    t.get("switching_superframes", s.grid.switching_superframes);
    if (t.has("slot_length_s"))
      s.grid.slot_length =
          whole_seconds(Reader::as<double>(t.raw("slot_length_s"), "time.slot_length_s"), "time.slot_length_s");
  }
  if (top.has("pointing")) {
    Reader p(top.raw("pointing"), "pointing");
    p.allow({"rl_half_cone_deg", "pl_half_cone_deg", "gs_half_cone_deg"});
    p.get("rl_half_cone_deg", s.pointing.rl_half_cone_deg);
    p.get("pl_half_cone_deg", s.pointing.pl_half_cone_deg);
    p.get("gs_half_cone_deg", s.pointing.gs_half_cone_deg);
  }
  if (top.has("satellites")) s.satellites = space_nodes(top.raw("satellites"), "satellites");
  if (top.has("ground_stations")) {
    const json& arr = top.raw("ground_stations");
    if (!arr.is_array()) throw ParseError("ground_stations: expected an array");
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const std::string f = "ground_stations[" + std::to_string(k) + "]";
      Reader r(arr[k], f);
      r.allow({"name", "latitude_deg", "longitude_deg"});
      if (!r.has("name") || !r.has("latitude_deg") || !r.has("longitude_deg"))
        throw ValidationError(f + ": needs name, latitude_deg and longitude_deg");
      GroundSpec g;
      r.get("name", g.name);
      r.get("latitude_deg", g.latitude_deg);
      r.get("longitude_deg", g.longitude_deg);
      s.ground_stations.push_back(std::move(g));
    }
  }
  if (top.has("user_families")) s.user_families = list<std::string>(top.raw("user_families"), "user_families");
  if (top.has("r_users")) s.r_users = users(top.raw("r_users"), "r_users");
  if (top.has("p_users")) s.p_users = users(top.raw("p_users"), "p_users");

  if (top.has("rcpd")) {
    Reader r(top.raw("rcpd"), "rcpd");
    r.allow({"access_window_periods", "ground_links", "penalty", "horizon_periods", "time_limit_s", "node_limit",
             "soft_access"});
    r.get("access_window_periods", s.rcpd.access_window);
    r.get("ground_links", s.rcpd.ground_links);
    r.get("penalty", s.rcpd.penalty);
    r.get("horizon_periods", s.rcpd.horizon);
    r.get("time_limit_s", s.rcpd.time_limit_s);
    r.get("node_limit", s.rcpd.node_limit);
    r.get("soft_access", s.rcpd.soft_access);
  }
  if (top.has("weights")) {
    Reader w(top.raw("weights"), "weights");
    w.allow({"C_u", "C_c", "C_r", "required_pl_per_superframe", "required_overrides", "distinct_partner_mode"});
    w.get("C_u", s.weights.service);
    w.get("C_c", s.weights.communication);
    w.get("C_r", s.weights.ranging);
    w.get("required_pl_per_superframe", s.weights.default_required);
    w.get("distinct_partner_mode", s.weights.distinct_partner_mode);
    if (w.has("required_overrides")) {
      const json& o = w.raw("required_overrides");
      if (!o.is_object()) throw ParseError("weights.required_overrides: expected an object");
      for (auto it = o.begin(); it != o.end(); ++it)
        s.required_by_name[it.key()] = Reader::as<int>(it.value(), "weights.required_overrides." + it.key());
    }
  }
  if (top.has("baseline")) {
    Reader b(top.raw("baseline"), "baseline");
    b.allow({"fairness_gain"});
    b.get("fairness_gain", s.baseline.fairness_gain);
  }
  s.baseline.seed = s.seed;
  if (top.has("schemes")) {
    const json& arr = top.raw("schemes");
    if (!arr.is_array()) throw ParseError("schemes: expected an array of [reflector, phased] pairs");
    s.schemes.clear();
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const auto pair = list<std::string>(arr[k], "schemes[" + std::to_string(k) + "]");
      if (pair.size() != 2) throw ParseError("schemes[" + std::to_string(k) + "]: expected two names");
      s.schemes.push_back({pair[0], pair[1]});
    }
  }
  if (top.has("sweep")) {
    Reader w(top.raw("sweep"), "sweep");
    w.allow({"p_users", "r_users", "ground_links"});
    if (w.has("p_users")) s.sweep.p_users = list<std::size_t>(w.raw("p_users"), "sweep.p_users");
    if (w.has("r_users")) s.sweep.r_users = list<std::size_t>(w.raw("r_users"), "sweep.r_users");
    if (w.has("ground_links")) s.sweep.ground_links = list<int>(w.raw("ground_links"), "sweep.ground_links");
  }
  validate_scenario(s);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const fs::path p(path);
  return parse_scenario(buf.str(), p.has_parent_path() ? p.parent_path().string() : ".");
}

void validate_scenario(const Scenario& s) {
  try {
    s.grid.validate();
  } catch (const ModelError& e) {
    throw ValidationError(std::string("time: ") + e.what());
  }
  try {
    s.pointing.validate();
  } catch (const ModelError& e) {
    throw ValidationError(std::string("pointing: ") + e.what());
  }
  if (s.terminals_per_satellite < 1) throw ValidationError("terminals_per_satellite: must be >= 1");
  if (!(s.integrator_step > 0.0)) throw ValidationError("integrator_step_tu: must be positive");
  if (s.user_families.empty()) throw ValidationError("user_families: must not be empty");
  if (s.rcpd.access_window < 1) throw ValidationError("rcpd.access_window_periods: must be >= 1");
  if (s.rcpd.ground_links < 0) throw ValidationError("rcpd.ground_links: must be >= 0");
  if (s.rcpd.horizon < static_cast<std::size_t>(s.rcpd.access_window))
    throw ValidationError("rcpd.horizon_periods: must be at least access_window_periods");
  if (!(s.rcpd.time_limit_s > 0.0)) throw ValidationError("rcpd.time_limit_s: must be positive");
  const long long ns = static_cast<long long>(s.satellites.size());
  if (s.rcpd.penalty <= ns * (ns - 1) / 2 * static_cast<long long>(s.rcpd.horizon))
    throw ValidationError("rcpd.penalty: must exceed inter-satellite pairs x horizon_periods");
  try {
    s.weights.validate();
  } catch (const ModelError& e) {
    throw ValidationError(std::string("weights: ") + e.what());
  }
  for (const auto& [name, count] : s.required_by_name)
    if (count < 0) throw ValidationError("weights.required_overrides." + name + ": must be >= 0");
  if (s.baseline.fairness_gain <= 0) throw ValidationError("baseline.fairness_gain: must be positive");
  for (const SchemePair& p : s.schemes) {
    if (p.reflector != "R-CPD" && p.reflector != "LAA-PMM")
      throw ValidationError("schemes: unknown reflector planner '" + p.reflector + "'");
    if (p.phased != "P-CPD" && p.phased != "DFCP")
      throw ValidationError("schemes: unknown phased-array planner '" + p.phased + "'");
  }
  for (int lg : s.sweep.ground_links)
    if (lg < 0) throw ValidationError("sweep.ground_links: must be >= 0");
}

NodeSet build_nodes(const Scenario& s) {
  std::vector<Node> nodes;
  for (const SpaceNodeSpec& sat : s.satellites)
    nodes.push_back(Node::satellite(sat.name, s.terminals_per_satellite, OrbitRef{sat.orbit, sat.phase}));
  for (Node& u : expand_users(s, s.r_users, false)) nodes.push_back(std::move(u));
  for (Node& u : expand_users(s, s.p_users, true)) nodes.push_back(std::move(u));
  for (const GroundSpec& g : s.ground_stations)
    nodes.push_back(Node::ground_station(g.name, GroundSite{g.latitude_deg, g.longitude_deg}));
  try {
    return NodeSet(std::move(nodes));
  } catch (const ModelError& e) {
    throw ValidationError(std::string("nodes: ") + e.what());
  }
}

pcpd::WeightParams bound_weights(const Scenario& s, const NodeSet& nodes) {
  pcpd::WeightParams wp = s.weights;
  wp.required.clear();
  for (const auto& [name, count] : s.required_by_name) {
    const auto id = nodes.find(name);
    if (!id || nodes.kind(*id) != NodeKind::PUser)
      throw ValidationError("weights.required_overrides: '" + name + "' is not a P-user");
    wp.required[*id] = count;
  }
  return wp;
}

void apply_environment(Scenario& s) {
  const char* v = std::getenv("CPD_SOLVER_TIME_LIMIT");
  if (!v || !*v) return;
  char* end = nullptr;
  const double limit = std::strtod(v, &end);
  if (end == v || *end != '\0' || !(limit > 0.0))
    throw ValidationError(std::string("CPD_SOLVER_TIME_LIMIT: expected a positive number of seconds, got '") + v +
                          "'");
  s.rcpd.time_limit_s = limit;
}

}  // namespace cpd::cli
