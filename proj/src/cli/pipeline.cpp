#include "cpd/cli/pipeline.hpp"

#include <atomic>
#include <exception>
#include <fstream>
#include <thread>

#include "cpd/baselines/dfcp.hpp"
#include "cpd/baselines/laa_pmm.hpp"
#include "cpd/geometry/orbit_catalog.hpp"
#include "cpd/pcpd/planner.hpp"

namespace cpd::cli {

VisibilitySet scenario_visibility(const Scenario& s, const NodeSet& nodes) {
  if (s.visibility_trace) {
    const std::string path = s.resolve(*s.visibility_trace);
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open visibility trace '" + path + "'");
    return geometry::visibility_from_trace(nodes, s.grid, geometry::parse_visibility_trace(in, nodes));
  }
  const geometry::OrbitCatalog catalog = geometry::OrbitCatalog::load(s.resolve(s.orbit_catalog));
  for (const Node& n : nodes.all())
    if (const auto* o = std::get_if<OrbitRef>(&n.trajectory))
      if (!catalog.contains(o->orbit))
        throw ValidationError("node '" + n.name + "': orbit '" + o->orbit + "' is not in the catalog");
  return geometry::compute_visibility(nodes, catalog, s.grid, s.pointing, s.integrator_step);
}

ReflectorPlan make_reflector_plan(const std::string& scheme, const Scenario& s, const NodeSet& nodes,
                                  const VisibilitySet& vis, rcpd::HorizonStats* stats) {
  if (scheme == "R-CPD") return rcpd::plan_horizon(vis, nodes, s.rcpd, stats);
  if (scheme == "LAA-PMM") return baselines::laa_pmm_plan(vis, nodes, s.rcpd.reflector());
  throw ValidationError("unknown reflector planner '" + scheme + "'");
}

PhasedArrayPlan make_phased_plan(const std::string& scheme, const Scenario& s, const NodeSet& nodes,
                                 const VisibilitySet& vis, const ReflectorPlan& rplan) {
  const pcpd::WeightParams wp = bound_weights(s, nodes);
  if (scheme == "P-CPD") return pcpd::plan_phased_array(vis, rplan, nodes, s.grid, wp, s.seed);
  if (scheme == "DFCP") return baselines::dfcp_plan(vis, nodes, s.grid, wp, s.baseline);
  throw ValidationError("unknown phased-array planner '" + scheme + "'");
}

namespace {

[[noreturn]] void report_violations(const std::string& what, const std::vector<Violation>& v) {
  std::string msg = what + " failed validation:";
  for (std::size_t k = 0; k < v.size() && k < 10; ++k)
    msg += std::string(" [") + to_string(v[k].constraint) + " period " + std::to_string(v[k].period) + " " +
           v[k].detail + "]";
  throw std::logic_error(msg);
}

}  // namespace

void check_reflector_plan(const ReflectorPlan& plan, const VisibilitySet& vis, const NodeSet& nodes) {
  const auto v = validate_reflector_plan(plan, vis, nodes, plan.scheme == "R-CPD");
  if (!v.empty()) report_violations(plan.scheme + " plan", v);
}

void check_phased_plan(const PhasedArrayPlan& plan, const VisibilitySet& vis, const NodeSet& nodes,
                       const TimeGrid& grid) {
  const auto v = validate_phased_array_plan(plan, vis, nodes, grid);
  if (!v.empty()) report_violations(plan.scheme + " plan", v);
}

RunResult run_scenario(const Scenario& s) {
  RunResult out;
  out.nodes = build_nodes(s);
  out.vis = scenario_visibility(s, out.nodes);
  for (const SchemePair& pair : s.schemes) {
    std::size_t index = out.reflector_plans.size();
    for (std::size_t k = 0; k < out.reflector_plans.size(); ++k)
      if (out.reflector_plans[k].first == pair.reflector) index = k;
    if (index == out.reflector_plans.size()) {
      ReflectorPlan plan = make_reflector_plan(pair.reflector, s, out.nodes, out.vis);
      check_reflector_plan(plan, out.vis, out.nodes);
      out.reflector_plans.emplace_back(pair.reflector, std::move(plan));
    }
    const ReflectorPlan& rplan = out.reflector_plans[index].second;
    SchemeResult r;
    r.schemes = pair;
    r.rplan_index = index;
    r.pplan = make_phased_plan(pair.phased, s, out.nodes, out.vis, rplan);
    check_phased_plan(r.pplan, out.vis, out.nodes, s.grid);
    r.report = eval::evaluate(s.name, rplan, r.pplan, out.nodes, s.grid);
    out.results.push_back(std::move(r));
  }
  return out;
}

std::vector<SweepCell> sweep_cells(const Scenario& base) {
  auto axis = [](const auto& values, auto fallback) {
    using T = decltype(fallback);
    std::vector<std::optional<T>> out;
    if (values.empty()) out.push_back(std::nullopt);
    for (const auto& v : values) out.push_back(static_cast<T>(v));
    return out;
  };
  std::vector<SweepCell> cells;
  for (const auto& up : axis(base.sweep.p_users, std::size_t{0}))
    for (const auto& ur : axis(base.sweep.r_users, std::size_t{0}))
      for (const auto& lg : axis(base.sweep.ground_links, int{0})) {
        SweepCell c;
        c.scenario = base;
        std::string label;
        if (up) {
          c.scenario.p_users = UserSpec{{}, *up};
          label += "up" + std::to_string(*up);
        }
        if (ur) {
          c.scenario.r_users = UserSpec{{}, *ur};
          label += std::string(label.empty() ? "" : "_") + "ur" + std::to_string(*ur);
        }
        if (lg) {
          c.scenario.rcpd.ground_links = *lg;
          label += std::string(label.empty() ? "" : "_") + "lg" + std::to_string(*lg);
        }
        if (label.empty()) label = "base";
        c.label = label;
        c.scenario.name = base.name + "/" + label;
        cells.push_back(std::move(c));
      }
  return cells;
}

std::vector<RunResult> run_cells(const std::vector<SweepCell>& cells, unsigned jobs) {
  std::vector<RunResult> results(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < cells.size(); k = next++) {
      try {
        results[k] = run_scenario(cells[k].scenario);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(cells.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

}  // namespace cpd::cli
