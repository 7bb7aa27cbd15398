// cpd: contact-plan design for reflector and phased-array terminals.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "cpd/cli/pipeline.hpp"
#include "cpd/cli/report.hpp"
#include "cpd/geometry/orbit_catalog.hpp"
#include "cpd/geometry/visibility.hpp"
#include "cpd/pcpd/planner.hpp"

namespace {

using namespace cpd;

enum ExitCode { kOk = 0, kOther = 1, kParse = 2, kValidation = 3, kInfeasible = 4 };

struct Options {
  std::string scenario;
  std::string visibility_trace;
  std::string out;
};

cli::Scenario load(const Options& o) {
  cli::Scenario s = cli::load_scenario(o.scenario);
  if (!o.visibility_trace.empty()) s.visibility_trace = std::filesystem::absolute(o.visibility_trace).string();
  cli::apply_environment(s);
  return s;
}

std::ostream& output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot write '" + path + "'");
  return file;
}

int cmd_propagate(const std::string& catalog_path, const std::string& orbit, double duration, double step,
                  std::size_t samples, const std::string& out_path) {
  const auto catalog = geometry::OrbitCatalog::load(catalog_path);
  const geometry::OrbitEntry& e = catalog.at(orbit);
  if (duration < 0) duration = e.period;
  if (samples < 1) samples = 1;
  std::ofstream file;
  std::ostream& out = output(out_path, file);
  out << "t,x,y,z,vx,vy,vz,jacobi\n";
  geometry::Cr3bpState s = e.initial;
  s.epoch = 0.0;
  char buf[256];
  for (std::size_t k = 0; k <= samples; ++k) {
    const double t = duration * static_cast<double>(k) / static_cast<double>(samples);
    s = geometry::propagate(s, t - s.epoch, step);
    std::snprintf(buf, sizeof buf, "%.9f,%.12e,%.12e,%.12e,%.12e,%.12e,%.12e,%.12e\n", t, s.position.x,
                  s.position.y, s.position.z, s.velocity.x, s.velocity.y, s.velocity.z, geometry::jacobi_constant(s));
    out << buf;
  }
  return kOk;
}

int cmd_visibility(const Options& o, const std::string& trace_out) {
  const cli::Scenario s = load(o);
  const NodeSet nodes = cli::build_nodes(s);
  if (!trace_out.empty()) {
    if (s.visibility_trace) throw cli::ValidationError("--write-trace needs geometry, not a trace input");
    const auto catalog = geometry::OrbitCatalog::load(s.resolve(s.orbit_catalog));
    const auto intervals = geometry::trace_from_geometry(
        nodes, s.grid, s.pointing, geometry::orbit_position_source(nodes, catalog, s.grid, s.integrator_step));
    std::ofstream t(trace_out);
    if (!t) throw std::runtime_error("cannot write '" + trace_out + "'");
    geometry::write_visibility_trace(t, intervals, nodes);
  }
  const VisibilitySet vis = cli::scenario_visibility(s, nodes);
  std::ofstream file;
  cli::write_visibility(output(o.out, file), vis, nodes);
  std::fprintf(stderr, "mean visible satellites per P-user: %.4f\n",
               geometry::mean_visible_satellites_per_puser(vis, nodes));
  return kOk;
}

int cmd_plan_r(const Options& o, const std::string& scheme) {
  const cli::Scenario s = load(o);
  const NodeSet nodes = cli::build_nodes(s);
  const VisibilitySet vis = cli::scenario_visibility(s, nodes);
  rcpd::HorizonStats stats;
  const ReflectorPlan plan = cli::make_reflector_plan(scheme, s, nodes, vis, &stats);
  cli::check_reflector_plan(plan, vis, nodes);
  std::filesystem::create_directories(o.out);
  std::ofstream p(std::filesystem::path(o.out) / ("rplan_" + cli::file_tag(scheme) + ".csv"));
  rcpd::write_reflector_plan(p, plan, nodes);
  std::ofstream d(std::filesystem::path(o.out) / ("deficits_" + cli::file_tag(scheme) + ".csv"));
  rcpd::write_deficits(d, plan, nodes);
  if (scheme == "R-CPD")
    std::fprintf(stderr, "windows %zu, truncated %zu, search nodes %llu\n", stats.windows, stats.truncated_windows,
                 static_cast<unsigned long long>(stats.nodes));
  return kOk;
}

int cmd_plan_p(const Options& o, const std::string& reflector, const std::string& scheme) {
  const cli::Scenario s = load(o);
  const NodeSet nodes = cli::build_nodes(s);
  const VisibilitySet vis = cli::scenario_visibility(s, nodes);
  const ReflectorPlan rplan = cli::make_reflector_plan(reflector, s, nodes, vis);
  cli::check_reflector_plan(rplan, vis, nodes);
  const PhasedArrayPlan pplan = cli::make_phased_plan(scheme, s, nodes, vis, rplan);
  cli::check_phased_plan(pplan, vis, nodes, s.grid);
  std::filesystem::create_directories(o.out);
  std::ofstream r(std::filesystem::path(o.out) / ("rplan_" + cli::file_tag(reflector) + ".csv"));
  rcpd::write_reflector_plan(r, rplan, nodes);
  std::ofstream p(std::filesystem::path(o.out) /
                  ("pplan_" + cli::file_tag(reflector) + "_" + cli::file_tag(scheme) + ".csv"));
  pcpd::write_phased_array_plan(p, pplan, nodes);
  return kOk;
}

int cmd_evaluate(const Options& o, const std::string& rplan_path, const std::string& pplan_path,
                 const std::string& reflector, const std::string& phased) {
  const cli::Scenario s = load(o);
  const NodeSet nodes = cli::build_nodes(s);
  std::ifstream rin(rplan_path), pin(pplan_path);
  if (!rin) throw cli::ParseError("cannot open reflector plan '" + rplan_path + "'");
  if (!pin) throw cli::ParseError("cannot open phased-array plan '" + pplan_path + "'");
  const ReflectorPlan rplan = cli::read_reflector_plan(rin, nodes, s.grid, s.rcpd.reflector(), reflector);
  const PhasedArrayPlan pplan = cli::read_phased_array_plan(pin, nodes, s.grid, phased);
  const VisibilitySet vis = cli::scenario_visibility(s, nodes);
  cli::check_reflector_plan(rplan, vis, nodes);
  cli::check_phased_plan(pplan, vis, nodes, s.grid);
  std::ofstream file;
  std::ostream& out = output(o.out, file);
  eval::write_report_header(out);
  eval::write_report_rows(out, eval::evaluate(s.name, rplan, pplan, nodes, s.grid));
  return kOk;
}

int cmd_run(const Options& o) {
  const cli::Scenario s = load(o);
  const cli::RunResult run = cli::run_scenario(s);
  cli::write_run(run, o.out);
  return kOk;
}

int cmd_sweep(const Options& o, unsigned jobs) {
  const cli::Scenario s = load(o);
  const auto cells = cli::sweep_cells(s);
  const auto runs = cli::run_cells(cells, jobs);
  cli::write_sweep(cells, runs, o.out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contact plan design for reflector and phased-array terminals"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--visibility-trace", o.visibility_trace, "Visibility intervals file replacing geometry");

  auto* prop = app.add_subcommand("propagate", "Propagate a catalog orbit and print states");
  std::string catalog = std::string(CPD_DATA_DIR) + "/orbits.txt", orbit, prop_out;
  double duration = -1.0, step = geometry::kDefaultStep;
  std::size_t samples = 100;
  prop->add_option("--catalog", catalog, "Orbit catalog file");
  prop->add_option("--orbit", orbit, "Catalog entry")->required();
  prop->add_option("--duration", duration, "Nondimensional duration (default: one period)");
  prop->add_option("--step", step, "Integrator step")->check(CLI::PositiveNumber);
  prop->add_option("--samples", samples, "Output samples");
  prop->add_option("--out", prop_out, "Output CSV (default stdout)");

  auto* vis = app.add_subcommand("visibility", "Compute visibility for a scenario");
  std::string trace_out;
  vis->add_option("scenario", o.scenario)->required();
  vis->add_option("--out", o.out, "Output CSV (default stdout)");
  vis->add_option("--write-trace", trace_out, "Also write per-slot visibility intervals");

  auto* plan_r = app.add_subcommand("plan-r", "Reflector plan");
  std::string r_scheme = "R-CPD";
  plan_r->add_option("scenario", o.scenario)->required();
  plan_r->add_option("--scheme", r_scheme)->check(CLI::IsMember({"R-CPD", "LAA-PMM"}));
  plan_r->add_option("--out", o.out)->required();

  auto* plan_p = app.add_subcommand("plan-p", "Phased-array plan on top of a reflector plan");
  std::string p_reflector = "R-CPD", p_scheme = "P-CPD";
  plan_p->add_option("scenario", o.scenario)->required();
  plan_p->add_option("--reflector", p_reflector)->check(CLI::IsMember({"R-CPD", "LAA-PMM"}));
  plan_p->add_option("--scheme", p_scheme)->check(CLI::IsMember({"P-CPD", "DFCP"}));
  plan_p->add_option("--out", o.out)->required();

  auto* evaluate = app.add_subcommand("evaluate", "Metrics for exported plans");
  std::string rplan_path, pplan_path, e_reflector = "R-CPD", e_phased = "P-CPD";
  evaluate->add_option("scenario", o.scenario)->required();
  evaluate->add_option("--rplan", rplan_path)->required();
  evaluate->add_option("--pplan", pplan_path)->required();
  evaluate->add_option("--reflector", e_reflector);
  evaluate->add_option("--scheme", e_phased);
  evaluate->add_option("--out", o.out, "Output CSV (default stdout)");

  auto* run = app.add_subcommand("run", "Every scheme pair of the scenario");
  run->add_option("scenario", o.scenario)->required();
  run->add_option("--out", o.out)->required();

  auto* sweep = app.add_subcommand("sweep", "Scenario grid over P-users, R-users and ground links");
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  sweep->add_option("scenario", o.scenario)->required();
  sweep->add_option("--out", o.out)->required();
  sweep->add_option("--jobs", jobs)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kParse;
  }

  try {
    if (*prop) return cmd_propagate(catalog, orbit, duration, step, samples, prop_out);
    if (*vis) return cmd_visibility(o, trace_out);
    if (*plan_r) return cmd_plan_r(o, r_scheme);
    if (*plan_p) return cmd_plan_p(o, p_reflector, p_scheme);
    if (*evaluate) return cmd_evaluate(o, rplan_path, pplan_path, e_reflector, e_phased);
    if (*run) return cmd_run(o);
    if (*sweep) return cmd_sweep(o, jobs);
  } catch (const rcpd::InfeasibleError& e) {
    std::fprintf(stderr, "infeasible: %s\n", e.what());
    return kInfeasible;
  } catch (const cli::ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return kParse;
  } catch (const geometry::CatalogError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return kParse;
  } catch (const geometry::TraceError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return kParse;
  } catch (const cli::ValidationError& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return kValidation;
  } catch (const ModelError& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return kValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kOther;
  }
  return kOther;
}
