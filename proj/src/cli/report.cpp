#include "cpd/cli/report.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cpd/pcpd/planner.hpp"

namespace cpd::cli {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

NodeId node_named(const NodeSet& nodes, const std::string& name, int lineno) {
  const auto id = nodes.find(name);
  if (!id) throw ParseError("plan line " + std::to_string(lineno) + ": unknown node '" + name + "'");
  return *id;
}

std::size_t index_field(const std::string& v, int lineno) {
  std::size_t pos = 0;
  unsigned long long x = 0;
  try {
    x = std::stoull(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size()) throw ParseError("plan line " + std::to_string(lineno) + ": bad index '" + v + "'");
  return static_cast<std::size_t>(x);
}

}  // namespace

std::string file_tag(const std::string& scheme) {
  std::string out;
  for (char c : scheme) out += std::isalnum(static_cast<unsigned char>(c)) ? static_cast<char>(std::tolower(c)) : '_';
  return out;
}

void write_visibility(std::ostream& out, const VisibilitySet& vis, const NodeSet& nodes) {
  out << "layer,index,node_i,node_j\n";
  for (std::size_t m = 0; m < vis.period.size(); ++m)
    for (const NodePair& p : vis.period[m].pairs())
      out << "period," << m << ',' << nodes[p.a].name << ',' << nodes[p.b].name << '\n';
  for (std::size_t g = 0; g < vis.superframe.size(); ++g)
    for (const NodePair& p : vis.superframe[g].pairs())
      out << "superframe," << g << ',' << nodes[p.a].name << ',' << nodes[p.b].name << '\n';
}

void write_run(const RunResult& run, const std::string& dir) {
  fs::create_directories(dir);
  for (const auto& [name, plan] : run.reflector_plans) {
    auto out = open_out(fs::path(dir) / ("rplan_" + file_tag(name) + ".csv"));
    rcpd::write_reflector_plan(out, plan, run.nodes);
    auto def = open_out(fs::path(dir) / ("deficits_" + file_tag(name) + ".csv"));
    rcpd::write_deficits(def, plan, run.nodes);
  }
  auto report = open_out(fs::path(dir) / "report.csv");
  eval::write_report_header(report);
  for (const SchemeResult& r : run.results) {
    auto out = open_out(fs::path(dir) /
                        ("pplan_" + file_tag(r.schemes.reflector) + "_" + file_tag(r.schemes.phased) + ".csv"));
    pcpd::write_phased_array_plan(out, r.pplan, run.nodes);
    eval::write_report_rows(report, r.report);
  }
}

void write_sweep(const std::vector<SweepCell>& cells, const std::vector<RunResult>& runs, const std::string& dir) {
  fs::create_directories(dir);
  auto report = open_out(fs::path(dir) / "sweep_report.csv");
  eval::write_report_header(report);
  for (std::size_t k = 0; k < cells.size(); ++k) {
    write_run(runs[k], (fs::path(dir) / cells[k].label).string());
    for (const SchemeResult& r : runs[k].results) eval::write_report_rows(report, r.report);
  }
}

ReflectorPlan read_reflector_plan(std::istream& in, const NodeSet& nodes, const TimeGrid& grid,
                                  const ReflectorParams& params, const std::string& scheme) {
  ReflectorPlan plan;
  plan.scheme = scheme;
  plan.params = params;
  plan.links.assign(grid.period_count, AdjacencyMatrix(nodes.size()));
  std::string line;
  int lineno = 0;
  if (!std::getline(in, line) || line.rfind("period,node_i,node_j", 0) != 0)
    throw ParseError("reflector plan: missing 'period,node_i,node_j,...' header");
  lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() < 3) throw ParseError("plan line " + std::to_string(lineno) + ": expected period,node_i,node_j");
    const std::size_t m = index_field(cells[0], lineno);
    if (m >= grid.period_count) throw ParseError("plan line " + std::to_string(lineno) + ": period out of range");
    plan.links[m].set(node_named(nodes, cells[1], lineno), node_named(nodes, cells[2], lineno), true);
  }
  plan.deficits.assign(grid.period_count, 0);
  for (std::size_t m = 0; m < grid.period_count; ++m) {
    int ground = 0;
    for (NodeId s : nodes.satellites())
      for (NodeId g : nodes.ground_stations()) ground += plan.links[m](s, g) ? 1 : 0;
    plan.deficits[m] = std::max(0, params.ground_links - ground);
  }
  return plan;
}

PhasedArrayPlan read_phased_array_plan(std::istream& in, const NodeSet& nodes, const TimeGrid& grid,
                                       const std::string& scheme) {
  PhasedArrayPlan plan;
  plan.scheme = scheme;
  plan.superframes_per_period = grid.superframes_per_period;
  plan.superframes.assign(grid.superframe_count(), SuperframePlan{});
  for (auto& sf : plan.superframes) sf.slots.assign(grid.slots_per_superframe(), Matching{});
  std::string line;
  int lineno = 0;
  if (!std::getline(in, line) || line.rfind("period,superframe,slot,node_i,node_j", 0) != 0)
    throw ParseError("phased-array plan: missing 'period,superframe,slot,node_i,node_j' header");
  lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 5)
      throw ParseError("plan line " + std::to_string(lineno) + ": expected period,superframe,slot,node_i,node_j");
    const std::size_t m = index_field(cells[0], lineno);
    const std::size_t s = index_field(cells[1], lineno);
    const std::size_t t = index_field(cells[2], lineno);
    if (m >= grid.period_count || s >= grid.superframes_per_period || t == 0 || t > grid.slots_per_superframe())
      throw ParseError("plan line " + std::to_string(lineno) + ": index out of range");
    plan.superframes[m * grid.superframes_per_period + s].slots[t - 1].emplace_back(
        node_named(nodes, cells[3], lineno), node_named(nodes, cells[4], lineno));
  }
  for (auto& sf : plan.superframes)
    for (auto& slot : sf.slots) std::sort(slot.begin(), slot.end());
  return plan;
}

}  // namespace cpd::cli
