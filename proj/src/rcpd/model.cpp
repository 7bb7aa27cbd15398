#include "cpd/rcpd/model.hpp"

#include <algorithm>
#include <string>

namespace cpd::rcpd {

ReflectorParams RcpdParams::reflector() const {
  ReflectorParams p;
  p.terminals_per_satellite = terminals_per_satellite;
  p.access_window = access_window;
  p.ground_links = ground_links;
  p.penalty = penalty;
  return p;
}

void RcpdParams::validate(const NodeSet& nodes) const {
  if (terminals_per_satellite < 1) throw ModelError("rcpd: terminals_per_satellite must be >= 1");
  if (access_window < 1) throw ModelError("rcpd: access_window must be >= 1");
  if (ground_links < 0) throw ModelError("rcpd: ground_links must be >= 0");
  if (horizon < static_cast<std::size_t>(access_window))
    throw ModelError("rcpd: horizon must be at least access_window periods");
  if (!(time_limit_s > 0.0)) throw ModelError("rcpd: time_limit must be positive");
  const long long ns = static_cast<long long>(nodes.satellites().size());
  const long long isl = ns * (ns - 1) / 2;
  if (penalty <= isl * static_cast<long long>(horizon))
    throw ModelError("rcpd: penalty must exceed inter-satellite pairs x horizon (" +
                     std::to_string(isl * static_cast<long long>(horizon)) + ")");
}

long long IlpModel::objective(const std::vector<std::uint8_t>& values) const {
  long long obj = 0;
  for (std::size_t k = 0; k < vars.size(); ++k)
    if (values[k] && vars[k].kind == VarKind::SatSat) ++obj;
  for (int p : deficits(values)) obj -= penalty * p;
  return obj;
}

std::vector<int> IlpModel::deficits(const std::vector<std::uint8_t>& values) const {
  std::vector<int> out(period_count, ground_links);
  for (std::size_t k = 0; k < vars.size(); ++k)
    if (values[k] && vars[k].kind == VarKind::SatGround) --out[vars[k].period];
  for (int& p : out) p = std::max(p, 0);
  return out;
}

bool IlpModel::feasible(const std::vector<std::uint8_t>& values) const {
  for (std::size_t m = 0; m < period_count; ++m) {
    std::vector<int> deg(node_count, 0);
    for (std::size_t k = period_begin[m]; k < period_begin[m + 1]; ++k) {
      if (!values[k]) continue;
      ++deg[vars[k].a];
      ++deg[vars[k].b];
    }
    for (std::size_t i = 0; i < node_count; ++i)
      if (degree_cap[i] >= 0 && deg[i] > degree_cap[i]) return false;
  }
  for (const CoverRow& row : cover)
    if (std::none_of(row.vars.begin(), row.vars.end(), [&](std::size_t k) { return values[k] != 0; }))
      return false;
  return true;
}

std::vector<WaivedWindow> starved_windows(const VisibilitySet& vis, const NodeSet& nodes, int access_window) {
  std::vector<WaivedWindow> out;
  const std::size_t f = static_cast<std::size_t>(access_window);
  const std::size_t periods = vis.period.size();
  if (periods < f) return out;
  for (NodeId u : nodes.r_users()) {
    std::vector<char> sees(periods, 0);
    for (std::size_t m = 0; m < periods; ++m)
      for (NodeId s : nodes.satellites())
        if (vis.period[m](u, s)) {
          sees[m] = 1;
          break;
        }
    for (std::size_t first = 0; first + f <= periods; ++first)
      if (std::none_of(sees.begin() + first, sees.begin() + first + f, [](char c) { return c != 0; }))
        out.push_back({u, first, first + f - 1});
  }
  return out;
}

IlpModel build_model(const VisibilitySet& vis, const NodeSet& nodes, const RcpdParams& params,
                     PeriodRange window) {
  if (window.first + window.count > vis.period.size())
    throw ModelError("rcpd: model window exceeds the visibility horizon");
  IlpModel model;
  model.first_period = window.first;
  model.period_count = window.count;
  model.node_count = nodes.size();
  model.ground_links = params.ground_links;
  model.penalty = params.penalty;
  model.degree_cap.assign(nodes.size(), -1);
  for (NodeId s : nodes.satellites()) model.degree_cap[s] = params.terminals_per_satellite;
  for (NodeId u : nodes.r_users()) model.degree_cap[u] = 1;

  // user -> local period -> vars
  std::vector<std::vector<std::vector<std::size_t>>> user_vars(
      nodes.size(), std::vector<std::vector<std::size_t>>(window.count));
  model.period_begin.push_back(0);
  for (std::size_t lm = 0; lm < window.count; ++lm) {
    const AdjacencyMatrix& y = vis.period.at(window.first + lm);
    if (y.size() != nodes.size()) throw ModelError("rcpd: visibility dimension differs from node count");
    for (const NodePair& p : y.pairs()) {
      if (!reflector_capable(nodes, p.a, p.b)) continue;
      IlpVar v{lm, p.a, p.b, VarKind::SatSat};
      switch (nodes.kind(p.b)) {
        case NodeKind::Satellite: v.kind = VarKind::SatSat; break;
        case NodeKind::RUser: v.kind = VarKind::SatUser; break;
        default: v.kind = VarKind::SatGround; break;
      }
      if (v.kind == VarKind::SatUser) user_vars[p.b][lm].push_back(model.vars.size());
      model.vars.push_back(v);
    }
    model.period_begin.push_back(model.vars.size());
  }
  model.fixed.assign(model.vars.size(), -1);

  const std::size_t f = static_cast<std::size_t>(params.access_window);
  std::vector<WaivedWindow> starved;
  for (NodeId u : nodes.r_users()) {
    for (std::size_t first = 0; first + f <= window.count; ++first) {
      CoverRow row{u, first, first + f - 1, {}};
      for (std::size_t lm = first; lm < first + f; ++lm)
        row.vars.insert(row.vars.end(), user_vars[u][lm].begin(), user_vars[u][lm].end());
      if (row.vars.empty())
        starved.push_back({u, window.first + first, window.first + first + f - 1});
      else
        model.cover.push_back(std::move(row));
    }
  }
  if (!starved.empty()) {
    if (!params.soft_access) {
      std::string msg = "rcpd: access windows with no visible satellite:";
      for (const WaivedWindow& w : starved)
        msg += " " + nodes[w.user].name + "[" + std::to_string(w.first_period) + ".." +
               std::to_string(w.last_period) + "]";
      throw InfeasibleError(msg, starved);
    }
    model.waived = std::move(starved);
  }
  return model;
}

void add_tail_rows(IlpModel& model, NodeId user, int access_window) {
  const std::size_t f = static_cast<std::size_t>(access_window);
  const std::size_t count = model.period_count;
  for (std::size_t first = count >= f ? count - f + 1 : 0; first < count; ++first) {
    CoverRow row{user, first, count - 1, {}};
    for (std::size_t k = model.period_begin[first]; k < model.vars.size(); ++k)
      if (model.vars[k].kind == VarKind::SatUser && model.vars[k].b == user) row.vars.push_back(k);
    if (!row.vars.empty()) model.cover.push_back(std::move(row));
  }
}

void fix_period(IlpModel& model, std::size_t period, const AdjacencyMatrix& links) {
  for (std::size_t k = model.period_begin.at(period); k < model.period_begin.at(period + 1); ++k)
    model.fixed[k] = links(model.vars[k].a, model.vars[k].b) ? 1 : 0;
}

}  // namespace cpd::rcpd
