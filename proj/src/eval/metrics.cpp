#include "cpd/eval/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <set>

#include "cpd/core/partition.hpp"

namespace cpd::eval {

double DelaySamples::mean() const {
  if (delays.empty()) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(std::accumulate(delays.begin(), delays.end(), 0L)) /
         static_cast<double>(delays.size());
}

namespace {

// Component labels over satellites and GSs joined by reflector links. Users
// never relay. `grounded[c]` marks components holding a GS.
struct Components {
  std::vector<int> label;  // -1 for nodes outside satellites / GSs
  std::vector<char> grounded;
};

Components rl_components(const AdjacencyMatrix& links, const NodeSet& nodes) {
  const std::size_t n = nodes.size();
  Components c;
  c.label.assign(n, -1);
  auto relays = [&](NodeId v) {
    const NodeKind k = nodes.kind(v);
    return k == NodeKind::Satellite || k == NodeKind::GroundStation;
  };
  int next = 0;
  std::vector<NodeId> stack;
  for (NodeId start = 0; start < n; ++start) {
    if (!relays(start) || c.label[start] >= 0) continue;
    bool ground = false;
    c.label[start] = next;
    stack.assign(1, start);
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      ground = ground || nodes.kind(v) == NodeKind::GroundStation;
      for (NodeId w = 0; w < n; ++w)
        if (links(v, w) && relays(w) && c.label[w] < 0) {
          c.label[w] = next;
          stack.push_back(w);
        }
    }
    c.grounded.push_back(ground ? 1 : 0);
    ++next;
  }
  return c;
}

// Extends `held` across the RL components it touches; true when one of them
// is grounded.
bool rl_closure(std::vector<char>& held, const Components& c) {
  std::vector<char> comp_held(c.grounded.size(), 0);
  for (std::size_t v = 0; v < held.size(); ++v)
    if (held[v] && c.label[v] >= 0) comp_held[static_cast<std::size_t>(c.label[v])] = 1;
  bool delivered = false;
  for (std::size_t k = 0; k < comp_held.size(); ++k) delivered = delivered || (comp_held[k] && c.grounded[k]);
  for (std::size_t v = 0; v < held.size(); ++v)
    if (c.label[v] >= 0 && comp_held[static_cast<std::size_t>(c.label[v])]) held[v] = 1;
  return delivered;
}

}  // namespace

DelaySamples r_delay(const ReflectorPlan& rplan, const NodeSet& nodes) {
  DelaySamples out;
  const std::size_t periods = rplan.links.size();
  std::vector<Components> comps;
  comps.reserve(periods);
  for (const AdjacencyMatrix& x : rplan.links) comps.push_back(rl_components(x, nodes));

  for (std::size_t m = 0; m < periods; ++m) {
    for (NodeId u : nodes.r_users()) {
      for (NodeId s : nodes.satellites()) {
        if (!rplan.links[m](u, s)) continue;
        std::vector<char> held(nodes.size(), 0);
        held[s] = 1;
        bool done = false;
        for (std::size_t k = m; k < periods && !done; ++k) {
          if (rl_closure(held, comps[k])) {
            out.delays.push_back(static_cast<long>(k - m + 1));
            done = true;
          }
        }
        if (!done) ++out.censored;
      }
    }
  }
  return out;
}

PDelay p_delay(const PhasedArrayPlan& pplan, const ReflectorPlan& rplan, const NodeSet& nodes,
               const TimeGrid& grid) {
  PDelay out;
  const std::size_t n = nodes.size();
  for (std::size_t g = 0; g < pplan.superframes.size(); ++g) {
    const std::size_t m = g / grid.superframes_per_period;
    const AdjacencyMatrix rl = active_reflector_links(rplan, grid, m, g % grid.superframes_per_period);
    const Components c = rl_components(rl, nodes);
    const auto& slots = pplan.superframes[g].slots;

    std::vector<NodeId> origins(nodes.satellites().begin(), nodes.satellites().end());
    origins.insert(origins.end(), nodes.p_users().begin(), nodes.p_users().end());
    for (NodeId origin : origins) {
      std::vector<char> held(n, 0);
      held[origin] = 1;
      const bool is_sat = nodes.is_satellite(origin);
      DelaySamples* bucket = &out.puser;
      if (rl_closure(held, c)) {
        // Grounded at generation time.
        out.gsat.delays.push_back(0);
        continue;
      }
      if (is_sat) bucket = &out.ugsat;
      bool done = false;
      for (std::size_t t = 0; t < slots.size() && !done; ++t) {
        const std::vector<char> before = held;
        for (const NodePair& p : slots[t]) {
          if (before[p.a]) held[p.b] = 1;
          if (before[p.b]) held[p.a] = 1;
        }
        if (rl_closure(held, c)) {
          bucket->delays.push_back(static_cast<long>(t));
          done = true;
        }
      }
      if (!done) ++bucket->censored;
    }
  }
  return out;
}

std::vector<int> ranging_partners(const PhasedArrayPlan& pplan, const ReflectorPlan& rplan, const NodeSet& nodes,
                                  const TimeGrid& grid) {
  std::vector<int> out;
  const auto sats = nodes.satellites();
  for (std::size_t g = 0; g < pplan.superframes.size(); ++g) {
    const std::size_t m = g / grid.superframes_per_period;
    const AdjacencyMatrix rl = active_reflector_links(rplan, grid, m, g % grid.superframes_per_period);
    std::set<NodePair> partners;
    for (const Matching& slot : pplan.superframes[g].slots)
      for (const NodePair& p : slot)
        if (nodes.is_satellite(p.a) && nodes.is_satellite(p.b)) partners.insert(p);
    for (std::size_t i = 0; i < sats.size(); ++i)
      for (std::size_t j = i + 1; j < sats.size(); ++j)
        if (rl(sats[i], sats[j])) partners.insert(NodePair(sats[i], sats[j]));
    for (NodeId s : sats) {
      int count = 0;
      for (const NodePair& p : partners) count += (p.a == s || p.b == s) ? 1 : 0;
      out.push_back(count);
    }
  }
  return out;
}

double ranging_count(const PhasedArrayPlan& pplan, const ReflectorPlan& rplan, const NodeSet& nodes,
                     const TimeGrid& grid) {
  const std::vector<int> v = ranging_partners(pplan, rplan, nodes, grid);
  if (v.empty()) return 0.0;
  return static_cast<double>(std::accumulate(v.begin(), v.end(), 0L)) / static_cast<double>(v.size());
}

UtilizationComposition utilization_and_composition(const PhasedArrayPlan& pplan, const NodeSet& nodes) {
  UtilizationComposition out;
  std::size_t slots = 0, engaged = 0, ss = 0, us = 0;
  for (const SuperframePlan& sf : pplan.superframes) {
    for (const Matching& m : sf.slots) {
      ++slots;
      for (const NodePair& p : m) {
        const bool a = nodes.is_satellite(p.a), b = nodes.is_satellite(p.b);
        engaged += (a ? 1 : 0) + (b ? 1 : 0);
        if (a && b)
          ++ss;
        else
          ++us;
      }
    }
  }
  const std::size_t nsat = nodes.satellites().size();
  if (slots > 0 && nsat > 0) out.utilization = static_cast<double>(engaged) / static_cast<double>(nsat * slots);
  if (!pplan.superframes.empty()) {
    out.sat_sat_per_superframe = static_cast<double>(ss) / static_cast<double>(pplan.superframes.size());
    out.user_sat_per_superframe = static_cast<double>(us) / static_cast<double>(pplan.superframes.size());
  }
  return out;
}

MetricReport evaluate(const std::string& scenario, const ReflectorPlan& rplan, const PhasedArrayPlan& pplan,
                      const NodeSet& nodes, const TimeGrid& grid) {
  MetricReport r;
  r.scenario = scenario;
  r.scheme = rplan.scheme + "+" + pplan.scheme;
  const DelaySamples rd = r_delay(rplan, nodes);
  r.r_user_delay = rd.mean();
  r.r_delivered = rd.delays.size();
  r.r_censored = rd.censored;
  const PDelay pd = p_delay(pplan, rplan, nodes, grid);
  r.ugsat_delay = pd.ugsat.mean();
  r.ugsat_delivered = pd.ugsat.delays.size();
  r.ugsat_censored = pd.ugsat.censored;
  r.puser_delay = pd.puser.mean();
  r.puser_delivered = pd.puser.delays.size();
  r.puser_censored = pd.puser.censored;
  r.ranging_links_per_sat = ranging_count(pplan, rplan, nodes, grid);
  const UtilizationComposition uc = utilization_and_composition(pplan, nodes);
  r.link_utilization = uc.utilization;
  r.pl_sat_sat = uc.sat_sat_per_superframe;
  r.pl_user_sat = uc.user_sat_per_superframe;
  for (int d : rplan.deficits) r.ground_deficit_total += d;
  return r;
}

void write_report_header(std::ostream& out) { out << "scenario,scheme,metric,value\n"; }

void write_report_rows(std::ostream& out, const MetricReport& r) {
  auto row = [&](const char* metric, double v) {
    char buf[64];
    if (std::isnan(v))
      std::snprintf(buf, sizeof buf, "nan");
    else
      std::snprintf(buf, sizeof buf, "%.6f", v);
    out << r.scenario << ',' << r.scheme << ',' << metric << ',' << buf << '\n';
  };
  auto count = [&](const char* metric, std::size_t v) {
    out << r.scenario << ',' << r.scheme << ',' << metric << ',' << v << '\n';
  };
  row("r_user_delay_periods", r.r_user_delay);
  count("r_bundles_delivered", r.r_delivered);
  count("r_bundles_censored", r.r_censored);
  row("ugsat_delay_slots", r.ugsat_delay);
  count("ugsat_bundles_delivered", r.ugsat_delivered);
  count("ugsat_bundles_censored", r.ugsat_censored);
  row("puser_delay_slots", r.puser_delay);
  count("puser_bundles_delivered", r.puser_delivered);
  count("puser_bundles_censored", r.puser_censored);
  row("ranging_links_per_sat", r.ranging_links_per_sat);
  row("link_utilization", r.link_utilization);
  row("pl_sat_sat_per_superframe", r.pl_sat_sat);
  row("pl_user_sat_per_superframe", r.pl_user_sat);
  count("ground_deficit_total", static_cast<std::size_t>(r.ground_deficit_total));
}

}  // namespace cpd::eval
