#include "cpd/pcpd/weights.hpp"

#include <string>

namespace cpd::pcpd {

int WeightParams::required_for(NodeId user) const {
  const auto it = required.find(user);
  return it == required.end() ? default_required : it->second;
}

void WeightParams::validate() const {
  if (service <= 0 || communication <= 0 || ranging <= 0)
    throw ModelError("weights: C_u, C_c and C_r must be positive");
  if (default_required < 0) throw ModelError("weights: required PL count must be >= 0");
  for (const auto& [user, count] : required)
    if (count < 0) throw ModelError("weights: required PL count for node " + std::to_string(user) + " is negative");
}

TendencyState::TendencyState(const NodeSet& nodes, const AdjacencyMatrix& visibility)
    : n_(nodes.size()),
      access_(n_, 1),
      ground_(n_, 1),
      pair_(n_ * n_, 0),
      total_(n_, 0),
      distinct_(n_, 0),
      gbar_(n_, 0) {
  for (NodeId u : nodes.p_users())
    for (NodeId s : nodes.satellites())
      if (visibility(u, s)) ++gbar_[u];
}

void TendencyState::set_pair_count(NodeId i, NodeId j, int v) { pair_[i * n_ + j] = pair_[j * n_ + i] = v; }

void TendencyState::commit(const Matching& m, const NodeSet& nodes, const TopologyPartition& part) {
  std::vector<char> matched(n_, 0);
  std::vector<char> grounded(part.ugsat_sets.size(), 0);
  for (const NodePair& p : m) {
    if (pair_[p.a * n_ + p.b] == 0) {
      if (nodes.kind(p.a) == NodeKind::PUser) ++distinct_[p.a];
      if (nodes.kind(p.b) == NodeKind::PUser) ++distinct_[p.b];
    }
    ++pair_[p.a * n_ + p.b];
    ++pair_[p.b * n_ + p.a];
    if (nodes.kind(p.a) == NodeKind::PUser) ++total_[p.a];
    if (nodes.kind(p.b) == NodeKind::PUser) ++total_[p.b];
    matched[p.a] = matched[p.b] = 1;
    for (auto [x, y] : {std::pair{p.a, p.b}, std::pair{p.b, p.a}})
      if (nodes.is_satellite(x) && nodes.is_satellite(y) && part.is_ugsat(x) && part.is_gsat(y))
        grounded[static_cast<std::size_t>(part.ugsat_index[x])] = 1;
  }
  for (NodeId u : nodes.p_users()) access_[u] = matched[u] ? 1 : access_[u] + 1;
  for (std::size_t k = 0; k < part.ugsat_sets.size(); ++k)
    for (NodeId s : part.ugsat_sets[k]) ground_[s] = grounded[k] ? 1 : ground_[s] + 1;
}

UserCase user_case(NodeId user, NodeId sat, const TendencyState& st, const WeightParams& wp) {
  const int total = st.user_total(user);
  if (total >= wp.required_for(user)) return UserCase::C4;
  const int diversity = wp.distinct_partner_mode ? st.distinct_partners(user) : total;
  if (diversity >= st.visible_satellites(user)) return UserCase::C2;
  return st.pair_count(user, sat) == 0 ? UserCase::C1 : UserCase::C3;
}

std::int64_t user_weight(NodeId user, NodeId sat, const TendencyState& st, const WeightParams& wp) {
  switch (user_case(user, sat, st, wp)) {
    case UserCase::C1:
    case UserCase::C2:
      return st.access_tendency(user) * (wp.required_for(user) - st.user_total(user)) * wp.service;
    case UserCase::C3: return 1;
    case UserCase::C4: return 0;
  }
  return 0;
}

std::int64_t comm_weight(NodeId i, NodeId j, const TopologyPartition& part, const TendencyState& st,
                         const WeightParams& wp) {
  if (part.is_representative(i) && part.is_gsat(j)) return st.ground_tendency(i) * wp.communication;
  if (part.is_representative(j) && part.is_gsat(i)) return st.ground_tendency(j) * wp.communication;
  return 0;
}

std::int64_t ranging_weight(NodeId i, NodeId j, const AdjacencyMatrix& reflector_links, const TendencyState& st,
                            const WeightParams& wp) {
  if (st.pair_count(i, j) == 0 && !reflector_links(i, j)) return wp.ranging;
  return 0;
}

std::int64_t sat_weight(NodeId i, NodeId j, const TopologyPartition& part, const AdjacencyMatrix& reflector_links,
                        const TendencyState& st, const WeightParams& wp) {
  return comm_weight(i, j, part, st, wp) + ranging_weight(i, j, reflector_links, st, wp);
}

}  // namespace cpd::pcpd
