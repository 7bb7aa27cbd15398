#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "cpd/core/partition.hpp"
#include "cpd/core/types.hpp"

namespace cpd::pcpd {

struct WeightParams {
  std::int64_t service = 1;         // C_u
  std::int64_t communication = 8;   // C_c
  std::int64_t ranging = 30;        // C_r
  int default_required = 4;         // L^u for users without an override
  std::map<NodeId, int> required;   // per-user overrides
  // Compare distinct partners (instead of the total PL count) against the
  // number of visible satellites when picking the user-weight branch.
  bool distinct_partner_mode = false;

  int required_for(NodeId user) const;
  void validate() const;  // throws ModelError
};

// Per-superframe counters. Everything resets at the superframe boundary.
class TendencyState {
 public:
  TendencyState() = default;
  TendencyState(const NodeSet& nodes, const AdjacencyMatrix& visibility);

  std::int64_t access_tendency(NodeId user) const { return access_[user]; }     // I_u
  std::int64_t ground_tendency(NodeId sat) const { return ground_[sat]; }      // I_c
  int pair_count(NodeId i, NodeId j) const { return pair_[i * n_ + j]; }        // L_{i,j,t}
  int user_total(NodeId user) const { return total_[user]; }                     // L_{i,s,t}
  int distinct_partners(NodeId user) const { return distinct_[user]; }
  int visible_satellites(NodeId user) const { return gbar_[user]; }             // Gbar(i)

  // Records slot t's matching and advances both tendencies to t + 1.
  void commit(const Matching& m, const NodeSet& nodes, const TopologyPartition& part);

  // For tests.
  void set_access_tendency(NodeId user, std::int64_t v) { access_[user] = v; }
  void set_ground_tendency(NodeId sat, std::int64_t v) { ground_[sat] = v; }
  void set_pair_count(NodeId i, NodeId j, int v);

 private:
  std::size_t n_ = 0;
  std::vector<std::int64_t> access_, ground_;
  std::vector<int> pair_, total_, distinct_, gbar_;
};

enum class UserCase { C1, C2, C3, C4 };

UserCase user_case(NodeId user, NodeId sat, const TendencyState& st, const WeightParams& wp);
std::int64_t user_weight(NodeId user, NodeId sat, const TendencyState& st, const WeightParams& wp);
std::int64_t comm_weight(NodeId i, NodeId j, const TopologyPartition& part, const TendencyState& st,
                         const WeightParams& wp);
// `reflector_links` holds the RLs up in the current superframe.
std::int64_t ranging_weight(NodeId i, NodeId j, const AdjacencyMatrix& reflector_links, const TendencyState& st,
                            const WeightParams& wp);
std::int64_t sat_weight(NodeId i, NodeId j, const TopologyPartition& part, const AdjacencyMatrix& reflector_links,
                        const TendencyState& st, const WeightParams& wp);

}  // namespace cpd::pcpd
