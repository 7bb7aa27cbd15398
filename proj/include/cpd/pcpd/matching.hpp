#pragma once

#include <cstdint>
#include <vector>

#include "cpd/core/types.hpp"

namespace cpd::pcpd {

struct WeightedEdge {
  NodeId u = 0;
  NodeId v = 0;
  std::int64_t weight = 0;
};

// Maximum-weight matching on a general graph (Edmonds' blossom method with
// primal-dual updates, O(n^3)). Edges of weight 0 are dropped before solving;
// negative weights are rejected with std::invalid_argument. The result is
// sorted. For a fixed edge list the output is deterministic.
Matching max_weight_matching(std::size_t vertex_count, const std::vector<WeightedEdge>& edges);

std::int64_t matching_weight(const Matching& m, const std::vector<WeightedEdge>& edges);

}  // namespace cpd::pcpd
