#pragma once

#include <cstdint>
#include <vector>

#include "cpd/rcpd/model.hpp"

namespace cpd::rcpd {

struct Solution {
  std::vector<std::uint8_t> values;  // per model variable
  std::vector<int> deficits;         // p(m) per model period
  long long objective = 0;
  bool optimal = true;
  std::uint64_t nodes = 0;
};

// Depth-first branch and bound. Variables are fixed in model order with the
// 1-branch first; a node is cut when its combinatorial upper bound does not
// beat the incumbent, so the optimum returned is the first one met in that
// order. Throws InfeasibleError when no assignment satisfies the cover rows.
Solution solve(const IlpModel& model, const RcpdParams& params);

}  // namespace cpd::rcpd
