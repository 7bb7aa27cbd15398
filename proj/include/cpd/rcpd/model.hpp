#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cpd/core/types.hpp"

namespace cpd::rcpd {

struct RcpdParams {
  int terminals_per_satellite = 2;  // r
  int access_window = 2;            // f
  int ground_links = 2;             // L_G
  long long penalty = 1000;         // P
  std::size_t horizon = 6;          // periods per rolling window
  double time_limit_s = 60.0;       // wall clock per window solve
  // Search-node budget per window solve. Unlike the wall clock it keeps
  // truncated searches reproducible. 0 disables it.
  std::uint64_t node_limit = 2'000'000;
  // Windows in which a user sees no satellite at all are waived and reported
  // instead of making the model infeasible.
  bool soft_access = true;

  ReflectorParams reflector() const;
  // Throws ModelError. `nodes` is used for the penalty dominance check.
  void validate(const NodeSet& nodes) const;
};

enum class VarKind : std::uint8_t { SatSat, SatUser, SatGround };

struct IlpVar {
  std::size_t period = 0;  // model-local
  NodeId a = 0;            // a < b; a is always a satellite
  NodeId b = 0;
  VarKind kind = VarKind::SatSat;
};

// Sum over `vars` >= 1 (an access window of one R-user).
struct CoverRow {
  NodeId user = 0;
  std::size_t first_period = 0;  // model-local, inclusive
  std::size_t last_period = 0;
  std::vector<std::size_t> vars;
};

// Binary x per visible unordered pair and period, plus an implicit integer
// slack p(m) = max(0, L_G - ground links). Objective:
//   sum x(sat, sat) - P * sum p(m).
struct IlpModel {
  std::size_t first_period = 0;  // global index of model period 0
  std::size_t period_count = 0;
  std::size_t node_count = 0;
  std::vector<IlpVar> vars;              // period-major, pair-index minor
  std::vector<std::size_t> period_begin; // size period_count + 1
  std::vector<int> degree_cap;           // per node; -1 = uncapped
  int ground_links = 0;
  long long penalty = 0;
  std::vector<CoverRow> cover;
  std::vector<WaivedWindow> waived;      // global periods
  std::vector<std::int8_t> fixed;        // per var: -1 free, else 0/1

  // Objective of a full assignment, deficits included.
  long long objective(const std::vector<std::uint8_t>& values) const;
  std::vector<int> deficits(const std::vector<std::uint8_t>& values) const;
  // Degree caps and cover rows; fixed values are not checked.
  bool feasible(const std::vector<std::uint8_t>& values) const;
};

class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& what, std::vector<WaivedWindow> windows)
      : std::runtime_error(what), windows_(std::move(windows)) {}
  const std::vector<WaivedWindow>& windows() const { return windows_; }

 private:
  std::vector<WaivedWindow> windows_;
};

struct PeriodRange {
  std::size_t first = 0;
  std::size_t count = 0;
};

// Access windows of `user` with no visible satellite in any of their periods.
std::vector<WaivedWindow> starved_windows(const VisibilitySet& vis, const NodeSet& nodes, int access_window);

// Builds the model over `window`. Cover rows are emitted for every length-f
// window fully inside the range. Starved windows are waived when
// params.soft_access is set and raise InfeasibleError otherwise.
IlpModel build_model(const VisibilitySet& vis, const NodeSet& nodes, const RcpdParams& params,
                     PeriodRange window);

// Adds a row over the in-range periods of each of `user`'s windows that start
// inside the model and end past it. Rows with no variable are skipped.
void add_tail_rows(IlpModel& model, NodeId user, int access_window);

// Pins every variable of model-local period `period` to the links in `links`.
void fix_period(IlpModel& model, std::size_t period, const AdjacencyMatrix& links);

}  // namespace cpd::rcpd
