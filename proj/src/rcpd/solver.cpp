#include "cpd/rcpd/solver.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <string>

namespace cpd::rcpd {

namespace {

constexpr long long kInfeasible = std::numeric_limits<long long>::min();

class Search {
 public:
  Search(const IlpModel& model, const RcpdParams& params)
      : m_(model),
        prm_(params),
        n_(model.node_count),
        val_(model.vars.size(), 0),
        used_(model.period_count * model.node_count, 0),
        ground_(model.period_count, 0),
        row_hits_(model.cover.size(), 0),
        var_rows_(model.vars.size()),
        live_(used_.size()),
        gs_live_(used_.size()),
        user_ok_(used_.size()),
        ss_avail_(model.period_count) {
    for (std::size_t r = 0; r < m_.cover.size(); ++r)
      for (std::size_t k : m_.cover[r].vars) var_rows_[k].push_back(r);
    user_rows_.resize(n_);
    for (std::size_t r = 0; r < m_.cover.size(); ++r) user_rows_[m_.cover[r].user].push_back(r);
    for (auto& rows : user_rows_)
      std::stable_sort(rows.begin(), rows.end(),
                       [&](std::size_t x, std::size_t y) { return m_.cover[x].last_period < m_.cover[y].last_period; });
    for (std::size_t k = 0; k < m_.vars.size(); ++k) {
      if (m_.fixed[k] < 0) {
        free_.push_back(k);
      } else if (m_.fixed[k] == 1) {
        set(k, 1);
      }
    }
    deadline_ = std::chrono::steady_clock::now() +
                std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                    std::chrono::duration<double>(prm_.time_limit_s));
  }

  Solution run() {
    if (bound(0) == kInfeasible) throw_infeasible();
    dfs(0);
    if (!found_) {
      if (aborted_)
        throw InfeasibleError("rcpd: search budget exhausted before any feasible plan was found", {});
      throw_infeasible();
    }
    Solution s;
    s.values = best_;
    s.deficits = m_.deficits(best_);
    s.objective = best_obj_;
    s.optimal = !aborted_;
    s.nodes = nodes_;
    return s;
  }

 private:
  bool has_room(std::size_t period, NodeId v) const {
    const int cap = m_.degree_cap[v];
    return cap < 0 || used_[period * n_ + v] < cap;
  }
  int room(std::size_t period, NodeId v) const { return m_.degree_cap[v] - used_[period * n_ + v]; }

  void set(std::size_t k, int delta) {
    const IlpVar& v = m_.vars[k];
    val_[k] = delta > 0 ? 1 : 0;
    used_[v.period * n_ + v.a] += delta;
    used_[v.period * n_ + v.b] += delta;
    if (v.kind == VarKind::SatSat) fixed_ss_ += delta;
    if (v.kind == VarKind::SatGround) ground_[v.period] += delta;
    for (std::size_t r : var_rows_[k]) row_hits_[r] += delta;
  }

  // Upper bound on the objective of any completion of free_[pos..];
  // kInfeasible when some cover row can no longer be met.
  long long bound(std::size_t pos) {
    std::fill(live_.begin(), live_.end(), 0);
    std::fill(gs_live_.begin(), gs_live_.end(), 0);
    std::fill(user_ok_.begin(), user_ok_.end(), 0);
    std::fill(ss_avail_.begin(), ss_avail_.end(), 0);
    for (std::size_t q = pos; q < free_.size(); ++q) {
      const IlpVar& v = m_.vars[free_[q]];
      if (!has_room(v.period, v.a) || !has_room(v.period, v.b)) continue;
      const std::size_t base = v.period * n_;
      ++live_[base + v.a];
      switch (v.kind) {
        case VarKind::SatSat:
          ++live_[base + v.b];
          ++ss_avail_[v.period];
          break;
        case VarKind::SatUser: user_ok_[base + v.b] = 1; break;
        case VarKind::SatGround: ++gs_live_[base + v.a]; break;
      }
    }

    long long ends_total = 0, needed_total = 0, deficit_lb = 0, ss_cap = 0, spare = 0;
    for (std::size_t p = 0; p < m_.period_count; ++p) {
      long long b = 0, avail_g = 0;
      const std::size_t base = p * n_;
      for (std::size_t s = 0; s < n_; ++s) {
        if (live_[base + s] == 0 || m_.degree_cap[s] < 0) continue;
        const int rm = room(p, static_cast<NodeId>(s));
        b += std::min(rm, live_[base + s]);
        avail_g += std::min(rm, gs_live_[base + s]);
      }
      const long long needed = std::max(0, m_.ground_links - ground_[p]);
      const long long g = std::min(needed, avail_g);
      deficit_lb += needed - g;
      needed_total += needed;
      ends_total += b;
      ss_cap += std::min<long long>(ss_avail_[p], (b - g) / 2);
      spare += b - g;
    }

    long long user_ends = 0;
    for (std::size_t u = 0; u < n_; ++u) {
      long long chosen = -1;
      for (std::size_t r : user_rows_[u]) {
        if (row_hits_[r] > 0) continue;
        const CoverRow& row = m_.cover[r];
        if (chosen >= static_cast<long long>(row.first_period)) continue;
        long long pick = -1;
        for (std::size_t p = row.last_period + 1; p-- > row.first_period;)
          if (user_ok_[p * n_ + u]) {
            pick = static_cast<long long>(p);
            break;
          }
        if (pick < 0) return kInfeasible;
        chosen = pick;
        ++user_ends;
      }
    }
    if (user_ends > ends_total) return kInfeasible;
    deficit_lb = std::max(deficit_lb, needed_total - (ends_total - user_ends));
    const long long ss_ub = std::max(0LL, std::min(ss_cap, (spare - user_ends) / 2));
    return fixed_ss_ + ss_ub - m_.penalty * deficit_lb;
  }

  bool out_of_budget() {
    if (prm_.node_limit != 0 && nodes_ >= prm_.node_limit) return true;
    if ((nodes_ & 1023) == 0 && std::chrono::steady_clock::now() > deadline_) return true;
    return false;
  }

  void dfs(std::size_t pos) {
    if (aborted_) return;
    ++nodes_;
    if (out_of_budget() && (found_ || nodes_ >= 10 * std::max<std::uint64_t>(prm_.node_limit, 1))) {
      aborted_ = true;
      return;
    }
    const long long ub = bound(pos);
    if (ub == kInfeasible) return;
    if (found_ && ub <= best_obj_) return;
    if (pos == free_.size()) {
      // All variables are fixed, so the bound is the exact objective.
      found_ = true;
      best_obj_ = ub;
      best_.assign(val_.begin(), val_.end());
      return;
    }
    const std::size_t k = free_[pos];
    const IlpVar& v = m_.vars[k];
    if (has_room(v.period, v.a) && has_room(v.period, v.b)) {
      set(k, 1);
      dfs(pos + 1);
      set(k, -1);
    }
    dfs(pos + 1);
  }

  [[noreturn]] void throw_infeasible() const {
    std::vector<WaivedWindow> rows;
    std::string msg = "rcpd: access constraints cannot all be met; windows:";
    for (const CoverRow& r : m_.cover) {
      rows.push_back({r.user, m_.first_period + r.first_period, m_.first_period + r.last_period});
      msg += " [node " + std::to_string(r.user) + " periods " + std::to_string(rows.back().first_period) + ".." +
             std::to_string(rows.back().last_period) + "]";
    }
    throw InfeasibleError(msg, std::move(rows));
  }

  const IlpModel& m_;
  const RcpdParams& prm_;
  std::size_t n_;
  std::vector<std::uint8_t> val_;
  std::vector<int> used_;
  std::vector<int> ground_;
  std::vector<int> row_hits_;
  std::vector<std::vector<std::size_t>> var_rows_;
  std::vector<std::vector<std::size_t>> user_rows_;
  std::vector<std::size_t> free_;
  long long fixed_ss_ = 0;

  std::vector<int> live_, gs_live_;
  std::vector<char> user_ok_;
  std::vector<int> ss_avail_;

  bool found_ = false;
  bool aborted_ = false;
  long long best_obj_ = 0;
  std::vector<std::uint8_t> best_;
  std::uint64_t nodes_ = 0;
  std::chrono::steady_clock::time_point deadline_;
};

}  // namespace

Solution solve(const IlpModel& model, const RcpdParams& params) {
  if (model.period_begin.size() != model.period_count + 1 || model.fixed.size() != model.vars.size() ||
      model.degree_cap.size() != model.node_count)
    throw ModelError("rcpd: malformed model");
  Search search(model, params);
  return search.run();
}

}  // namespace cpd::rcpd
