#pragma once

// Candidate checking for the master loop. Given an integer defense w* and its
// tentative value theta*, either certify that no budget-feasible attack
// avoiding w* beats theta*, or produce one that does, with its exact recourse
// value. A cheap greedy attack runs first; the exact check solves a
// maximization over attacks whose objective is pinned from above by one row
// per known recourse solution, refined lazily.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <deque>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "fortify/instance.hpp"
#include "fortify/mip.hpp"
#include "fortify/recourse.hpp"

namespace fortify {

// Cost of a recourse solution under the uninterdicted canonical costs.
// Knapsack profits equal the depreciations and flip sign when minimized.
inline Value base_cost(const Instance& inst, const RecourseSolution& y) {
  if (inst.is_knapsack()) {
    const Value p = dot(inst.depreciation, y);
    return inst.sense == Sense::Minimize ? -p : p;
  }
  Value c = 0;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (y[i]) c += inst.shortest_path().arcs[i].cost;
  return c;
}

// FIFO-bounded set of recourse solutions, deduplicated; shared across all
// separations of a run so each solve seeds the next.
class RecoursePool {
 public:
  struct Entry {
    RecourseSolution y;
    Value base;  // canonical cost of y with no interdiction
  };

  explicit RecoursePool(std::size_t capacity = 10000) : capacity_(capacity) {}

  bool add(const Instance& inst, const RecourseSolution& y) {
    if (seen_.count(key(y))) return false;
    if (entries_.size() == capacity_) {
      seen_.erase(key(entries_.front().y));
      entries_.pop_front();
    }
    seen_.insert(key(y));
    entries_.push_back({y, base_cost(inst, y)});
    return true;
  }

  const std::deque<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  static std::string key(const RecourseSolution& y) {
    return std::string(y.begin(), y.end());
  }
  std::size_t capacity_;
  std::deque<Entry> entries_;
  std::unordered_set<std::string> seen_;
};

// Iterative attack heuristic: repeatedly solve the recourse exactly and
// interdict the best-ratio asset the current solution uses, while budget
// remains. Fortified assets are never picked.
inline BitVec greedy_interdiction(const Instance& inst, const BitVec& w_star) {
  const int n = inst.asset_count();
  BitVec x(n, 0);
  Value budget = inst.inter_budget;
  for (;;) {
    const auto r = solve_recourse_exact(inst, x);
    int pick = -1;
    for (int i = 0; i < n; ++i) {
      if (x[i] || !r.y[i] || w_star[i]) continue;
      if (inst.inter_cost[i] > budget) continue;
      if (pick < 0 || detail::ratio_before(inst.depreciation[i], inst.inter_cost[i], i,
                                           inst.depreciation[pick], inst.inter_cost[pick], pick))
        pick = i;
    }
    if (pick < 0) return x;
    x[pick] = 1;
    budget -= inst.inter_cost[pick];
  }
}

struct SeparationConfig {
  bool use_greedy = true;   // try the iterative heuristic before the exact solve
  bool lift_cuts = false;   // cap cut coefficients at the target level
  double epsilon = 1e-4;    // strictness margin over theta*
  int solution_limit = 1;   // stop the exact solve at this many improving attacks
  int heuristic_period = 10;
  double time_limit_s = 0.0;  // remaining global budget; 0 = none
};

struct SeparationOutcome {
  enum class Kind { Violated, Feasible, LimitHit };
  Kind kind = Kind::Feasible;
  BitVec x_hat;   // Violated: the attack found
  Value phi = 0;  // Violated: exact recourse value of x_hat, > theta*
  std::int64_t nodes = 0;
  int cuts_added = 0;
};

namespace detail {

inline std::vector<Value> interdiction_coeffs(const Instance& inst, const RecourseSolution& y,
                                              Value base, bool lifted, Value level) {
  const int n = inst.asset_count();
  std::vector<Value> c(n, 0);
  for (int i = 0; i < n; ++i) {
    if (!y[i]) continue;
    c[i] = inst.depreciation[i];
    if (lifted) c[i] = std::min(c[i], std::max<Value>(level - base, 0));
  }
  return c;
}

// Feasible recourse solution against interdiction intensities in [0,1]:
// exact for paths (costs stay additive), greedy for knapsacks.
inline RecourseSolution fractional_recourse(const Instance& inst, const std::vector<double>& xbar) {
  const int n = inst.asset_count();
  if (inst.is_shortest_path()) {
    const auto& sp = inst.shortest_path();
    std::vector<double> cost(sp.arcs.size());
    for (std::size_t a = 0; a < sp.arcs.size(); ++a)
      cost[a] = static_cast<double>(sp.arcs[a].cost) +
                static_cast<double>(inst.depreciation[a]) * xbar[a];
    const auto res = shortest_path_dijkstra<double>(sp, cost);
    RecourseSolution y(n, 0);
    for (int a : res.arcs) y[a] = 1;
    return y;
  }
  const auto& kp = inst.knapsack();
  std::vector<int> order;
  std::vector<double> profit(n);
  for (int i = 0; i < n; ++i) {
    profit[i] = static_cast<double>(inst.depreciation[i]) * (1.0 - xbar[i]);
    if (profit[i] > 0 && kp.weight[i] <= kp.capacity) order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double ra = profit[a] * static_cast<double>(kp.weight[b]);
    const double rb = profit[b] * static_cast<double>(kp.weight[a]);
    if (ra != rb) return ra > rb;
    return a < b;
  });
  RecourseSolution y(n, 0);
  Value room = kp.capacity;
  for (int i : order)
    if (kp.weight[i] <= room) {
      y[i] = 1;
      room -= kp.weight[i];
    }
  return y;
}

}  // namespace detail

inline SeparationOutcome separate(const Instance& inst, const BitVec& w_star, double theta_star,
                                  const SeparationConfig& cfg, RecoursePool& pool) {
  assert(inst.sense == Sense::Minimize);
  const int n = inst.asset_count();
  SeparationOutcome out;

  if (cfg.use_greedy) {
    const BitVec x_g = greedy_interdiction(inst, w_star);
    const auto r = solve_recourse_exact(inst, x_g);
    pool.add(inst, r.y);
    if (static_cast<double>(r.value) > theta_star + cfg.epsilon) {
      out.kind = SeparationOutcome::Kind::Violated;
      out.x_hat = x_g;
      out.phi = r.value;
      return out;
    }
  }

  if (pool.size() == 0) pool.add(inst, solve_recourse_exact(inst, BitVec(n, 0)).y);
  const Value level = static_cast<Value>(std::ceil(theta_star + cfg.epsilon));

  MipModel m;
  m.sense = Sense::Maximize;
  for (int i = 0; i < n; ++i) {
    m.add_binary(0.0);
    if (w_star[i]) m.vars[i].ub = 0.0;  // protected assets cannot be attacked
  }
  // Capped cuts can overshoot their level when several capped coefficients
  // stack, so the cap must also bound t itself or integer candidates at such
  // points would never be cut off.
  const double t_ub = cfg.lift_cuts ? static_cast<double>(level) : kInfinity;
  const int t = m.add_continuous(-kInfinity, t_ub, 1.0);
  {
    std::vector<std::pair<int, double>> row;
    for (int i = 0; i < n; ++i)
      if (inst.inter_cost[i] != 0) row.push_back({i, static_cast<double>(inst.inter_cost[i])});
    m.add_row(row, -kInfinity, static_cast<double>(inst.inter_budget));
  }
  auto add_cut_row = [&](MipContext& ctx, const RecoursePool::Entry& e) {
    const auto coef = detail::interdiction_coeffs(inst, e.y, e.base, cfg.lift_cuts, level);
    std::vector<std::pair<int, double>> row{{t, 1.0}};
    for (int i = 0; i < n; ++i)
      if (coef[i] != 0) row.push_back({i, -static_cast<double>(coef[i])});
    ctx.add_row(row, -kInfinity, static_cast<double>(e.base));
    ++out.cuts_added;
  };
  for (const auto& e : pool.entries()) {
    const auto coef = detail::interdiction_coeffs(inst, e.y, e.base, cfg.lift_cuts, level);
    std::vector<std::pair<int, double>> row{{t, 1.0}};
    for (int i = 0; i < n; ++i)
      if (coef[i] != 0) row.push_back({i, -static_cast<double>(coef[i])});
    m.add_row(row, -kInfinity, static_cast<double>(e.base));
  }

  auto lazy = [&](MipContext& ctx) {
    BitVec x(n, 0);
    for (int i = 0; i < n; ++i) x[i] = ctx.values()[i] > 0.5;
    const auto r = solve_recourse_exact(inst, x);
    pool.add(inst, r.y);
    const double t_hat = ctx.values()[t];
    const double truth = cfg.lift_cuts
                             ? static_cast<double>(std::min(r.value, level))
                             : static_cast<double>(r.value);
    if (t_hat > truth + 1e-6) add_cut_row(ctx, {r.y, base_cost(inst, r.y)});
  };
  auto heuristic = [&](MipContext& ctx) {
    std::vector<double> xbar(ctx.values().begin(), ctx.values().begin() + n);
    for (double& v : xbar) v = std::min(std::max(v, 0.0), 1.0);
    const auto y = detail::fractional_recourse(inst, xbar);
    pool.add(inst, y);
    const Value base = base_cost(inst, y);
    const auto coef = detail::interdiction_coeffs(inst, y, base, cfg.lift_cuts, level);
    double rhs = static_cast<double>(base);
    for (int i = 0; i < n; ++i) rhs += static_cast<double>(coef[i]) * xbar[i];
    if (ctx.values()[t] > rhs + 1e-6) add_cut_row(ctx, {y, base});
  };

  MipControls controls;
  controls.cutoff = theta_star + cfg.epsilon;
  controls.solution_limit = cfg.solution_limit;
  controls.time_limit_s = cfg.time_limit_s;
  controls.heuristic_period = cfg.heuristic_period;
  const auto res = solve_mip(m, controls, lazy, heuristic);
  out.nodes = res.nodes;

  switch (res.status) {
    case MipStatus::Optimal:
    case MipStatus::SolutionLimit: {
      assert(res.has_solution);
      BitVec x(n, 0);
      for (int i = 0; i < n; ++i) x[i] = res.solution[i] > 0.5;
      // One final exact solve pins the value reported upward to the master.
      const auto r = solve_recourse_exact(inst, x);
      assert(static_cast<double>(r.value) > theta_star + cfg.epsilon - 1e-9);
      out.kind = SeparationOutcome::Kind::Violated;
      out.x_hat = std::move(x);
      out.phi = r.value;
      return out;
    }
    case MipStatus::InfeasibleByCutoff:
      out.kind = SeparationOutcome::Kind::Feasible;
      return out;
    case MipStatus::TimeLimit:
      out.kind = SeparationOutcome::Kind::LimitHit;
      return out;
    default:
      // The all-zero attack is always feasible and every objective row is
      // bounded, so nothing else can come back.
      assert(false);
      out.kind = SeparationOutcome::Kind::LimitHit;
      return out;
  }
}

}  // namespace fortify
