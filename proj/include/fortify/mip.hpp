#pragma once

// Branch and cut for small mixed 0-1 programs on top of the bounded-variable
// simplex. Supports lazy constraints at integer candidates, a heuristic cut
// callback at fractional optima, node-local rows, a strict objective cutoff,
// and solution/node/time limits. Everything is deterministic: best-bound node
// selection with ties by node id, most-fractional branching with ties by
// variable index.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <utility>
#include <vector>

#include "fortify/instance.hpp"
#include "fortify/lp.hpp"

namespace fortify {

enum class MipStatus {
  Optimal,
  Infeasible,
  InfeasibleByCutoff,  // no solution strictly better than the cutoff exists
  Unbounded,
  SolutionLimit,
  NodeLimit,
  TimeLimit,
};

inline const char* to_string(MipStatus s) {
  switch (s) {
    case MipStatus::Optimal: return "optimal";
    case MipStatus::Infeasible: return "infeasible";
    case MipStatus::InfeasibleByCutoff: return "infeasible_by_cutoff";
    case MipStatus::Unbounded: return "unbounded";
    case MipStatus::SolutionLimit: return "solution_limit";
    case MipStatus::NodeLimit: return "node_limit";
    case MipStatus::TimeLimit: return "time_limit";
  }
  return "?";
}

struct MipModel {
  struct Var {
    double lb, ub, obj;
    bool integer;
  };
  struct Row {
    std::vector<std::pair<int, double>> coeffs;
    double lb, ub;
  };

  Sense sense = Sense::Minimize;
  std::vector<Var> vars;
  std::vector<Row> rows;

  int add_var(double lb, double ub, double obj, bool integer) {
    vars.push_back({lb, ub, obj, integer});
    return static_cast<int>(vars.size()) - 1;
  }
  int add_binary(double obj) { return add_var(0.0, 1.0, obj, true); }
  int add_continuous(double lb, double ub, double obj) { return add_var(lb, ub, obj, false); }
  int add_row(std::vector<std::pair<int, double>> coeffs, double lb, double ub) {
    rows.push_back({std::move(coeffs), lb, ub});
    return static_cast<int>(rows.size()) - 1;
  }
};

struct MipControls {
  // Incumbents must be strictly better than this value (in the model's
  // sense); when set and nothing beats it, the result is InfeasibleByCutoff.
  std::optional<double> cutoff;
  int solution_limit = 0;       // stop after this many accepted incumbents; 0 = off
  std::int64_t node_limit = 0;  // 0 = off
  double time_limit_s = 0.0;    // 0 = off
  int heuristic_period = 10;    // invoke the heuristic callback at the root and every k-th node
  // Set when fixing all integer variables makes the best reachable objective
  // integral; node dual bounds are then rounded to the next integer.
  bool objective_integral = false;
};

struct MipResult {
  MipStatus status = MipStatus::Infeasible;
  bool has_solution = false;
  std::vector<double> solution;  // structural values of the best incumbent
  double objective = 0.0;        // model sense
  double best_bound = 0.0;       // model sense; dual bound over the whole tree
  double root_bound = std::numeric_limits<double>::quiet_NaN();  // root relaxation after root cuts
  std::int64_t nodes = 0;
  int solutions_found = 0;
};

enum class RowScope { Global, Local };

class MipSolver;

// View of the current relaxation handed to callbacks.
class MipContext {
 public:
  const std::vector<double>& values() const { return vals_; }
  double objective() const { return obj_model_; }    // candidate value, model sense
  double best_bound() const { return bound_model_; } // tree-wide dual bound, model sense
  bool integral() const { return integral_; }
  std::int64_t node() const { return node_; }
  inline void add_row(const std::vector<std::pair<int, double>>& coeffs, double lb, double ub,
                      RowScope scope = RowScope::Global);
  void abort() { abort_requested_ = true; }

 private:
  friend class MipSolver;
  MipSolver* solver_ = nullptr;
  std::vector<double> vals_;
  double obj_model_ = 0.0, bound_model_ = 0.0;
  bool integral_ = false;
  std::int64_t node_ = 0;
  bool abort_requested_ = false;
};

using MipCallback = std::function<void(MipContext&)>;

class MipSolver {
 public:
  MipSolver(const MipModel& model, const MipControls& controls, MipCallback lazy, MipCallback heuristic)
      : model_(model), controls_(controls), lazy_(std::move(lazy)), heur_(std::move(heuristic)) {
    sgn_ = model.sense == Sense::Maximize ? -1.0 : 1.0;
    if (controls_.cutoff) cutoff_int_ = sgn_ * *controls_.cutoff;
  }

  MipResult run() {
    start_ = std::chrono::steady_clock::now();
    const int n = static_cast<int>(model_.vars.size());
    for (const auto& v : model_.vars) lp_.add_column(v.lb, v.ub, sgn_ * v.obj);
    for (const auto& r : model_.rows) {
      lp_.add_row(r.coeffs, r.lb, r.ub);
      row_local_.push_back(false);
    }
    nodes_.push_back({-1, -1, 0.0, 0.0, {}});
    open_.push({-kInfinity, 0});

    while (!open_.empty() && !stop_) {
      if (hit_time_limit()) {
        stop(MipStatus::TimeLimit);
        break;
      }
      if (controls_.node_limit > 0 && processed_ >= controls_.node_limit) {
        stop(MipStatus::NodeLimit);
        break;
      }
      auto [est, id] = open_.top();
      open_.pop();
      if (est >= threshold() - kTol) {
        note_bound_prune(est);
        continue;
      }
      apply_node(static_cast<int>(id));
      ++processed_;
      process_node(static_cast<int>(id), est);
    }

    MipResult res;
    res.nodes = processed_;
    res.solutions_found = solutions_found_;
    if (unbounded_) {
      res.status = MipStatus::Unbounded;
      return res;
    }
    if (stop_) {
      res.status = stop_status_;
    } else if (have_inc_) {
      res.status = MipStatus::Optimal;
    } else {
      res.status = cutoff_blocked_ ? MipStatus::InfeasibleByCutoff : MipStatus::Infeasible;
    }
    if (have_inc_) {
      res.has_solution = true;
      res.solution = inc_sol_;
      res.objective = sgn_ * inc_obj_;
      for (int j = 0; j < n; ++j)
        if (model_.vars[j].integer) res.solution[j] = std::round(res.solution[j]);
    }
    res.best_bound = sgn_ * internal_bound(res.status);
    if (!std::isnan(root_bound_)) res.root_bound = sgn_ * root_bound_;
    return res;
  }

 private:
  friend class MipContext;

  struct NodeRec {
    int parent;
    int branch_var;  // -1 at the root
    double lb, ub;   // bounds imposed on branch_var
    std::vector<int> local_rows;
  };
  using QE = std::pair<double, std::int64_t>;

  static constexpr double kTol = 1e-6;
  static constexpr double kIntTol = 1e-6;

  const MipModel& model_;
  MipControls controls_;
  MipCallback lazy_, heur_;
  Simplex lp_;
  double sgn_ = 1.0;
  std::optional<double> cutoff_int_;
  std::vector<NodeRec> nodes_;
  std::priority_queue<QE, std::vector<QE>, std::greater<QE>> open_;
  std::vector<bool> row_local_;
  std::vector<int> active_local_;  // sorted
  std::chrono::steady_clock::time_point start_;
  std::int64_t processed_ = 0;
  int solutions_found_ = 0;
  int current_node_ = -1;
  bool have_inc_ = false;
  double inc_obj_ = kInfinity;
  std::vector<double> inc_sol_;
  bool cutoff_blocked_ = false;
  bool unbounded_ = false;
  bool stop_ = false;
  MipStatus stop_status_ = MipStatus::TimeLimit;
  double stop_node_bound_ = kInfinity;  // bound of the node interrupted by a limit
  double root_bound_ = std::numeric_limits<double>::quiet_NaN();

  bool hit_time_limit() const {
    if (controls_.time_limit_s <= 0.0) return false;
    const auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    return dt >= controls_.time_limit_s;
  }

  double threshold() const {
    double t = have_inc_ ? inc_obj_ : kInfinity;
    if (cutoff_int_) t = std::min(t, *cutoff_int_);
    return t;
  }

  // Internal (minimize) sense. Integer objectives survive the negation for
  // maximize models, so the ceiling is valid in both senses.
  double rounded(double internal_obj) const {
    return controls_.objective_integral ? std::ceil(internal_obj - kTol) : internal_obj;
  }

  // A prune against threshold() counts toward InfeasibleByCutoff only when
  // the node would have survived without the cutoff.
  void note_bound_prune(double bound) {
    if (cutoff_int_ && bound < (have_inc_ ? inc_obj_ : kInfinity) - kTol) cutoff_blocked_ = true;
  }

  void stop(MipStatus s) {
    stop_ = true;
    stop_status_ = s;
  }

  double internal_bound(MipStatus status) const {
    switch (status) {
      case MipStatus::Optimal: return inc_obj_;
      case MipStatus::Infeasible: return kInfinity;
      case MipStatus::InfeasibleByCutoff: return cutoff_int_ ? *cutoff_int_ : kInfinity;
      case MipStatus::Unbounded: return -kInfinity;
      default: break;
    }
    double b = std::min(stop_node_bound_, have_inc_ ? inc_obj_ : kInfinity);
    auto copy = open_;
    while (!copy.empty()) {
      b = std::min(b, copy.top().first);
      copy.pop();
    }
    return b;
  }

  void apply_node(int id) {
    const int n = static_cast<int>(model_.vars.size());
    for (int j = 0; j < n; ++j) lp_.set_column_bounds(j, model_.vars[j].lb, model_.vars[j].ub);
    static thread_local std::vector<int> chain;
    chain.clear();
    for (int cur = id; cur >= 0; cur = nodes_[cur].parent) chain.push_back(cur);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      const NodeRec& nd = nodes_[*it];
      if (nd.branch_var >= 0) lp_.set_column_bounds(nd.branch_var, nd.lb, nd.ub);
    }
    std::vector<int> want;
    for (int cur : chain)
      for (int r : nodes_[cur].local_rows) want.push_back(r);
    std::sort(want.begin(), want.end());
    for (int r : active_local_)
      if (!std::binary_search(want.begin(), want.end(), r)) lp_.set_row_active(r, false);
    for (int r : want)
      if (!std::binary_search(active_local_.begin(), active_local_.end(), r)) lp_.set_row_active(r, true);
    active_local_ = std::move(want);
    current_node_ = id;
  }

  int pick_branch_var() const {
    int best = -1;
    double best_dist = 1.0;
    const int n = static_cast<int>(model_.vars.size());
    for (int j = 0; j < n; ++j) {
      if (!model_.vars[j].integer) continue;
      const double v = lp_.value(j);
      const double f = v - std::floor(v);
      if (f <= kIntTol || f >= 1.0 - kIntTol) continue;
      const double dist = std::fabs(f - 0.5);
      if (dist < best_dist - 1e-12) {
        best_dist = dist;
        best = j;
      }
    }
    return best;
  }

  bool run_callback(const MipCallback& cb, bool integral, double obj, int id) {
    MipContext ctx;
    ctx.solver_ = this;
    ctx.integral_ = integral;
    ctx.node_ = id;
    ctx.obj_model_ = sgn_ * obj;
    double bound = obj;
    if (!open_.empty()) bound = std::min(bound, open_.top().first);
    ctx.bound_model_ = sgn_ * bound;
    const int n = static_cast<int>(model_.vars.size());
    ctx.vals_.resize(n);
    for (int j = 0; j < n; ++j) ctx.vals_[j] = lp_.value(j);
    const int before = lp_.row_count();
    cb(ctx);
    if (ctx.abort_requested_) {
      stop(MipStatus::TimeLimit);
      return false;
    }
    return lp_.row_count() > before;  // re-solve needed
  }

  void add_callback_row(const std::vector<std::pair<int, double>>& coeffs, double lb, double ub, RowScope scope) {
    const int r = lp_.add_row(coeffs, lb, ub);
    row_local_.push_back(scope == RowScope::Local);
    if (scope == RowScope::Local) {
      nodes_[current_node_].local_rows.push_back(r);
      active_local_.insert(std::upper_bound(active_local_.begin(), active_local_.end(), r), r);
    }
  }

  void accept_incumbent(double obj) {
    have_inc_ = true;
    inc_obj_ = obj;
    const int n = static_cast<int>(model_.vars.size());
    inc_sol_.resize(n);
    for (int j = 0; j < n; ++j) inc_sol_[j] = lp_.value(j);
    ++solutions_found_;
  }

  void process_node(int id, double est) {
    for (;;) {
      if (hit_time_limit()) {
        stop_node_bound_ = est;  // entry bound still covers the interrupted node
        stop(MipStatus::TimeLimit);
        return;
      }
      const LpStatus st = lp_.solve();
      if (st == LpStatus::IterationLimit) {
        stop_node_bound_ = est;
        stop(MipStatus::TimeLimit);
        return;
      }
      if (st == LpStatus::Infeasible) return;
      if (st == LpStatus::Unbounded) {
        unbounded_ = true;
        stop_ = true;
        return;
      }
      const double obj = lp_.objective();
      const double bound = rounded(obj);
      est = bound;
      if (id == 0) root_bound_ = obj;
      if (bound >= threshold() - kTol) {
        note_bound_prune(bound);
        return;
      }
      const int bv = pick_branch_var();
      if (bv < 0) {
        if (lazy_) {
          const bool added = run_callback(lazy_, true, obj, id);
          if (stop_) {
            stop_node_bound_ = bound;
            return;
          }
          if (added) continue;
        }
        accept_incumbent(obj);
        if (controls_.solution_limit > 0 && solutions_found_ >= controls_.solution_limit)
          stop(MipStatus::SolutionLimit);
        return;
      }
      if (heur_ && (id == 0 || (controls_.heuristic_period > 0 &&
                                id % controls_.heuristic_period == 0))) {
        const bool added = run_callback(heur_, false, obj, id);
        if (stop_) {
          stop_node_bound_ = bound;
          return;
        }
        if (added) continue;
      }
      const double v = lp_.value(bv);
      const double fl = std::floor(v);
      const int down = static_cast<int>(nodes_.size());
      nodes_.push_back({id, bv, lp_.column_lb(bv), fl, {}});
      nodes_.push_back({id, bv, fl + 1.0, lp_.column_ub(bv), {}});
      open_.push({bound, down});
      open_.push({bound, down + 1});
      return;
    }
  }
};

inline void MipContext::add_row(const std::vector<std::pair<int, double>>& coeffs, double lb, double ub,
                                RowScope scope) {
  solver_->add_callback_row(coeffs, lb, ub, scope);
}

inline MipResult solve_mip(const MipModel& model, const MipControls& controls = {},
                           MipCallback lazy = {}, MipCallback heuristic = {}) {
  return MipSolver(model, controls, std::move(lazy), std::move(heuristic)).run();
}

}  // namespace fortify
