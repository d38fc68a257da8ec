#pragma once

// The outer branch-and-cut: minimize theta over budget-feasible defenses w,
// where theta is pinned from below by defense cuts generated on demand. Each
// integer candidate (w, theta) is handed to the separation module; a better
// attack comes back as a new cut, otherwise the candidate is accepted. Cuts
// can be tightened enumeratively, by the global dual bound, and per node.

#include <cassert>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "fortify/instance.hpp"
#include "fortify/mip.hpp"
#include "fortify/recourse.hpp"
#include "fortify/separation.hpp"
#include "fortify/strengthen.hpp"

namespace fortify {

struct SolverConfig {
  bool cap_interdiction_cuts = false;  // letter I
  bool bound_strengthening = false;    // letter B
  bool enum_strengthening = false;     // letter E
  bool greedy_separation = false;      // letter G
  double epsilon = 1e-4;     // strictness margin for separation cutoffs
  int sep_solution_limit = 1;
  std::uint64_t seed = 0;
  double time_limit_s = 0.0;    // 0 = off
  std::int64_t node_limit = 0;  // 0 = off
  int verbosity = 0;
  std::ostream* log = nullptr;  // cut trace sink when verbosity > 0
};

// Settings strings use the letters I, B, E, G in any order; "-" means none.
inline SolverConfig parse_settings(const std::string& s) {
  SolverConfig cfg;
  if (s == "-") return cfg;
  for (const char ch : s) {
    bool* flag = nullptr;
    switch (ch) {
      case 'I': flag = &cfg.cap_interdiction_cuts; break;
      case 'B': flag = &cfg.bound_strengthening; break;
      case 'E': flag = &cfg.enum_strengthening; break;
      case 'G': flag = &cfg.greedy_separation; break;
      default: throw std::invalid_argument(std::string("unknown settings letter '") + ch + "'");
    }
    if (*flag) throw std::invalid_argument(std::string("repeated settings letter '") + ch + "'");
    *flag = true;
  }
  return cfg;
}

inline std::string format_settings(const SolverConfig& cfg) {
  std::string s;
  if (cfg.cap_interdiction_cuts) s += 'I';
  if (cfg.bound_strengthening) s += 'B';
  if (cfg.enum_strengthening) s += 'E';
  if (cfg.greedy_separation) s += 'G';
  return s.empty() ? "-" : s;
}

enum class CutKind { Initial, Global, Local };

inline const char* to_string(CutKind k) {
  switch (k) {
    case CutKind::Initial: return "initial";
    case CutKind::Global: return "global";
    case CutKind::Local: return "local";
  }
  return "?";
}

struct AppliedCut {
  FortificationCut cut;
  CutKind kind = CutKind::Global;
  std::int64_t node = 0;
  Value z_used = 0;        // dual bound the coefficients were capped with
  double violation = 0.0;  // rhs minus theta at the candidate that spawned it
};

struct SolveStats {
  std::int64_t nodes = 0;      // master tree
  std::int64_t sep_nodes = 0;  // summed over all separation solves
  int separations = 0;
  int fort_cuts = 0;  // defense cuts of every kind
  int int_cuts = 0;   // attack-side cuts added inside separation solves
  double root_bound = std::numeric_limits<double>::quiet_NaN();  // authored sense
  double time_s = 0.0;
};

struct SolveResult {
  enum class Status { Optimal, TimeLimit, NodeLimit };
  Status status = Status::Optimal;
  bool has_solution = false;
  Value value = 0;  // authored sense, exact when Optimal
  double best_bound = 0.0;  // authored sense; equals value when Optimal
  FortificationStrategy w;
  InterdictionStrategy x;  // an optimal attack against w
  SolveStats stats;
  std::vector<AppliedCut> cuts;  // every defense cut added, in order
};

inline const char* to_string(SolveResult::Status s) {
  switch (s) {
    case SolveResult::Status::Optimal: return "optimal";
    case SolveResult::Status::TimeLimit: return "time_limit";
    case SolveResult::Status::NodeLimit: return "node_limit";
  }
  return "?";
}

// One cut per affordable asset used by the attack-free recourse solution:
// seed the attack with that asset, then greedily extend it by best
// depreciation-per-cost among assets the current best recourse uses, while
// budget remains. Every recourse solution seen lands in the pool.
inline std::vector<FortificationCut> initial_cuts(const Instance& inst, RecoursePool& pool) {
  const int n = inst.asset_count();
  const auto r0 = solve_recourse_exact(inst, BitVec(n, 0));
  pool.add(inst, r0.y);
  std::vector<FortificationCut> cuts;
  for (int i = 0; i < n; ++i) {
    if (!r0.y[i] || inst.inter_cost[i] > inst.inter_budget) continue;
    BitVec x(n, 0);
    x[i] = 1;
    Value budget = inst.inter_budget - inst.inter_cost[i];
    for (;;) {
      const auto r = solve_recourse_exact(inst, x);
      pool.add(inst, r.y);
      int pick = -1;
      for (int j = 0; j < n; ++j) {
        if (x[j] || !r.y[j] || inst.inter_cost[j] > budget) continue;
        if (pick < 0 ||
            detail::ratio_before(inst.depreciation[j], inst.inter_cost[j], j,
                                 inst.depreciation[pick], inst.inter_cost[pick], pick))
          pick = j;
      }
      if (pick < 0) {
        cuts.push_back(make_base_cut(inst, x, r.value));
        break;
      }
      x[pick] = 1;
      budget -= inst.inter_cost[pick];
    }
  }
  return cuts;
}

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (counter + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::string cut_key(const FortificationCut& cut) {
  std::string key(cut.source_x.begin(), cut.source_x.end());
  key += '|';
  for (const Value c : cut.coeffs) {
    key += std::to_string(c);
    key += ',';
  }
  return key;
}

inline void trace_cut(std::ostream* log, const AppliedCut& applied) {
  if (!log) return;
  *log << "cut kind=" << to_string(applied.kind) << " node=" << applied.node
       << " base=" << applied.cut.base_value << " viol=" << applied.violation << " src=";
  for (const auto b : applied.cut.source_x) *log << (b ? '1' : '0');
  *log << '\n';
}

}  // namespace detail

// An optimal attack against w_star: any stored cut whose source attack is
// feasible under w_star and meets theta_star exactly answers it; otherwise
// one separation call just below theta_star must produce such an attack.
inline InterdictionStrategy recover_attacker_response(const Instance& inst,
                                                      const FortificationStrategy& w_star,
                                                      Value theta_star,
                                                      const std::vector<AppliedCut>& cuts,
                                                      RecoursePool& pool) {
  for (const auto& applied : cuts)
    if (applied.cut.base_value == theta_star &&
        is_feasible_interdiction(inst, w_star, applied.cut.source_x))
      return applied.cut.source_x;
  SeparationConfig sep;
  sep.use_greedy = true;
  const auto out = separate(inst, w_star, static_cast<double>(theta_star) - 0.5, sep, pool);
  assert(out.kind == SeparationOutcome::Kind::Violated);
  assert(out.phi == theta_star);
  return out.x_hat;
}

inline SolveResult solve_fortification(const Instance& input, const SolverConfig& cfg = {}) {
  const Instance inst = canonicalize(input);
  const int n = inst.asset_count();
  const auto start = std::chrono::steady_clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  SolveResult result;
  RecoursePool pool;
  AdaptiveToggle enum_toggle;
  std::unordered_set<std::string> seen_cuts;
  std::uint64_t cut_counter = 0;
  const Value phi0 = solve_recourse_exact(inst, BitVec(n, 0)).value;
  Value z_glob = phi0;  // proven lower bound on the game value, never decreases

  MipModel master;
  master.sense = Sense::Minimize;
  for (int i = 0; i < n; ++i) master.add_binary(0.0);
  const int theta = master.add_continuous(static_cast<double>(phi0), kInfinity, 1.0);
  {
    std::vector<std::pair<int, double>> row;
    for (int i = 0; i < n; ++i)
      if (inst.fort_cost[i] != 0) row.push_back({i, static_cast<double>(inst.fort_cost[i])});
    master.add_row(std::move(row), -kInfinity, static_cast<double>(inst.fort_budget));
  }

  // Builds the row form theta + sum coeffs_i w_i >= base.
  const auto cut_row = [&](const FortificationCut& cut) {
    std::vector<std::pair<int, double>> row{{theta, 1.0}};
    for (int i = 0; i < n; ++i)
      if (cut.coeffs[i] != 0) row.push_back({i, static_cast<double>(cut.coeffs[i])});
    return row;
  };
  const auto record_cut = [&](FortificationCut cut, CutKind kind, std::int64_t node, Value z_used,
                              double violation) {
    AppliedCut applied{std::move(cut), kind, node, z_used, violation};
    detail::trace_cut(cfg.verbosity > 0 ? cfg.log : nullptr, applied);
    result.cuts.push_back(std::move(applied));
    ++result.stats.fort_cuts;
  };

  // Shapes the coefficients of a fresh cut: enumerative tightening when
  // enabled and still paying off, then the global-bound cap.
  const auto shape_cut = [&](const BitVec& x_hat, Value phi) {
    FortificationCut cut = make_base_cut(inst, x_hat, phi);
    if (cfg.enum_strengthening && enum_toggle.enabled()) {
      EnumStats st;
      cut.coeffs = strengthen_enumerative(inst, x_hat, phi, detail::mix_seed(cfg.seed, cut_counter), &st);
      enum_toggle.record(st.improved);
    }
    ++cut_counter;
    if (cfg.bound_strengthening) apply_bound_strengthening(cut, z_glob);
    return cut;
  };

  for (const auto& base : initial_cuts(inst, pool)) {
    FortificationCut cut = shape_cut(base.source_x, base.base_value);
    if (!seen_cuts.insert(detail::cut_key(cut)).second) continue;
    master.add_row(cut_row(cut), static_cast<double>(cut.base_value), kInfinity);
    const double violation = static_cast<double>(cut_rhs(cut, BitVec(n, 0)) - phi0);
    record_cut(std::move(cut), CutKind::Initial, 0, z_glob, violation);
  }

  bool aborted_by_time = false;
  const auto lazy = [&](MipContext& ctx) {
    if (cfg.time_limit_s > 0 && elapsed() > cfg.time_limit_s) {
      aborted_by_time = true;
      ctx.abort();
      return;
    }
    if (std::isfinite(ctx.best_bound()))
      z_glob = std::max(z_glob, static_cast<Value>(std::ceil(ctx.best_bound() - 1e-6)));
    BitVec w(n, 0);
    for (int i = 0; i < n; ++i) w[i] = ctx.values()[i] > 0.5;
    const double theta_hat = ctx.values()[theta];

    SeparationConfig sep;
    sep.use_greedy = cfg.greedy_separation;
    sep.lift_cuts = cfg.cap_interdiction_cuts;
    sep.epsilon = cfg.epsilon;
    sep.solution_limit = cfg.sep_solution_limit;
    if (cfg.time_limit_s > 0) sep.time_limit_s = std::max(cfg.time_limit_s - elapsed(), 1e-3);
    const auto out = separate(inst, w, theta_hat, sep, pool);
    ++result.stats.separations;
    result.stats.sep_nodes += out.nodes;
    result.stats.int_cuts += out.cuts_added;

    switch (out.kind) {
      case SeparationOutcome::Kind::Feasible:
        return;  // candidate survives and becomes the incumbent
      case SeparationOutcome::Kind::LimitHit:
        aborted_by_time = true;
        ctx.abort();
        return;
      case SeparationOutcome::Kind::Violated: break;
    }

    FortificationCut cut = shape_cut(out.x_hat, out.phi);
    const double violation = static_cast<double>(cut_rhs(cut, w)) - theta_hat;
    if (seen_cuts.insert(detail::cut_key(cut)).second) {
      ctx.add_row(cut_row(cut), static_cast<double>(cut.base_value), kInfinity, RowScope::Global);
      record_cut(cut, CutKind::Global, ctx.node(), z_glob, violation);
    }
    // A deeper node can know a better bound than the tree does; that bound
    // caps harder, but the resulting cut only holds below this node.
    if (cfg.bound_strengthening) {
      const auto z_node = static_cast<Value>(std::ceil(theta_hat - 1e-6));
      if (z_node > z_glob) {
        FortificationCut local = make_base_cut(inst, out.x_hat, out.phi);
        local.coeffs = cut.coeffs;
        apply_bound_strengthening(local, z_node);
        local.local = true;
        if (local.coeffs != cut.coeffs) {
          ctx.add_row(cut_row(local), static_cast<double>(local.base_value), kInfinity,
                      RowScope::Local);
          record_cut(std::move(local), CutKind::Local, ctx.node(), z_node, violation);
        }
      }
    }
  };

  MipControls controls;
  controls.node_limit = cfg.node_limit;
  controls.time_limit_s = cfg.time_limit_s;
  // At any integer w the best reachable objective is the largest cut value,
  // an integer, so node bounds may round up.
  controls.objective_integral = true;
  const auto res = solve_mip(master, controls, lazy, {});

  result.stats.nodes = res.nodes;
  result.stats.time_s = elapsed();
  if (!std::isnan(res.root_bound))
    result.stats.root_bound = static_cast<double>(authored_value(inst, 1)) * res.root_bound;

  switch (res.status) {
    case MipStatus::Optimal: result.status = SolveResult::Status::Optimal; break;
    case MipStatus::NodeLimit: result.status = SolveResult::Status::NodeLimit; break;
    case MipStatus::TimeLimit: result.status = SolveResult::Status::TimeLimit; break;
    default: assert(false); result.status = SolveResult::Status::TimeLimit; break;
  }
  if (aborted_by_time) result.status = SolveResult::Status::TimeLimit;

  const double sign = static_cast<double>(authored_value(inst, 1));
  result.best_bound = sign * res.best_bound;
  if (res.has_solution) {
    result.has_solution = true;
    const auto z_canon = static_cast<Value>(std::llround(res.objective));
    assert(std::abs(res.objective - static_cast<double>(z_canon)) < 1e-4);
    result.value = authored_value(inst, z_canon);
    result.w.assign(n, 0);
    for (int i = 0; i < n; ++i) result.w[i] = res.solution[i] > 0.5;
    result.x = recover_attacker_response(inst, result.w, z_canon, result.cuts, pool);
  }
  if (result.status == SolveResult::Status::Optimal) result.best_bound = static_cast<double>(result.value);
  return result;
}

}  // namespace fortify
