#pragma once

// Problem representation for 0-1 fortification games. An instance holds the
// per-asset fortification/interdiction costs, the depreciation each asset
// suffers when interdicted, both budgets, and the recourse problem the
// defender solves at the innermost level. Knapsack games are authored as
// maximization, shortest-path games as minimization; canonicalize() turns
// either into the internal minimization form used by the solver.

#include <cstdint>
#include <queue>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace fortify {

using Value = std::int64_t;
using BitVec = std::vector<std::uint8_t>;

// 0-1 strategy vectors, one entry per asset.
using FortificationStrategy = BitVec;
using InterdictionStrategy = BitVec;
using RecourseSolution = BitVec;

enum class Sense { Minimize, Maximize };

// Recourse: 0-1 knapsack over the assets. Item profits are the asset
// depreciations, so an interdicted item is worth nothing.
struct KnapsackRecourse {
  std::vector<Value> weight;
  Value capacity = 0;
};

// Recourse: shortest s-t path. Assets are arcs in file order; interdicting
// an arc adds its depreciation to the arc cost.
struct ShortestPathRecourse {
  struct Arc {
    int tail = 0;
    int head = 0;
    Value cost = 0;
  };
  int node_count = 0;
  int source = 0;
  int sink = 0;
  std::vector<Arc> arcs;
};

using RecourseSpec = std::variant<KnapsackRecourse, ShortestPathRecourse>;

struct Instance {
  std::string name;
  Sense sense = Sense::Minimize;           // current objective sense
  Sense authored_sense = Sense::Minimize;  // sense the instance was written in
  std::vector<Value> fort_cost;
  std::vector<Value> inter_cost;
  std::vector<Value> depreciation;
  Value fort_budget = 0;
  Value inter_budget = 0;
  // All cost data is integral; rational inputs are scaled by this common
  // denominator, which only affects reporting.
  Value denominator = 1;
  RecourseSpec recourse;

  int asset_count() const { return static_cast<int>(depreciation.size()); }
  bool is_knapsack() const { return std::holds_alternative<KnapsackRecourse>(recourse); }
  bool is_shortest_path() const { return std::holds_alternative<ShortestPathRecourse>(recourse); }
  const KnapsackRecourse& knapsack() const { return std::get<KnapsackRecourse>(recourse); }
  const ShortestPathRecourse& shortest_path() const { return std::get<ShortestPathRecourse>(recourse); }
};

inline bool is_binary(const BitVec& v) {
  for (auto b : v)
    if (b > 1) return false;
  return true;
}

inline Value dot(const std::vector<Value>& cost, const BitVec& sel) {
  Value total = 0;
  for (std::size_t i = 0; i < sel.size(); ++i)
    if (sel[i]) total += cost[i];
  return total;
}

inline std::vector<int> support(const BitVec& v) {
  std::vector<int> s;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i]) s.push_back(static_cast<int>(i));
  return s;
}

// Maps a value of the internal minimization form back to the authored sense.
inline Value authored_value(const Instance& inst, Value canonical) {
  return inst.authored_sense == Sense::Maximize ? -canonical : canonical;
}

namespace detail {

inline bool sink_reachable(const ShortestPathRecourse& sp) {
  std::vector<std::vector<int>> adj(sp.node_count);
  for (const auto& a : sp.arcs) adj[a.tail].push_back(a.head);
  std::vector<std::uint8_t> seen(sp.node_count, 0);
  std::queue<int> q;
  q.push(sp.source);
  seen[sp.source] = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    if (u == sp.sink) return true;
    for (int v : adj[u])
      if (!seen[v]) {
        seen[v] = 1;
        q.push(v);
      }
  }
  return false;
}

}  // namespace detail

inline void validate(const Instance& inst) {
  const std::size_t n = inst.depreciation.size();
  if (n == 0) throw std::invalid_argument("instance has no assets");
  if (inst.fort_cost.size() != n || inst.inter_cost.size() != n)
    throw std::invalid_argument("cost vector length differs from asset count");
  for (std::size_t i = 0; i < n; ++i) {
    if (inst.fort_cost[i] < 0 || inst.inter_cost[i] < 0 || inst.depreciation[i] < 0)
      throw std::invalid_argument("negative asset cost");
  }
  if (inst.fort_budget < 0 || inst.inter_budget < 0)
    throw std::invalid_argument("negative budget");
  if (inst.denominator < 1) throw std::invalid_argument("denominator must be positive");
  if (inst.sense != inst.authored_sense && inst.sense != Sense::Minimize)
    throw std::invalid_argument("converted instances must minimize");
  if (inst.is_knapsack()) {
    const auto& kp = inst.knapsack();
    if (kp.weight.size() != n) throw std::invalid_argument("knapsack weight vector length differs from asset count");
    if (kp.capacity < 0) throw std::invalid_argument("negative knapsack capacity");
    for (Value w : kp.weight)
      if (w < 0) throw std::invalid_argument("negative knapsack weight");
    if (inst.authored_sense != Sense::Maximize)
      throw std::invalid_argument("knapsack games must maximize");
  } else {
    const auto& sp = inst.shortest_path();
    if (sp.arcs.size() != n) throw std::invalid_argument("arc count differs from asset count");
    if (sp.node_count < 2) throw std::invalid_argument("path game needs at least two nodes");
    if (sp.source == sp.sink) throw std::invalid_argument("source equals sink");
    if (sp.source < 0 || sp.source >= sp.node_count || sp.sink < 0 || sp.sink >= sp.node_count)
      throw std::invalid_argument("terminal out of range");
    for (const auto& a : sp.arcs) {
      if (a.tail < 0 || a.tail >= sp.node_count || a.head < 0 || a.head >= sp.node_count)
        throw std::invalid_argument("arc endpoint out of range");
      if (a.cost < 0) throw std::invalid_argument("negative arc cost");
    }
    if (inst.authored_sense != Sense::Minimize)
      throw std::invalid_argument("path games must minimize");
    if (!detail::sink_reachable(sp)) throw std::invalid_argument("sink unreachable from source");
  }
}

// Returns an equivalent instance in minimization form. Maximization games
// keep their data; the recourse evaluator negates their objective, so the
// mapping back to the authored sense is a plain sign flip with no offset.
inline Instance canonicalize(const Instance& inst) {
  validate(inst);
  Instance out = inst;
  out.sense = Sense::Minimize;
  return out;
}

inline bool is_feasible_fortification(const Instance& inst, const FortificationStrategy& w) {
  if (static_cast<int>(w.size()) != inst.asset_count() || !is_binary(w)) return false;
  return dot(inst.fort_cost, w) <= inst.fort_budget;
}

// Budget check only: x against X, with no fortification linking.
inline bool is_feasible_interdiction(const Instance& inst, const InterdictionStrategy& x) {
  if (static_cast<int>(x.size()) != inst.asset_count() || !is_binary(x)) return false;
  return dot(inst.inter_cost, x) <= inst.inter_budget;
}

// Full check of x against X(w): budget plus x_i <= 1 - w_i.
inline bool is_feasible_interdiction(const Instance& inst, const FortificationStrategy& w,
                                     const InterdictionStrategy& x) {
  if (!is_feasible_interdiction(inst, x)) return false;
  if (w.size() != x.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] && w[i]) return false;
  return true;
}

}  // namespace fortify
