#pragma once

// Inner-level oracles: exact recourse, the classical knapsack greedy, and
// dual bounds. Values follow the objective sense of the instance passed in,
// so canonical (minimization) instances yield minimization values.

#include <algorithm>
#include <cassert>
#include <limits>
#include <queue>
#include <utility>

#include "fortify/instance.hpp"

namespace fortify {

struct RecourseResult {
  Value value = 0;
  RecourseSolution y;
  bool exact = true;
};

namespace detail {

// Ratio order d_i/a_i descending without division; ties by lower index.
// Zero weights sort first (infinite ratio).
inline bool ratio_before(Value pi, Value wi, int i, Value pj, Value wj, int j) {
  const auto lhs = static_cast<__int128>(pi) * wj;
  const auto rhs = static_cast<__int128>(pj) * wi;
  if (lhs != rhs) return lhs > rhs;
  return i < j;
}

struct KnapsackItem {
  Value profit;
  Value weight;
  int index;
};

inline std::vector<KnapsackItem> usable_items(const std::vector<Value>& profit,
                                              const std::vector<Value>& weight, Value capacity) {
  std::vector<KnapsackItem> items;
  for (std::size_t i = 0; i < profit.size(); ++i)
    if (profit[i] > 0 && weight[i] <= capacity) items.push_back({profit[i], weight[i], static_cast<int>(i)});
  return items;
}

// Dantzig bound for the items [first, end) of a ratio-sorted list.
inline Value dantzig_tail_bound(const std::vector<KnapsackItem>& sorted, std::size_t first, Value capacity) {
  Value bound = 0;
  Value room = capacity;
  for (std::size_t k = first; k < sorted.size(); ++k) {
    const auto& it = sorted[k];
    if (it.weight <= room) {
      bound += it.profit;
      room -= it.weight;
    } else {
      if (room > 0) bound += (it.profit * room) / it.weight;  // floor is valid: optimum is integral
      return bound;
    }
  }
  return bound;
}

inline std::pair<Value, BitVec> knapsack_max_dp(const std::vector<KnapsackItem>& items, Value capacity,
                                                std::size_t n_total) {
  const std::size_t k = items.size();
  const std::size_t cols = static_cast<std::size_t>(capacity) + 1;
  std::vector<Value> best(cols, 0);
  std::vector<std::vector<std::uint8_t>> take(k, std::vector<std::uint8_t>(cols, 0));
  for (std::size_t i = 0; i < k; ++i) {
    const Value w = items[i].weight;
    const Value p = items[i].profit;
    for (Value c = capacity; c >= w; --c) {
      const Value cand = best[static_cast<std::size_t>(c - w)] + p;
      if (cand > best[static_cast<std::size_t>(c)]) {
        best[static_cast<std::size_t>(c)] = cand;
        take[i][static_cast<std::size_t>(c)] = 1;
      }
    }
  }
  BitVec y(n_total, 0);
  Value c = capacity;
  for (std::size_t i = k; i-- > 0;) {
    if (take[i][static_cast<std::size_t>(c)]) {
      y[items[i].index] = 1;
      c -= items[i].weight;
    }
  }
  return {best[static_cast<std::size_t>(capacity)], y};
}

inline std::pair<Value, BitVec> knapsack_max_bb(std::vector<KnapsackItem> items, Value capacity,
                                                std::size_t n_total) {
  std::sort(items.begin(), items.end(), [](const KnapsackItem& a, const KnapsackItem& b) {
    return ratio_before(a.profit, a.weight, a.index, b.profit, b.weight, b.index);
  });
  const std::size_t k = items.size();
  Value best = 0;
  std::vector<std::uint8_t> chosen(k, 0), best_set(k, 0);
  // Depth-first with take-branch first; prune on the Dantzig bound of the tail.
  struct Frame {
    std::size_t depth;
    Value profit;
    Value room;
    int stage;  // 0: expand, 1: undo take and try skip
  };
  std::vector<Frame> stack;
  stack.push_back({0, 0, capacity, 0});
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.stage == 0) {
      if (f.profit > best) {
        best = f.profit;
        best_set = chosen;
      }
      if (f.depth == k || f.profit + dantzig_tail_bound(items, f.depth, f.room) <= best) {
        stack.pop_back();
        continue;
      }
      if (items[f.depth].weight <= f.room) {
        f.stage = 1;
        chosen[f.depth] = 1;
        stack.push_back({f.depth + 1, f.profit + items[f.depth].profit, f.room - items[f.depth].weight, 0});
      } else {
        f.stage = 2;
        stack.push_back({f.depth + 1, f.profit, f.room, 0});
      }
    } else if (f.stage == 1) {
      chosen[f.depth] = 0;
      f.stage = 2;
      stack.push_back({f.depth + 1, f.profit, f.room, 0});
    } else {
      stack.pop_back();
    }
  }
  BitVec y(n_total, 0);
  for (std::size_t i = 0; i < k; ++i)
    if (best_set[i]) y[items[i].index] = 1;
  return {best, y};
}

// Exact max-profit 0-1 knapsack. DP over capacity unless the table would be
// unreasonably large, then branch-and-bound with the Dantzig bound.
inline std::pair<Value, BitVec> knapsack_max(const std::vector<Value>& profit,
                                             const std::vector<Value>& weight, Value capacity) {
  auto items = usable_items(profit, weight, capacity);
  if (items.empty() || capacity <= 0) {
    // Zero-weight items still fit when capacity is 0.
    BitVec y(profit.size(), 0);
    Value total = 0;
    for (std::size_t i = 0; i < profit.size(); ++i)
      if (profit[i] > 0 && weight[i] == 0) {
        y[i] = 1;
        total += profit[i];
      }
    return {total, y};
  }
  const auto cells = static_cast<unsigned long long>(items.size()) * (static_cast<unsigned long long>(capacity) + 1);
  if (cells <= 16'000'000ULL) return knapsack_max_dp(items, capacity, profit.size());
  return knapsack_max_bb(std::move(items), capacity, profit.size());
}

template <class Cost>
struct PathResult {
  Cost dist = Cost{};
  std::vector<int> arcs;  // arc indices along the path, source to sink
  bool reachable = false;
};

// Dijkstra with a binary heap. Arcs are relaxed in index order and
// predecessors only change on strict improvement, so the returned path is
// deterministic with ties resolved toward lower arc indices.
template <class Cost>
inline PathResult<Cost> shortest_path_dijkstra(const ShortestPathRecourse& sp,
                                               const std::vector<Cost>& arc_cost) {
  const Cost inf = std::numeric_limits<Cost>::max();
  std::vector<std::vector<int>> out(sp.node_count);
  for (std::size_t a = 0; a < sp.arcs.size(); ++a) out[sp.arcs[a].tail].push_back(static_cast<int>(a));
  std::vector<Cost> dist(sp.node_count, inf);
  std::vector<int> pred(sp.node_count, -1);
  using Entry = std::pair<Cost, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;
  dist[sp.source] = Cost{};
  heap.push({Cost{}, sp.source});
  while (!heap.empty()) {
    auto [du, u] = heap.top();
    heap.pop();
    if (du > dist[u]) continue;
    if (u == sp.sink) break;
    for (int a : out[u]) {
      const int v = sp.arcs[a].head;
      const Cost cand = du + arc_cost[a];
      if (cand < dist[v]) {
        dist[v] = cand;
        pred[v] = a;
        heap.push({cand, v});
      }
    }
  }
  PathResult<Cost> res;
  if (dist[sp.sink] == inf) return res;
  res.reachable = true;
  res.dist = dist[sp.sink];
  for (int v = sp.sink; v != sp.source;) {
    const int a = pred[v];
    res.arcs.push_back(a);
    v = sp.arcs[a].tail;
  }
  std::reverse(res.arcs.begin(), res.arcs.end());
  return res;
}

inline std::vector<Value> interdicted_profits(const Instance& inst, const InterdictionStrategy& x) {
  std::vector<Value> p = inst.depreciation;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (x[i]) p[i] = 0;
  return p;
}

inline std::vector<Value> interdicted_arc_costs(const Instance& inst, const InterdictionStrategy& x) {
  const auto& sp = inst.shortest_path();
  std::vector<Value> c(sp.arcs.size());
  for (std::size_t a = 0; a < sp.arcs.size(); ++a) c[a] = sp.arcs[a].cost + (x[a] ? inst.depreciation[a] : 0);
  return c;
}

}  // namespace detail

inline RecourseResult solve_recourse_exact(const Instance& inst, const InterdictionStrategy& x) {
  assert(static_cast<int>(x.size()) == inst.asset_count());
  RecourseResult res;
  if (inst.is_knapsack()) {
    auto [profit, y] = detail::knapsack_max(detail::interdicted_profits(inst, x), inst.knapsack().weight,
                                            inst.knapsack().capacity);
    res.value = inst.sense == Sense::Minimize ? -profit : profit;
    res.y = std::move(y);
  } else {
    auto path = detail::shortest_path_dijkstra<Value>(inst.shortest_path(), detail::interdicted_arc_costs(inst, x));
    if (!path.reachable) throw std::logic_error("sink unreachable");
    res.value = path.dist;
    res.y.assign(inst.asset_count(), 0);
    for (int a : path.arcs) res.y[a] = 1;
  }
  return res;
}

// Classical greedy for the knapsack recourse: scan items by decreasing
// effective-profit/weight ratio and take whatever fits. For path games the
// exact oracle is already cheap, so this just delegates.
inline RecourseResult solve_recourse_greedy(const Instance& inst, const InterdictionStrategy& x) {
  if (inst.is_shortest_path()) return solve_recourse_exact(inst, x);
  auto items = detail::usable_items(detail::interdicted_profits(inst, x), inst.knapsack().weight,
                                    inst.knapsack().capacity);
  std::sort(items.begin(), items.end(), [](const detail::KnapsackItem& a, const detail::KnapsackItem& b) {
    return detail::ratio_before(a.profit, a.weight, a.index, b.profit, b.weight, b.index);
  });
  RecourseResult res;
  res.exact = false;
  res.y.assign(inst.asset_count(), 0);
  Value room = inst.knapsack().capacity;
  Value profit = 0;
  for (const auto& it : items) {
    if (it.weight <= room) {
      res.y[it.index] = 1;
      room -= it.weight;
      profit += it.profit;
    }
  }
  res.value = inst.sense == Sense::Minimize ? -profit : profit;
  return res;
}

// A bound on the exact recourse value that is at least as favorable as the
// optimum from the defender's perspective: the Dantzig fractional bound for
// knapsack games, the exact value for path games.
inline Value recourse_dual_bound(const Instance& inst, const InterdictionStrategy& x) {
  if (inst.is_shortest_path()) return solve_recourse_exact(inst, x).value;
  auto items = detail::usable_items(detail::interdicted_profits(inst, x), inst.knapsack().weight,
                                    inst.knapsack().capacity);
  std::sort(items.begin(), items.end(), [](const detail::KnapsackItem& a, const detail::KnapsackItem& b) {
    return detail::ratio_before(a.profit, a.weight, a.index, b.profit, b.weight, b.index);
  });
  const Value bound = detail::dantzig_tail_bound(items, 0, inst.knapsack().capacity);
  return inst.sense == Sense::Minimize ? -bound : bound;
}

}  // namespace fortify
