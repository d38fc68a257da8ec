#pragma once

// Shared fixtures and independent reference implementations for the test
// suite. The references here are deliberately naive (subset enumeration,
// Bellman-Ford) so library results are checked against code with no shared
// logic.

#include <algorithm>
#include <random>
#include <vector>

#include "fortify/instance.hpp"

namespace test {

using fortify::BitVec;
using fortify::Instance;
using fortify::Value;

inline Instance make_kfg(std::vector<Value> d, std::vector<Value> a, Value b, std::vector<Value> f,
                         std::vector<Value> g, Value fort_budget, Value inter_budget) {
  Instance inst;
  inst.name = "kfg";
  inst.sense = fortify::Sense::Maximize;
  inst.authored_sense = fortify::Sense::Maximize;
  inst.depreciation = std::move(d);
  inst.fort_cost = std::move(f);
  inst.inter_cost = std::move(g);
  inst.fort_budget = fort_budget;
  inst.inter_budget = inter_budget;
  fortify::KnapsackRecourse kp;
  kp.weight = std::move(a);
  kp.capacity = b;
  inst.recourse = kp;
  return inst;
}

// The running 3-item knapsack example: d=(6,5,4), a=(3,2,1), b=4.
inline Instance kfg_example(Value fort_budget = 1, Value inter_budget = 1) {
  return make_kfg({6, 5, 4}, {3, 2, 1}, 4, {1, 1, 1}, {1, 1, 1}, fort_budget, inter_budget);
}

struct ArcSpec {
  int tail;
  int head;
  Value cost;
};

inline Instance make_spfg(int nodes, int source, int sink, std::vector<ArcSpec> arcs,
                          std::vector<Value> delay, Value fort_budget, Value inter_budget) {
  Instance inst;
  inst.name = "spfg";
  inst.sense = fortify::Sense::Minimize;
  inst.authored_sense = fortify::Sense::Minimize;
  inst.depreciation = std::move(delay);
  const auto n = inst.depreciation.size();
  inst.fort_cost.assign(n, 1);
  inst.inter_cost.assign(n, 1);
  inst.fort_budget = fort_budget;
  inst.inter_budget = inter_budget;
  fortify::ShortestPathRecourse sp;
  sp.node_count = nodes;
  sp.source = source;
  sp.sink = sink;
  for (const auto& a : arcs) sp.arcs.push_back({a.tail, a.head, a.cost});
  inst.recourse = sp;
  return inst;
}

// Triangle: s->a (1), a->t (2), s->t (5), all delays 10.
inline Instance spfg_triangle(Value fort_budget = 1, Value inter_budget = 1) {
  return make_spfg(3, 0, 2, {{0, 1, 1}, {1, 2, 2}, {0, 2, 5}}, {10, 10, 10}, fort_budget, inter_budget);
}

// Reference: exhaustive max-profit knapsack, n <= 20.
inline std::pair<Value, BitVec> enum_knapsack(const std::vector<Value>& profit,
                                              const std::vector<Value>& weight, Value capacity) {
  const int n = static_cast<int>(profit.size());
  Value best = 0;
  unsigned best_mask = 0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    Value p = 0, w = 0;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) {
        p += profit[i];
        w += weight[i];
      }
    if (w <= capacity && (p > best || (p == best && mask < best_mask))) {
      best = p;
      best_mask = mask;
    }
  }
  BitVec y(n, 0);
  for (int i = 0; i < n; ++i)
    if (best_mask & (1u << i)) y[i] = 1;
  return {best, y};
}

// Reference: Bellman-Ford distance source -> sink, or -1 if unreachable.
inline Value bellman_ford(const fortify::ShortestPathRecourse& sp, const std::vector<Value>& arc_cost) {
  const Value inf = std::numeric_limits<Value>::max() / 4;
  std::vector<Value> dist(sp.node_count, inf);
  dist[sp.source] = 0;
  for (int round = 0; round < sp.node_count; ++round) {
    bool changed = false;
    for (std::size_t a = 0; a < sp.arcs.size(); ++a) {
      const auto& arc = sp.arcs[a];
      if (dist[arc.tail] < inf && dist[arc.tail] + arc_cost[a] < dist[arc.head]) {
        dist[arc.head] = dist[arc.tail] + arc_cost[a];
        changed = true;
      }
    }
    if (!changed) break;
  }
  return dist[sp.sink] >= inf ? -1 : dist[sp.sink];
}

inline Value rnd(std::mt19937_64& rng, Value lo, Value hi) {
  return lo + static_cast<Value>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

inline Instance random_tiny_kfg(std::mt19937_64& rng) {
  const int n = static_cast<int>(rnd(rng, 5, 10));
  std::vector<Value> d(n), a(n), f(n), g(n);
  Value wsum = 0;
  for (int i = 0; i < n; ++i) {
    d[i] = rnd(rng, 1, 20);
    a[i] = rnd(rng, 1, 15);
    wsum += a[i];
    f[i] = rnd(rng, 0, 9) < 7 ? 1 : rnd(rng, 1, 2);
    g[i] = rnd(rng, 1, 3);
  }
  const Value b = std::max<Value>(1, (wsum * rnd(rng, 35, 65)) / 100);
  return make_kfg(std::move(d), std::move(a), b, std::move(f), std::move(g), rnd(rng, 0, 3), rnd(rng, 0, 3));
}

// Random digraph with a guaranteed source-sink path and at most 10 arcs.
inline Instance random_tiny_spfg(std::mt19937_64& rng) {
  const int nodes = static_cast<int>(rnd(rng, 4, 6));
  const int source = 0, sink = nodes - 1;
  std::vector<ArcSpec> arcs;
  // Spine path through a random subset of the middle nodes.
  std::vector<int> middle;
  for (int v = 1; v < sink; ++v)
    if (rnd(rng, 0, 1)) middle.push_back(v);
  int prev = source;
  for (int v : middle) {
    arcs.push_back({prev, v, rnd(rng, 1, 10)});
    prev = v;
  }
  arcs.push_back({prev, sink, rnd(rng, 1, 10)});
  const int extra = static_cast<int>(rnd(rng, 2, 10 - static_cast<Value>(arcs.size())));
  for (int k = 0; k < extra; ++k) {
    const int u = static_cast<int>(rnd(rng, 0, nodes - 2));
    int v = static_cast<int>(rnd(rng, 1, nodes - 1));
    if (v == u) v = sink;
    arcs.push_back({u, v, rnd(rng, 1, 10)});
  }
  std::vector<Value> delay(arcs.size());
  for (auto& x : delay) x = rnd(rng, 1, 10);
  return make_spfg(nodes, source, sink, std::move(arcs), std::move(delay), rnd(rng, 0, 3), rnd(rng, 0, 3));
}

inline Instance random_tiny(std::mt19937_64& rng) {
  return rnd(rng, 0, 1) ? random_tiny_kfg(rng) : random_tiny_spfg(rng);
}

}  // namespace test
