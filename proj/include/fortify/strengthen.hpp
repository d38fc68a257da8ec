#pragma once

// Fortification-cut representation and the two cut-tightening mechanisms:
// subset-enumeration tightening of the interdiction coefficients, and the
// lower-bound cap min{(phi - z)+ , coeff}. Both only ever shrink
// coefficients, so a tightened cut dominates its base pointwise.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "fortify/instance.hpp"
#include "fortify/recourse.hpp"

namespace fortify {

// theta >= base_value - sum_i coeffs[i] * w_i, with coeffs supported on the
// attack the cut was derived from. Local cuts are valid only within the
// branch-and-bound subtree whose node bound justified them.
struct FortificationCut {
  BitVec source_x;
  Value base_value;  // exact recourse value of source_x, canonical sense
  std::vector<Value> coeffs;
  bool local = false;
};

inline FortificationCut make_base_cut(const Instance& inst, BitVec x, Value phi) {
  FortificationCut cut;
  cut.coeffs.assign(x.size(), 0);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i]) cut.coeffs[i] = inst.depreciation[i];
  cut.source_x = std::move(x);
  cut.base_value = phi;
  return cut;
}

inline Value cut_rhs(const FortificationCut& cut, const BitVec& w) {
  Value rhs = cut.base_value;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i]) rhs -= cut.coeffs[i];
  return rhs;
}

inline bool cut_violated(const FortificationCut& cut, const BitVec& w, double theta,
                         double tol = 1e-6) {
  return theta < static_cast<double>(cut_rhs(cut, w)) - tol;
}

// Cap every coefficient at (base_value - z)+ for a valid lower bound z on the
// game value. Applying it after the enumerative pass gives the combined form.
inline void apply_bound_strengthening(FortificationCut& cut, Value z_lower) {
  const Value cap = std::max<Value>(cut.base_value - z_lower, 0);
  for (std::size_t i = 0; i < cut.coeffs.size(); ++i)
    if (cut.source_x[i]) cut.coeffs[i] = std::min(cut.coeffs[i], cap);
}

struct EnumStats {
  int subsets_processed = 0;
  int recourse_bounds = 0;  // bound evaluations actually performed
  bool capped = false;      // support or subset cap hit; coefficients left at d
  bool improved = false;    // result differs from the plain coefficients
};

namespace detail {

// Subsets of {0..k-1} by increasing cardinality then lexicographic order on
// the index sets, as index vectors.
inline std::vector<std::vector<int>> subsets_by_cardinality(int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> pick;
  for (int card = 1; card <= k; ++card) {
    pick.assign(card, 0);
    std::iota(pick.begin(), pick.end(), 0);
    for (;;) {
      out.push_back(pick);
      int pos = card - 1;
      while (pos >= 0 && pick[pos] == k - card + pos) --pos;
      if (pos < 0) break;
      ++pick[pos];
      for (int q = pos + 1; q < card; ++q) pick[q] = pick[q - 1] + 1;
    }
  }
  return out;
}

inline bool knapsack_subset_skippable(const Instance& inst, const std::vector<int>& assets) {
  Value w = 0;
  for (int i : assets) w += inst.knapsack().weight[i];
  return w > inst.knapsack().capacity;  // items can never coexist in a solution
}

inline bool path_subset_skippable(const Instance& inst, const std::vector<int>& assets) {
  const auto& arcs = inst.shortest_path().arcs;
  for (std::size_t a = 0; a < assets.size(); ++a)
    for (std::size_t b = a + 1; b < assets.size(); ++b) {
      const auto& u = arcs[assets[a]];
      const auto& v = arcs[assets[b]];
      if (u.tail == v.tail || u.head == v.head) return true;  // no path uses both
    }
  return false;
}

}  // namespace detail

// Search for coefficients dt <= d such that for every affordable nonempty
// subset P of the attack's support, sum_{i in P} dt_i covers the drop in
// recourse value caused by lifting the interdictions in P. Uses a dual bound
// for the knapsack drop and the exact path value otherwise. The top-up of a
// shortfall picks coordinates randomly from the given seed; identical seeds
// give identical coefficients.
inline std::vector<Value> strengthen_enumerative(const Instance& inst, const BitVec& x_hat,
                                                 Value phi, std::uint64_t seed,
                                                 EnumStats* stats = nullptr) {
  EnumStats local_stats;
  EnumStats& st = stats ? *stats : local_stats;
  const int n = inst.asset_count();
  std::vector<Value> plain(n, 0);
  std::vector<int> sup;
  for (int i = 0; i < n; ++i)
    if (x_hat[i]) {
      plain[i] = inst.depreciation[i];
      sup.push_back(i);
    }
  if (sup.empty()) return plain;
  if (sup.size() > 20) {
    st.capped = true;
    return plain;
  }

  // Collect affordable subsets up front so the cap is a hard bound on work.
  std::vector<std::vector<int>> subsets;
  for (auto& pick : detail::subsets_by_cardinality(static_cast<int>(sup.size()))) {
    Value fcost = 0;
    for (int p : pick) fcost += inst.fort_cost[sup[p]];
    if (fcost > inst.fort_budget) continue;
    for (int& p : pick) p = sup[p];
    subsets.push_back(std::move(pick));
    if (subsets.size() > 4096) {
      st.capped = true;
      return plain;
    }
  }

  const Value phi_unattacked = solve_recourse_exact(inst, BitVec(n, 0)).value;
  std::mt19937_64 rng(seed);
  std::vector<Value> dt(n, 0);
  BitVec x_prime = x_hat;
  for (const auto& assets : subsets) {
    ++st.subsets_processed;
    Value have = 0;
    for (int i : assets) have += dt[i];
    // If the subset's requirement is already met -- including via the global
    // ceiling phi - Phi_I(0), which no drop can exceed -- skip the solve.
    if (have >= phi - phi_unattacked) continue;
    const bool skippable = inst.is_knapsack() ? detail::knapsack_subset_skippable(inst, assets)
                                              : detail::path_subset_skippable(inst, assets);
    if (skippable) continue;
    for (int i : assets) x_prime[i] = 0;
    const Value drop_bound = phi - recourse_dual_bound(inst, x_prime);
    for (int i : assets) x_prime[i] = 1;
    ++st.recourse_bounds;
    Value need = drop_bound;
    Value full = 0;
    for (int i : assets) full += plain[i];
    need = std::min(need, full);
    while (have < need) {
      std::vector<int> room;
      for (int i : assets)
        if (dt[i] < plain[i]) room.push_back(i);
      const int i = room[static_cast<std::size_t>(rng() % room.size())];
      const Value inc = std::min(plain[i] - dt[i], need - have);
      dt[i] += inc;
      have += inc;
    }
    if (dt == plain) return plain;  // nothing left to gain
  }
  st.improved = dt != plain;
  return dt;
}

// Turns the enumerative feature off after `limit` consecutive calls that
// failed to tighten anything; stays off for the rest of the run.
class AdaptiveToggle {
 public:
  explicit AdaptiveToggle(int limit = 10) : limit_(limit) {}
  bool enabled() const { return enabled_; }
  void record(bool improved) {
    if (!enabled_) return;
    if (improved) {
      misses_ = 0;
    } else if (++misses_ >= limit_) {
      enabled_ = false;
    }
  }

 private:
  int limit_;
  int misses_ = 0;
  bool enabled_ = true;
};

}  // namespace fortify
