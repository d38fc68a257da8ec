#pragma once

// Exhaustive reference evaluators for small games. Everything here works on
// canonical (minimize) instances and enumerates subsets by bitmask, so the
// asset count is capped at 20 bits. The solver proper never calls this; it
// exists for tests and the verify command.

#include <cassert>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "fortify/instance.hpp"
#include "fortify/recourse.hpp"

namespace fortify {

struct OracleResult {
  Value value;  // canonical game value
  BitVec fortification;
  BitVec interdiction;  // attacker best response against it
};

class Oracle {
 public:
  explicit Oracle(const Instance& inst) : inst_(inst) {
    assert(inst.sense == Sense::Minimize);
    n_ = inst.asset_count();
    assert(n_ <= 20);
    phi_.assign(std::size_t{1} << n_, kUnset);
    cost_ = [&] {
      std::vector<Value> f(std::size_t{1} << n_, 0), g(f);
      for (std::uint32_t mask = 1; mask < f.size(); ++mask) {
        const int low = lowest_bit(mask);
        f[mask] = f[mask & (mask - 1)] + inst_.fort_cost[low];
        g[mask] = g[mask & (mask - 1)] + inst_.inter_cost[low];
      }
      return std::pair{std::move(f), std::move(g)};
    }();
  }

  int asset_count() const { return n_; }
  bool fort_feasible(std::uint32_t wmask) const { return cost_.first[wmask] <= inst_.fort_budget; }
  bool inter_feasible(std::uint32_t xmask) const { return cost_.second[xmask] <= inst_.inter_budget; }

  Value phi_interdiction(std::uint32_t xmask) {
    Value& slot = phi_[xmask];
    if (slot == kUnset) slot = solve_recourse_exact(inst_, to_bits(xmask)).value;
    return slot;
  }

  Value phi_interdiction(const BitVec& x) { return phi_interdiction(to_mask(x)); }

  // Attacker best response: max of phi over budget-feasible interdictions
  // avoiding fortified assets. Ties resolve to the lowest mask.
  std::pair<Value, std::uint32_t> best_attack(std::uint32_t wmask) {
    const std::uint32_t free = ~wmask & all_mask();
    Value best = phi_interdiction(std::uint32_t{0});
    std::uint32_t arg = 0;
    for (std::uint32_t sub = free; sub != 0; sub = (sub - 1) & free) {
      if (!inter_feasible(sub)) continue;
      const Value v = phi_interdiction(sub);
      if (v > best || (v == best && sub < arg)) {
        best = v;
        arg = sub;
      }
    }
    return {best, arg};
  }

  Value phi_fortification(std::uint32_t wmask) { return best_attack(wmask).first; }
  Value phi_fortification(const BitVec& w) { return best_attack(to_mask(w)).first; }

  // Full game by enumeration; ties resolve to the lowest fortification mask.
  OracleResult solve() {
    bool have = false;
    Value best = 0;
    std::uint32_t warg = 0, xarg = 0;
    for (std::uint32_t wmask = 0; wmask <= all_mask(); ++wmask) {
      if (!fort_feasible(wmask)) continue;
      const auto [v, x] = best_attack(wmask);
      if (!have || v < best) {
        have = true;
        best = v;
        warg = wmask;
        xarg = x;
      }
    }
    assert(have);  // the empty fortification is always feasible
    return {best, to_bits(warg), to_bits(xarg)};
  }

  // All budget-feasible fortifications with their values, ascending by mask.
  std::vector<std::pair<std::uint32_t, Value>> fortification_values() {
    std::vector<std::pair<std::uint32_t, Value>> out;
    for (std::uint32_t wmask = 0; wmask <= all_mask(); ++wmask)
      if (fort_feasible(wmask)) out.push_back({wmask, phi_fortification(wmask)});
    return out;
  }

  std::uint32_t all_mask() const { return (std::uint32_t{1} << n_) - 1; }

  BitVec to_bits(std::uint32_t mask) const {
    BitVec v(n_, 0);
    for (int i = 0; i < n_; ++i) v[i] = mask >> i & 1;
    return v;
  }

  static std::uint32_t to_mask(const BitVec& v) {
    std::uint32_t mask = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i]) mask |= std::uint32_t{1} << i;
    return mask;
  }

 private:
  static constexpr Value kUnset = std::numeric_limits<Value>::min();

  static int lowest_bit(std::uint32_t mask) {
    int i = 0;
    while (!(mask >> i & 1)) ++i;
    return i;
  }

  Instance inst_;
  int n_ = 0;
  std::vector<Value> phi_;
  std::pair<std::vector<Value>, std::vector<Value>> cost_;  // mask -> fort / inter cost
};

}  // namespace fortify
