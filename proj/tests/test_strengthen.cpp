#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "fortify/oracle.hpp"
#include "fortify/strengthen.hpp"
#include "helpers.hpp"

using namespace fortify;

namespace {

BitVec bits(std::initializer_list<int> v) { return BitVec(v.begin(), v.end()); }

// Random budget-feasible attack on a canonical instance, empty allowed.
BitVec random_attack(const Instance& inst, std::mt19937_64& rng) {
  const int n = inst.asset_count();
  for (int tries = 0; tries < 50; ++tries) {
    BitVec x(n, 0);
    for (int i = 0; i < n; ++i) x[i] = test::rnd(rng, 0, 2) == 0;
    if (is_feasible_interdiction(inst, x)) return x;
  }
  return BitVec(n, 0);
}

}  // namespace

TEST_CASE("bound cap shrinks coefficients toward the value gap") {
  Instance inst = canonicalize(test::make_kfg({5, 2, 9}, {1, 1, 1}, 3, {1, 1, 1}, {1, 1, 1}, 3, 3));
  FortificationCut cut = make_base_cut(inst, bits({1, 1, 1}), 10);
  CHECK(cut.coeffs == std::vector<Value>{5, 2, 9});

  FortificationCut capped = cut;
  apply_bound_strengthening(capped, 7);
  CHECK(capped.coeffs == std::vector<Value>{3, 2, 3});

  FortificationCut zeroed = cut;
  apply_bound_strengthening(zeroed, 12);  // bound above the cut's base value
  CHECK(zeroed.coeffs == std::vector<Value>{0, 0, 0});

  FortificationCut untouched = cut;
  apply_bound_strengthening(untouched, -1000);
  CHECK(untouched.coeffs == cut.coeffs);
}

TEST_CASE("bound cap composes with already-tightened coefficients") {
  Instance inst = canonicalize(test::make_kfg({4, 1}, {1, 1}, 2, {1, 1}, {1, 1}, 2, 2));
  FortificationCut cut = make_base_cut(inst, bits({1, 1}), 9);
  cut.coeffs = {4, 1};  // result of an earlier enumerative pass
  apply_bound_strengthening(cut, 7);
  CHECK(cut.coeffs == std::vector<Value>{2, 1});
}

TEST_CASE("cut evaluation and violation predicate") {
  Instance inst = canonicalize(test::kfg_example());
  FortificationCut cut = make_base_cut(inst, bits({1, 0, 1}), -6);
  CHECK(cut_rhs(cut, bits({0, 0, 0})) == -6);
  CHECK(cut_rhs(cut, bits({1, 0, 0})) == -6 - inst.depreciation[0]);
  CHECK(cut_rhs(cut, bits({0, 1, 0})) == -6);  // off-support protection is free
  CHECK(cut_violated(cut, bits({0, 0, 0}), -7.0));
  CHECK_FALSE(cut_violated(cut, bits({0, 0, 0}), -6.0));
}

TEST_CASE("subset skip predicates") {
  // Two items that cannot fit together.
  Instance kp = canonicalize(test::make_kfg({6, 5}, {3, 3}, 4, {1, 1}, {1, 1}, 2, 2));
  CHECK(detail::knapsack_subset_skippable(kp, {0, 1}));
  CHECK_FALSE(detail::knapsack_subset_skippable(kp, {0}));

  // Diamond: two arcs into the sink share a head, chain arcs do not.
  Instance sp = canonicalize(test::make_spfg(4, 0, 3,
                                             {{0, 1, 1}, {0, 2, 2}, {1, 3, 3}, {2, 3, 4}},
                                             {10, 10, 10, 10}, 2, 2));
  CHECK(detail::path_subset_skippable(sp, {2, 3}));  // both end at the sink
  CHECK(detail::path_subset_skippable(sp, {0, 1}));  // both leave the source
  CHECK_FALSE(detail::path_subset_skippable(sp, {0, 2}));  // consecutive arcs
}

TEST_CASE("subset ordering is cardinality-then-lexicographic") {
  const auto subs = detail::subsets_by_cardinality(3);
  REQUIRE(subs.size() == 7);
  CHECK(subs[0] == std::vector<int>{0});
  CHECK(subs[1] == std::vector<int>{1});
  CHECK(subs[2] == std::vector<int>{2});
  CHECK(subs[3] == std::vector<int>{0, 1});
  CHECK(subs[4] == std::vector<int>{0, 2});
  CHECK(subs[5] == std::vector<int>{1, 2});
  CHECK(subs[6] == std::vector<int>{0, 1, 2});
}

TEST_CASE("empty support tightens to nothing") {
  Instance inst = canonicalize(test::kfg_example());
  EnumStats st;
  const auto dt = strengthen_enumerative(inst, BitVec(3, 0), -10, 1, &st);
  CHECK(dt == std::vector<Value>(3, 0));
  CHECK(st.subsets_processed == 0);
}

TEST_CASE("diamond attack tightens singletons and skips the shared-head pair") {
  Instance sp = canonicalize(test::make_spfg(4, 0, 3,
                                             {{0, 1, 1}, {0, 2, 2}, {1, 3, 3}, {2, 3, 4}},
                                             {10, 10, 10, 10}, 2, 2));
  const BitVec x_hat = bits({0, 0, 1, 1});
  const Value phi = solve_recourse_exact(sp, x_hat).value;
  CHECK(phi == 14);  // both sink arcs delayed; best is 1 + (3+10)
  EnumStats st;
  const auto dt = strengthen_enumerative(sp, x_hat, phi, 99, &st);
  // Lifting a sink arc alone: restore arc 2 -> path 1+3 = 4 (drop 10);
  // restore arc 3 -> path 2+4 = 6 (drop 8).
  CHECK(dt == std::vector<Value>{0, 0, 10, 8});
  CHECK(st.subsets_processed == 3);
  CHECK(st.recourse_bounds == 2);  // the pair never reached a solve
  CHECK(st.improved);
}

TEST_CASE("tightened cuts stay valid against enumerated defenses") {
  std::mt19937_64 rng(20260822);
  int improved = 0;
  for (int trial = 0; trial < 80; ++trial) {
    Instance inst = canonicalize(test::random_tiny(rng));
    Oracle oracle(inst);
    const BitVec x_hat = random_attack(inst, rng);
    const Value phi = solve_recourse_exact(inst, x_hat).value;
    EnumStats st;
    const auto dt = strengthen_enumerative(inst, x_hat, phi, rng(), &st);
    if (st.improved) ++improved;

    const int n = inst.asset_count();
    for (int i = 0; i < n; ++i) {
      CHECK(dt[i] >= 0);
      CHECK(dt[i] <= (x_hat[i] ? inst.depreciation[i] : 0));
    }

    FortificationCut cut = make_base_cut(inst, x_hat, phi);
    cut.coeffs = dt;
    FortificationCut combined = cut;
    const Value z_star = oracle.solve().value;
    apply_bound_strengthening(combined, z_star);  // the tightest admissible bound
    FortificationCut slack_combined = cut;
    apply_bound_strengthening(slack_combined, z_star - 2);

    for (const auto& [wmask, value] : oracle.fortification_values()) {
      const BitVec w = oracle.to_bits(wmask);
      CHECK(value >= cut_rhs(cut, w));
      CHECK(value >= cut_rhs(combined, w));
      CHECK(value >= cut_rhs(slack_combined, w));
      // Tightening never weakens the cut anywhere.
      CHECK(cut_rhs(cut, w) >= cut_rhs(make_base_cut(inst, x_hat, phi), w));
      CHECK(cut_rhs(combined, w) >= cut_rhs(cut, w) - std::max<Value>(phi - z_star, 0));
    }
  }
  CHECK(improved > 0);  // the feature must actually fire somewhere
}

TEST_CASE("enforced subset conditions hold with exact recourse values") {
  std::mt19937_64 rng(5150);
  for (int trial = 0; trial < 40; ++trial) {
    Instance inst = canonicalize(test::random_tiny(rng));
    const BitVec x_hat = random_attack(inst, rng);
    const Value phi = solve_recourse_exact(inst, x_hat).value;
    const auto dt = strengthen_enumerative(inst, x_hat, phi, rng());
    std::vector<int> sup;
    const int n = inst.asset_count();
    for (int i = 0; i < n; ++i)
      if (x_hat[i]) sup.push_back(i);
    for (const auto& pick : detail::subsets_by_cardinality(static_cast<int>(sup.size()))) {
      std::vector<int> assets;
      for (int p : pick) assets.push_back(sup[p]);
      Value fcost = 0;
      for (int i : assets) fcost += inst.fort_cost[i];
      if (fcost > inst.fort_budget) continue;
      const bool skipped = inst.is_knapsack() ? detail::knapsack_subset_skippable(inst, assets)
                                              : detail::path_subset_skippable(inst, assets);
      if (skipped) continue;
      BitVec x_prime = x_hat;
      for (int i : assets) x_prime[i] = 0;
      const Value exact_drop = phi - solve_recourse_exact(inst, x_prime).value;
      Value have = 0;
      for (int i : assets) have += dt[i];
      Value full = 0;
      for (int i : assets) full += inst.depreciation[i];
      CHECK(have >= std::min(exact_drop, full));
    }
  }
}

TEST_CASE("identical seeds reproduce identical coefficients") {
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 20; ++trial) {
    Instance inst = canonicalize(test::random_tiny(rng));
    const BitVec x_hat = random_attack(inst, rng);
    const Value phi = solve_recourse_exact(inst, x_hat).value;
    const std::uint64_t seed = rng();
    CHECK(strengthen_enumerative(inst, x_hat, phi, seed) ==
          strengthen_enumerative(inst, x_hat, phi, seed));
  }
}

TEST_CASE("support and subset caps fall back to plain coefficients") {
  {
    const int n = 21;
    Instance inst = canonicalize(test::make_kfg(std::vector<Value>(n, 5), std::vector<Value>(n, 1),
                                                10, std::vector<Value>(n, 1),
                                                std::vector<Value>(n, 1), n, n));
    EnumStats st;
    const auto dt = strengthen_enumerative(inst, BitVec(n, 1), 0, 7, &st);
    CHECK(st.capped);
    CHECK(dt == std::vector<Value>(n, 5));
  }
  {
    const int n = 13;  // 2^13 - 1 affordable subsets exceeds the cap
    Instance inst = canonicalize(test::make_kfg(std::vector<Value>(n, 5), std::vector<Value>(n, 1),
                                                13, std::vector<Value>(n, 1),
                                                std::vector<Value>(n, 1), n, n));
    EnumStats st;
    const auto dt = strengthen_enumerative(inst, BitVec(n, 1), -13, 7, &st);
    CHECK(st.capped);
    CHECK(dt == std::vector<Value>(n, 5));
  }
}

TEST_CASE("adaptive toggle disables after ten consecutive misses") {
  AdaptiveToggle t;
  for (int i = 0; i < 9; ++i) t.record(false);
  CHECK(t.enabled());
  t.record(true);  // reset just in time
  for (int i = 0; i < 9; ++i) t.record(false);
  CHECK(t.enabled());
  t.record(false);  // tenth consecutive miss
  CHECK_FALSE(t.enabled());
  t.record(true);  // stays off for the rest of the run
  CHECK_FALSE(t.enabled());
}
