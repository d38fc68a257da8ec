#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "fortify/mip.hpp"
#include "fortify/recourse.hpp"
#include "helpers.hpp"

using namespace fortify;

namespace {

// Exhaustive reference for pure 0-1 programs: returns {feasible, best}.
struct EnumOpt {
  bool feasible = false;
  double best = 0.0;
};

EnumOpt enumerate_binary(const MipModel& m) {
  const int n = static_cast<int>(m.vars.size());
  EnumOpt out;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    double obj = 0.0;
    for (int j = 0; j < n; ++j)
      if (mask >> j & 1) obj += m.vars[j].obj;
    bool ok = true;
    for (const auto& row : m.rows) {
      double a = 0.0;
      for (const auto& [j, c] : row.coeffs)
        if (mask >> j & 1) a += c;
      if (a < row.lb - 1e-9 || a > row.ub + 1e-9) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    const bool better = m.sense == Sense::Maximize ? obj > out.best : obj < out.best;
    if (!out.feasible || better) {
      out.feasible = true;
      out.best = obj;
    }
  }
  return out;
}

MipModel random_binary_program(std::mt19937_64& rng) {
  MipModel m;
  m.sense = test::rnd(rng, 0, 1) ? Sense::Maximize : Sense::Minimize;
  const int n = static_cast<int>(test::rnd(rng, 2, 12));
  for (int j = 0; j < n; ++j) m.add_binary(static_cast<double>(test::rnd(rng, -10, 10)));
  const int nrows = static_cast<int>(test::rnd(rng, 0, 6));
  for (int r = 0; r < nrows; ++r) {
    std::vector<std::pair<int, double>> coeffs;
    for (int j = 0; j < n; ++j) {
      const auto c = test::rnd(rng, -5, 5);
      if (c != 0) coeffs.push_back({j, static_cast<double>(c)});
    }
    const auto kind = test::rnd(rng, 0, 2);
    const auto b = static_cast<double>(test::rnd(rng, -6, 10));
    if (kind == 0)
      m.add_row(coeffs, -kInfinity, b);
    else if (kind == 1)
      m.add_row(coeffs, b, kInfinity);
    else
      m.add_row(coeffs, b, b + static_cast<double>(test::rnd(rng, 0, 8)));
  }
  return m;
}

}  // namespace

TEST_CASE("single free variable under an upper bound row") {
  MipModel m;
  m.sense = Sense::Maximize;
  m.add_continuous(-kInfinity, kInfinity, 1.0);
  m.add_row({{0, 1.0}}, -kInfinity, 5.0);
  const auto res = solve_mip(m);
  REQUIRE(res.status == MipStatus::Optimal);
  CHECK(res.objective == Catch::Approx(5.0));
  CHECK(res.solution[0] == Catch::Approx(5.0));
}

TEST_CASE("two box variables sharing one capacity row") {
  MipModel m;
  m.sense = Sense::Maximize;
  m.add_continuous(0.0, 1.0, 1.0);
  m.add_continuous(0.0, 1.0, 1.0);
  m.add_row({{0, 1.0}, {1, 1.0}}, -kInfinity, 1.0);
  const auto res = solve_mip(m);
  REQUIRE(res.status == MipStatus::Optimal);
  CHECK(res.objective == Catch::Approx(1.0));
}

TEST_CASE("contradictory rows are infeasible, not infeasible-by-cutoff") {
  MipModel m;
  m.sense = Sense::Maximize;
  m.add_continuous(-kInfinity, kInfinity, 1.0);
  m.add_row({{0, 1.0}}, -kInfinity, 3.0);
  m.add_row({{0, 1.0}}, 4.0, kInfinity);
  CHECK(solve_mip(m).status == MipStatus::Infeasible);
}

TEST_CASE("missing bound in the objective direction is unbounded") {
  MipModel m;
  m.sense = Sense::Maximize;
  m.add_continuous(0.0, kInfinity, 1.0);
  m.add_row({{0, 1.0}}, 1.0, kInfinity);
  CHECK(solve_mip(m).status == MipStatus::Unbounded);
}

TEST_CASE("fractional LP vertex is found exactly") {
  MipModel m;
  m.sense = Sense::Maximize;
  m.add_continuous(0.0, 1.0, 1.0);
  m.add_continuous(0.0, 1.0, 1.0);
  m.add_row({{0, 2.0}, {1, 1.0}}, -kInfinity, 2.0);
  m.add_row({{0, 1.0}, {1, 2.0}}, -kInfinity, 2.0);
  const auto res = solve_mip(m);
  REQUIRE(res.status == MipStatus::Optimal);
  CHECK(res.objective == Catch::Approx(4.0 / 3.0));
}

TEST_CASE("binary knapsack agrees with the dynamic program") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = static_cast<int>(test::rnd(rng, 1, 12));
    std::vector<Value> profit(n), weight(n);
    for (int i = 0; i < n; ++i) {
      profit[i] = test::rnd(rng, 0, 30);
      weight[i] = test::rnd(rng, 1, 12);
    }
    const Value cap = test::rnd(rng, 0, 40);
    MipModel m;
    m.sense = Sense::Maximize;
    std::vector<std::pair<int, double>> row;
    for (int i = 0; i < n; ++i) {
      m.add_binary(static_cast<double>(profit[i]));
      row.push_back({i, static_cast<double>(weight[i])});
    }
    m.add_row(row, -kInfinity, static_cast<double>(cap));
    const auto res = solve_mip(m);
    REQUIRE(res.status == MipStatus::Optimal);
    const auto [dp_value, dp_take] = detail::knapsack_max(profit, weight, cap);
    CHECK(res.objective == Catch::Approx(static_cast<double>(dp_value)));
  }
}

TEST_CASE("cutoff above the optimum yields infeasible-by-cutoff") {
  // max 5 y1 + 4 y2 with y1 + y2 <= 1 has optimum 5.
  MipModel m;
  m.sense = Sense::Maximize;
  m.add_binary(5.0);
  m.add_binary(4.0);
  m.add_row({{0, 1.0}, {1, 1.0}}, -kInfinity, 1.0);

  MipControls at;
  at.cutoff = 5.0;  // demands strictly better than the optimum
  CHECK(solve_mip(m, at).status == MipStatus::InfeasibleByCutoff);

  MipControls below;
  below.cutoff = 4.0;
  const auto res = solve_mip(m, below);
  REQUIRE(res.status == MipStatus::Optimal);
  CHECK(res.objective == Catch::Approx(5.0));
}

TEST_CASE("solution limit returns the first incumbent beating the cutoff") {
  std::mt19937_64 rng(31);
  int suboptimal_seen = 0;
  for (int trial = 0; trial < 60; ++trial) {
    MipModel m = random_binary_program(rng);
    const auto ref = enumerate_binary(m);
    MipControls limited;
    limited.solution_limit = 1;
    const auto res = solve_mip(m, limited);
    if (!ref.feasible) {
      CHECK(res.status == MipStatus::Infeasible);
      continue;
    }
    REQUIRE(res.has_solution);
    CHECK(res.solutions_found == 1);
    // The first incumbent is feasible but need not be optimal.
    const bool worse = m.sense == Sense::Maximize ? res.objective < ref.best - 1e-6
                                                  : res.objective > ref.best + 1e-6;
    if (worse) ++suboptimal_seen;
    double obj = 0.0;
    for (std::size_t j = 0; j < m.vars.size(); ++j) obj += m.vars[j].obj * res.solution[j];
    CHECK(obj == Catch::Approx(res.objective).margin(1e-6));

    MipControls with_cut;
    with_cut.solution_limit = 1;
    with_cut.cutoff = ref.best + (m.sense == Sense::Maximize ? -0.5 : 0.5);
    const auto res2 = solve_mip(m, with_cut);
    REQUIRE(res2.has_solution);
    if (m.sense == Sense::Maximize)
      CHECK(res2.objective > *with_cut.cutoff);
    else
      CHECK(res2.objective < *with_cut.cutoff);
  }
  // The limit must actually be able to stop early, otherwise it tests nothing.
  CHECK(suboptimal_seen > 0);
}

TEST_CASE("random binary programs match exhaustive enumeration") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 100; ++trial) {
    MipModel m = random_binary_program(rng);
    const auto ref = enumerate_binary(m);
    const auto res = solve_mip(m);
    if (!ref.feasible) {
      CHECK(res.status == MipStatus::Infeasible);
      continue;
    }
    REQUIRE(res.status == MipStatus::Optimal);
    CHECK(res.objective == Catch::Approx(ref.best).margin(1e-6));
    // Root relaxation must bound the optimum from the right side.
    if (m.sense == Sense::Maximize)
      CHECK(res.root_bound >= ref.best - 1e-6);
    else
      CHECK(res.root_bound <= ref.best + 1e-6);
    // Reported solution is feasible and achieves the objective.
    double obj = 0.0;
    for (std::size_t j = 0; j < m.vars.size(); ++j) {
      const double v = res.solution[j];
      CHECK((v == 0.0 || v == 1.0));
      obj += m.vars[j].obj * v;
    }
    CHECK(obj == Catch::Approx(ref.best).margin(1e-6));
    for (const auto& row : m.rows) {
      double a = 0.0;
      for (const auto& [j, c] : row.coeffs) a += c * res.solution[j];
      CHECK(a >= row.lb - 1e-6);
      CHECK(a <= row.ub + 1e-6);
    }
  }
}

TEST_CASE("random programs with the optimum as cutoff report infeasible-by-cutoff") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    MipModel m = random_binary_program(rng);
    const auto ref = enumerate_binary(m);
    if (!ref.feasible) continue;
    MipControls c;
    c.cutoff = ref.best;
    const auto res = solve_mip(m, c);
    CHECK(res.status == MipStatus::InfeasibleByCutoff);
  }
}

TEST_CASE("lazy rows are enforced on every accepted incumbent") {
  // max sum y_i over six binaries; the pair restriction y_i + y_{i+1} <= 1 is
  // supplied lazily, only when an integer candidate violates it.
  MipModel m;
  m.sense = Sense::Maximize;
  for (int j = 0; j < 6; ++j) m.add_binary(1.0);
  int invocations = 0;
  auto lazy = [&](MipContext& ctx) {
    ++invocations;
    const auto& v = ctx.values();
    for (int j = 0; j + 1 < 6; ++j)
      if (v[j] + v[j + 1] > 1.5) {
        ctx.add_row({{j, 1.0}, {j + 1, 1.0}}, -kInfinity, 1.0);
        return;  // one row at a time; the solver must come back
      }
  };
  const auto res = solve_mip(m, {}, lazy);
  REQUIRE(res.status == MipStatus::Optimal);
  CHECK(res.objective == Catch::Approx(3.0));
  CHECK(invocations > 1);
  for (int j = 0; j + 1 < 6; ++j) CHECK(res.solution[j] + res.solution[j + 1] <= 1.0 + 1e-6);
}

TEST_CASE("heuristic rows tighten the root relaxation") {
  // Odd-set rows cut the half-integral vertex of a matching-style LP.
  MipModel m;
  m.sense = Sense::Maximize;
  for (int j = 0; j < 3; ++j) m.add_binary(1.0);
  m.add_row({{0, 1.0}, {1, 1.0}}, -kInfinity, 1.0);
  m.add_row({{1, 1.0}, {2, 1.0}}, -kInfinity, 1.0);
  m.add_row({{0, 1.0}, {2, 1.0}}, -kInfinity, 1.0);
  bool added = false;
  auto heur = [&](MipContext& ctx) {
    const auto& v = ctx.values();
    if (!added && v[0] + v[1] + v[2] > 1.0 + 1e-6) {
      added = true;
      ctx.add_row({{0, 1.0}, {1, 1.0}, {2, 1.0}}, -kInfinity, 1.0);
    }
  };
  const auto res = solve_mip(m, {}, {}, heur);
  REQUIRE(res.status == MipStatus::Optimal);
  CHECK(res.objective == Catch::Approx(1.0));
  CHECK(added);
  CHECK(res.root_bound == Catch::Approx(1.0));  // the cut closed the root gap
  CHECK(res.nodes == 1);
}

TEST_CASE("node-local rows constrain only their own subtree") {
  Simplex lp;
  lp.add_column(0.0, 1.0, -1.0);  // minimize -x1 - x2
  lp.add_column(0.0, 1.0, -1.0);
  REQUIRE(lp.solve() == LpStatus::Optimal);
  CHECK(lp.objective() == Catch::Approx(-2.0));

  const int r = lp.add_row({{0, 1.0}, {1, 1.0}}, -kInfinity, 1.0);
  REQUIRE(lp.solve() == LpStatus::Optimal);
  CHECK(lp.objective() == Catch::Approx(-1.0));

  lp.set_row_active(r, false);
  REQUIRE(lp.solve() == LpStatus::Optimal);
  CHECK(lp.objective() == Catch::Approx(-2.0));

  lp.set_row_active(r, true);
  REQUIRE(lp.solve() == LpStatus::Optimal);
  CHECK(lp.objective() == Catch::Approx(-1.0));
}

TEST_CASE("deactivated rows stay vacuous across later pivots") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    MipModel m = random_binary_program(rng);
    if (m.rows.empty()) continue;
    // Reference: drop the last row entirely.
    MipModel shrunk = m;
    shrunk.rows.pop_back();
    const auto ref = enumerate_binary(shrunk);

    Simplex lp;
    for (const auto& v : m.vars)
      lp.add_column(v.lb, v.ub, m.sense == Sense::Maximize ? -v.obj : v.obj);
    int last = -1;
    for (const auto& row : m.rows) last = lp.add_row(row.coeffs, row.lb, row.ub);
    lp.solve();
    lp.set_row_active(last, false);

    // Branch-free check: enumerate binaries by bound fixing and confirm the
    // deactivated row never constrains them.
    const int n = static_cast<int>(m.vars.size());
    if (n > 8) continue;
    bool any = false;
    double best = 0.0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      for (int j = 0; j < n; ++j) {
        const double b = mask >> j & 1 ? 1.0 : 0.0;
        lp.set_column_bounds(j, b, b);
      }
      if (lp.solve() != LpStatus::Optimal) continue;
      const double obj = m.sense == Sense::Maximize ? -lp.objective() : lp.objective();
      const bool better = m.sense == Sense::Maximize ? obj > best : obj < best;
      if (!any || better) {
        any = true;
        best = obj;
      }
    }
    CHECK(any == ref.feasible);
    if (any && ref.feasible) CHECK(best == Catch::Approx(ref.best).margin(1e-6));
  }
}

TEST_CASE("node and time limits report partial bounds") {
  // A deliberately fractional packing instance that needs branching.
  MipModel m;
  m.sense = Sense::Maximize;
  for (int j = 0; j < 14; ++j) m.add_binary(1.0 + 0.01 * j);
  for (int j = 0; j < 14; ++j)
    for (int k = j + 1; k < 14; ++k)
      if ((j + k) % 3 == 0) m.add_row({{j, 1.0}, {k, 1.0}}, -kInfinity, 1.0);
  MipControls c;
  c.node_limit = 1;
  const auto res = solve_mip(m, c);
  if (res.status == MipStatus::NodeLimit) {
    const auto full = solve_mip(m);
    REQUIRE(full.status == MipStatus::Optimal);
    CHECK(res.best_bound >= full.objective - 1e-6);
  }
}
