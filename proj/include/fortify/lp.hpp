#pragma once

// Bounded-variable revised primal simplex, minimization form. Rows are kept
// as ranged constraints lb <= a.x <= ub via one slack column per row
// (a.x - s = 0, s in [lb, ub]), so the basis matrix only grows when rows are
// appended and the dense basis inverse can be maintained incrementally.
// Bounds may change between solves and rows may be switched inactive
// (slack bounds widened to +-inf with the slack forced basic), which is what
// the branch-and-cut driver uses for warm starts and node-local rows.
//
// Nonbasic columns are pinned at their stored value, which is usually a bound
// but may sit strictly inside the range after composite phase 1 stops a step
// early; eligibility to move is therefore judged against the bounds, not a
// cached at-lower/at-upper tag.

#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

namespace fortify {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

class Simplex {
 public:
  int add_column(double lb, double ub, double obj) {
    assert(rows_.empty() && "columns must be added before rows");
    col_lb_.push_back(lb);
    col_ub_.push_back(ub);
    obj_.push_back(obj);
    basic_flag_.push_back(false);
    val_.push_back(lb > -kInfinity ? lb : (ub < kInfinity ? ub : 0.0));
    cols_.emplace_back();
    ++nstruct_;
    return nstruct_ - 1;
  }

  int structural_count() const { return nstruct_; }
  int row_count() const { return static_cast<int>(rows_.size()); }

  int add_row(const std::vector<std::pair<int, double>>& coeffs, double lb, double ub) {
    const int r = static_cast<int>(rows_.size());
    rows_.push_back({coeffs, lb, ub, true});
    for (const auto& [j, a] : coeffs) {
      assert(j >= 0 && j < nstruct_);
      if (a != 0.0) cols_[j].push_back({r, a});
    }
    // The new slack starts basic; border the inverse with the new row
    // expressed over the current basis: B'^-1 = [[B^-1, 0], [rB.B^-1, -1]].
    const int m_old = static_cast<int>(basic_.size());
    std::vector<double> rb(m_old, 0.0);
    for (const auto& [j, a] : coeffs)
      if (basic_flag_[j]) rb[basic_pos_[j]] = a;
    std::vector<double> border(m_old, 0.0);
    for (int k = 0; k < m_old; ++k)
      if (rb[k] != 0.0)
        for (int i = 0; i < m_old; ++i) border[i] += rb[k] * binv_[static_cast<std::size_t>(k) * m_old + i];
    const int m_new = m_old + 1;
    std::vector<double> grown(static_cast<std::size_t>(m_new) * m_new, 0.0);
    for (int i = 0; i < m_old; ++i)
      for (int k = 0; k < m_old; ++k) grown[static_cast<std::size_t>(i) * m_new + k] = binv_[static_cast<std::size_t>(i) * m_old + k];
    for (int k = 0; k < m_old; ++k) grown[static_cast<std::size_t>(m_old) * m_new + k] = border[k];
    grown[static_cast<std::size_t>(m_old) * m_new + m_old] = -1.0;
    binv_ = std::move(grown);

    const int slack = slack_col(r);
    col_lb_.push_back(lb);
    col_ub_.push_back(ub);
    obj_.push_back(0.0);
    basic_flag_.push_back(true);
    val_.push_back(0.0);
    basic_.push_back(slack);
    basic_pos_.resize(col_count(), -1);
    basic_pos_[slack] = m_old;
    return r;
  }

  void set_column_bounds(int j, double lb, double ub) {
    col_lb_[j] = lb;
    col_ub_[j] = ub;
  }

  void set_row_active(int r, bool active) {
    if (rows_[r].active == active) return;
    rows_[r].active = active;
    const int slack = slack_col(r);
    if (active) {
      col_lb_[slack] = rows_[r].lb;
      col_ub_[slack] = rows_[r].ub;
    } else {
      // A vacuous row needs its slack basic, otherwise the pinned slack value
      // would still constrain a.x.
      force_basic(slack);
      col_lb_[slack] = -kInfinity;
      col_ub_[slack] = kInfinity;
    }
  }

  bool row_active(int r) const { return rows_[r].active; }

  LpStatus solve() {
    clamp_nonbasic_values();
    compute_values();
    LpStatus st = run_phase(true);
    if (st != LpStatus::Optimal) return st;
    return run_phase(false);
  }

  double objective() const {
    double z = 0.0;
    for (int j = 0; j < nstruct_; ++j) z += obj_[j] * val_[j];
    return z;
  }

  double value(int j) const { return val_[j]; }
  double column_lb(int j) const { return col_lb_[j]; }
  double column_ub(int j) const { return col_ub_[j]; }

 private:
  struct Row {
    std::vector<std::pair<int, double>> coeffs;
    double lb, ub;
    bool active;
  };

  static constexpr double kDualTol = 1e-7;
  static constexpr double kPrimalTol = 1e-7;
  static constexpr double kPivotTol = 1e-9;
  static constexpr int kStallLimit = 100;
  static constexpr long kIterationCap = 200000;

  int nstruct_ = 0;
  std::vector<Row> rows_;
  std::vector<std::vector<std::pair<int, double>>> cols_;  // structural column -> (row, coef)
  std::vector<double> col_lb_, col_ub_, obj_, val_;
  std::vector<bool> basic_flag_;
  std::vector<int> basic_;      // basis position -> column
  std::vector<int> basic_pos_;  // column -> basis position or -1
  std::vector<double> binv_;    // dense m x m row-major inverse of the basis
  long pivots_since_refactor_ = 0;

  int col_count() const { return nstruct_ + static_cast<int>(rows_.size()); }
  int slack_col(int r) const { return nstruct_ + r; }

  // Column of the full matrix M = [A | -I] for column index c.
  template <class F>
  void for_column(int c, F&& fn) const {
    if (c < nstruct_) {
      for (const auto& [r, a] : cols_[c]) fn(r, a);
    } else {
      fn(c - nstruct_, -1.0);
    }
  }

  void clamp_nonbasic_values() {
    for (int j = 0; j < col_count(); ++j) {
      if (basic_flag_[j]) continue;
      if (val_[j] < col_lb_[j]) val_[j] = col_lb_[j];
      if (val_[j] > col_ub_[j]) val_[j] = col_ub_[j];
    }
  }

  void compute_values() {
    const int m = static_cast<int>(basic_.size());
    std::vector<double> rhs(m, 0.0);
    for (int j = 0; j < col_count(); ++j) {
      if (basic_flag_[j] || val_[j] == 0.0) continue;
      const double v = val_[j];
      for_column(j, [&](int r, double a) { rhs[r] -= a * v; });
    }
    for (int i = 0; i < m; ++i) {
      double v = 0.0;
      for (int k = 0; k < m; ++k) v += binv_[static_cast<std::size_t>(i) * m + k] * rhs[k];
      val_[basic_[i]] = v;
    }
  }

  std::vector<double> btran(const std::vector<double>& c_b) const {
    const int m = static_cast<int>(basic_.size());
    std::vector<double> y(m, 0.0);
    for (int k = 0; k < m; ++k) {
      const double ck = c_b[k];
      if (ck == 0.0) continue;
      const double* row = binv_.data() + static_cast<std::size_t>(k) * m;
      for (int i = 0; i < m; ++i) y[i] += ck * row[i];
    }
    return y;
  }

  std::vector<double> ftran(int c) const {
    const int m = static_cast<int>(basic_.size());
    std::vector<double> alpha(m, 0.0);
    for_column(c, [&](int r, double a) {
      for (int i = 0; i < m; ++i) alpha[i] += binv_[static_cast<std::size_t>(i) * m + r] * a;
    });
    return alpha;
  }

  void do_pivot(int enter, int pos, const std::vector<double>& alpha) {
    const int m = static_cast<int>(basic_.size());
    const int leave = basic_[pos];
    const double piv = alpha[pos];
    assert(std::fabs(piv) > kPivotTol);
    double* prow = binv_.data() + static_cast<std::size_t>(pos) * m;
    const double inv = 1.0 / piv;
    for (int k = 0; k < m; ++k) prow[k] *= inv;
    for (int i = 0; i < m; ++i) {
      if (i == pos) continue;
      const double f = alpha[i];
      if (f == 0.0) continue;
      double* row = binv_.data() + static_cast<std::size_t>(i) * m;
      for (int k = 0; k < m; ++k) row[k] -= f * prow[k];
    }
    basic_[pos] = enter;
    basic_pos_[enter] = pos;
    basic_pos_[leave] = -1;
    basic_flag_[enter] = true;
    basic_flag_[leave] = false;
    if (++pivots_since_refactor_ >= 300) refactor();
  }

  void force_basic(int c) {
    if (basic_flag_[c]) return;
    const int m = static_cast<int>(basic_.size());
    auto alpha = ftran(c);
    int pos = -1;
    double best = kPivotTol;
    for (int i = 0; i < m; ++i) {
      // Never eject another vacuous row's slack; that would pin its row again.
      const int b = basic_[i];
      if (b >= nstruct_ && !rows_[b - nstruct_].active) continue;
      const double mag = std::fabs(alpha[i]);
      if (mag > best) {
        best = mag;
        pos = i;
      }
    }
    assert(pos >= 0 && "column linearly dependent on the basis");
    // The ejected column keeps its current value; interior nonbasic points
    // are legal and phase 1 repairs any bound violation.
    do_pivot(c, pos, alpha);
  }

  void refactor() {
    pivots_since_refactor_ = 0;
    const int m = static_cast<int>(basic_.size());
    if (m == 0) return;
    std::vector<double> mat(static_cast<std::size_t>(m) * 2 * m, 0.0);
    auto at = [&](int i, int k) -> double& { return mat[static_cast<std::size_t>(i) * 2 * m + k]; };
    for (int p = 0; p < m; ++p)
      for_column(basic_[p], [&](int r, double a) { at(r, p) = a; });
    for (int i = 0; i < m; ++i) at(i, m + i) = 1.0;
    for (int c = 0; c < m; ++c) {
      int piv = -1;
      double best = 1e-11;
      for (int i = c; i < m; ++i)
        if (std::fabs(at(i, c)) > best) {
          best = std::fabs(at(i, c));
          piv = i;
        }
      if (piv < 0) {
        reset_to_slack_basis();
        return;
      }
      if (piv != c)
        for (int k = 0; k < 2 * m; ++k) std::swap(at(piv, k), at(c, k));
      const double inv = 1.0 / at(c, c);
      for (int k = 0; k < 2 * m; ++k) at(c, k) *= inv;
      for (int i = 0; i < m; ++i) {
        if (i == c) continue;
        const double f = at(i, c);
        if (f == 0.0) continue;
        for (int k = 0; k < 2 * m; ++k) at(i, k) -= f * at(c, k);
      }
    }
    // Row swaps hit both halves, so the right half is B^-1 outright.
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < m; ++k) binv_[static_cast<std::size_t>(i) * m + k] = at(i, m + k);
    compute_values();
  }

  void reset_to_slack_basis() {
    const int m = static_cast<int>(basic_.size());
    for (int j = 0; j < col_count(); ++j) {
      if (!basic_flag_[j]) continue;
      basic_flag_[j] = false;
      basic_pos_[j] = -1;
      if (col_lb_[j] > -kInfinity)
        val_[j] = col_lb_[j];
      else if (col_ub_[j] < kInfinity)
        val_[j] = col_ub_[j];
      else
        val_[j] = 0.0;
    }
    for (int r = 0; r < m; ++r) {
      const int s = slack_col(r);
      basic_[r] = s;
      basic_pos_[s] = r;
      basic_flag_[s] = true;
    }
    binv_.assign(static_cast<std::size_t>(m) * m, 0.0);
    for (int r = 0; r < m; ++r) binv_[static_cast<std::size_t>(r) * m + r] = -1.0;
    compute_values();
  }

  // One simplex phase. Phase 1 minimizes total bound violation of the basic
  // columns; phase 2 minimizes the objective. Returns Optimal when no
  // improving column remains (phase 1: when feasible).
  LpStatus run_phase(bool phase1) {
    long stall = 0;
    bool bland = false;
    double last_measure = std::numeric_limits<double>::max();
    for (long iter = 0; iter < kIterationCap; ++iter) {
      const int m = static_cast<int>(basic_.size());
      std::vector<double> cb(m, 0.0);
      double measure = 0.0;
      if (phase1) {
        bool any_infeasible = false;
        for (int i = 0; i < m; ++i) {
          const int j = basic_[i];
          if (val_[j] < col_lb_[j] - kPrimalTol) {
            cb[i] = -1.0;
            measure += col_lb_[j] - val_[j];
            any_infeasible = true;
          } else if (val_[j] > col_ub_[j] + kPrimalTol) {
            cb[i] = 1.0;
            measure += val_[j] - col_ub_[j];
            any_infeasible = true;
          }
        }
        if (!any_infeasible) return LpStatus::Optimal;
      } else {
        for (int i = 0; i < m; ++i) cb[i] = obj_[basic_[i]];
        measure = objective();
      }
      if (measure < last_measure - 1e-11) {
        stall = 0;
        bland = false;
      } else if (++stall > kStallLimit) {
        bland = true;
      }
      last_measure = measure;

      const auto y = btran(cb);
      int enter = -1;
      double enter_score = kDualTol;
      int enter_dir = 0;
      for (int j = 0; j < col_count(); ++j) {
        if (basic_flag_[j]) continue;
        if (j >= nstruct_ && !rows_[j - nstruct_].active) continue;
        double d = phase1 ? 0.0 : obj_[j];
        for_column(j, [&](int r, double a) { d -= y[r] * a; });
        int dir = 0;
        double score = 0.0;
        if (d < -kDualTol && val_[j] < col_ub_[j] - 1e-9) {
          dir = 1;
          score = -d;
        } else if (d > kDualTol && val_[j] > col_lb_[j] + 1e-9) {
          dir = -1;
          score = d;
        }
        if (dir == 0) continue;
        if (bland) {
          enter = j;
          enter_dir = dir;
          break;
        }
        if (score > enter_score) {
          enter_score = score;
          enter = j;
          enter_dir = dir;
        }
      }
      if (enter < 0) return phase1 ? LpStatus::Infeasible : LpStatus::Optimal;

      const auto alpha = ftran(enter);
      // Ratio test. Basic columns move at rate gamma_i = -dir * alpha_i per
      // unit step. In phase 1 a basic column that is violating a bound may
      // travel exactly to that bound: a "gain" event that needs no pivot,
      // only repricing (the phase objective is piecewise linear there).
      double best_t = kInfinity;
      int leave_pos = -1;
      double leave_mag = 0.0;
      double leave_target = 0.0;
      bool gain_event = false;
      for (int i = 0; i < m; ++i) {
        const double gamma = -enter_dir * alpha[i];
        if (std::fabs(gamma) <= kPivotTol) continue;
        const int j = basic_[i];
        double t;
        double target;
        bool gain = false;
        if (phase1 && val_[j] < col_lb_[j] - kPrimalTol) {
          if (gamma <= 0) continue;  // moving further below; no event
          t = (col_lb_[j] - val_[j]) / gamma;
          target = col_lb_[j];
          gain = true;
        } else if (phase1 && val_[j] > col_ub_[j] + kPrimalTol) {
          if (gamma >= 0) continue;
          t = (col_ub_[j] - val_[j]) / gamma;
          target = col_ub_[j];
          gain = true;
        } else if (gamma > 0) {
          if (col_ub_[j] == kInfinity) continue;
          t = (col_ub_[j] - val_[j]) / gamma;
          target = col_ub_[j];
        } else {
          if (col_lb_[j] == -kInfinity) continue;
          t = (col_lb_[j] - val_[j]) / gamma;
          target = col_lb_[j];
        }
        if (t < -1e-12) t = 0.0;
        const double mag = std::fabs(gamma);
        if (t < best_t - 1e-12 || (t < best_t + 1e-12 && !gain_event == !gain && mag > leave_mag)) {
          best_t = t;
          leave_pos = i;
          leave_mag = mag;
          leave_target = target;
          gain_event = gain;
        }
      }
      // The entering column's own room in the chosen direction.
      const double span =
          enter_dir > 0 ? col_ub_[enter] - val_[enter] : val_[enter] - col_lb_[enter];
      if (span < best_t - 1e-12) {
        apply_step(enter, enter_dir, alpha, span);
        val_[enter] = enter_dir > 0 ? col_ub_[enter] : col_lb_[enter];
        continue;
      }
      if (leave_pos < 0) {
        if (phase1) return LpStatus::Infeasible;  // cannot happen: violation is bounded below
        return LpStatus::Unbounded;
      }
      apply_step(enter, enter_dir, alpha, best_t);
      val_[basic_[leave_pos]] = leave_target;
      if (gain_event) continue;  // no pivot; the phase objective bends here
      do_pivot(enter, leave_pos, alpha);
    }
    return LpStatus::IterationLimit;
  }

  void apply_step(int enter, int dir, const std::vector<double>& alpha, double t) {
    if (t == 0.0) return;
    const int m = static_cast<int>(basic_.size());
    for (int i = 0; i < m; ++i) val_[basic_[i]] += -dir * alpha[i] * t;
    val_[enter] += dir * t;
  }
};

}  // namespace fortify
