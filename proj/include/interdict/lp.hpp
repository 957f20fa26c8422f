#ifndef INTERDICT_LP_HPP
#define INTERDICT_LP_HPP

// Dense bounded-variable revised simplex.
//
// Problems are stated as
//
//     min/max  c'x
//     s.t.     row_lower <= A x <= row_upper
//              col_lower <=  x  <= col_upper
//
// Internally every row gets a logical variable s = A x carrying the row
// bounds, so the working system is [A | -I] (x, s) = 0 with all variables
// boxed (possibly by infinite bounds). The basis inverse is kept explicitly
// and updated by rank-one pivots; refactorization exploits the fact that
// most basic columns are logicals.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "interdict/errors.hpp"

namespace interdict {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Acceptance tolerances shared by every optimization in the library.
namespace tol {
inline constexpr double feas = 1e-7;      // primal feasibility residual
inline constexpr double gap = 1e-6;       // LP duality gap, relative
inline constexpr double cs = 1e-6;        // complementary slackness
inline constexpr double milp_gap = 1e-6;  // branch-and-bound gap, relative
inline constexpr double round = 1e-6;     // integrality
}  // namespace tol

enum class Sense { minimize, maximize };

struct Term {
  int col;
  double coef;
};

/// Linear program with two-sided rows and boxed columns.
/// Equality rows have row_lower == row_upper.
struct LpProblem {
  Sense sense = Sense::minimize;
  std::vector<double> cost;
  std::vector<double> col_lower;
  std::vector<double> col_upper;
  std::vector<std::string> col_names;
  std::vector<std::vector<Term>> rows;
  std::vector<double> row_lower;
  std::vector<double> row_upper;
  std::vector<std::string> row_names;

  int num_cols() const { return static_cast<int>(cost.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  int add_col(double c, double lo, double hi, std::string name = {}) {
    cost.push_back(c);
    col_lower.push_back(lo);
    col_upper.push_back(hi);
    col_names.push_back(std::move(name));
    return num_cols() - 1;
  }

  int add_row(std::vector<Term> terms, double lo, double hi, std::string name = {}) {
    rows.push_back(std::move(terms));
    row_lower.push_back(lo);
    row_upper.push_back(hi);
    row_names.push_back(std::move(name));
    return num_rows() - 1;
  }

  double row_activity(int r, std::span<const double> x) const {
    double s = 0.0;
    for (const auto& t : rows[r]) s += t.coef * x[t.col];
    return s;
  }

  /// Throws DimensionError / ValidationError on malformed data.
  void validate() const {
    const auto n = cost.size();
    if (col_lower.size() != n || col_upper.size() != n || col_names.size() != n)
      throw DimensionError("LpProblem: column arrays have inconsistent sizes");
    const auto m = rows.size();
    if (row_lower.size() != m || row_upper.size() != m || row_names.size() != m)
      throw DimensionError("LpProblem: row arrays have inconsistent sizes");
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(cost[j])) throw ValidationError("LpProblem: non-finite cost at column " + std::to_string(j));
      if (std::isnan(col_lower[j]) || std::isnan(col_upper[j]) || col_lower[j] == kInf || col_upper[j] == -kInf)
        throw ValidationError("LpProblem: bad bounds at column " + std::to_string(j));
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (std::isnan(row_lower[i]) || std::isnan(row_upper[i]) || row_lower[i] == kInf || row_upper[i] == -kInf)
        throw ValidationError("LpProblem: bad bounds at row " + std::to_string(i));
      for (const auto& t : rows[i]) {
        if (t.col < 0 || static_cast<std::size_t>(t.col) >= n)
          throw DimensionError("LpProblem: row " + std::to_string(i) + " references missing column");
        if (!std::isfinite(t.coef)) throw ValidationError("LpProblem: non-finite coefficient in row " + std::to_string(i));
      }
    }
  }
};

enum class LpStatus { optimal, infeasible, unbounded };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
  }
  return "?";
}

enum class VarStatus : std::uint8_t { basic, at_lower, at_upper, free_zero };

/// Status of every structural column followed by every row logical.
struct Basis {
  std::vector<VarStatus> status;
  bool empty() const { return status.empty(); }
};

/// Dual values follow the shadow-price convention: row_dual[i] is the
/// derivative of the objective with respect to the active bound of row i,
/// reduced_cost[j] the derivative with respect to the active bound of x_j.
struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> x;
  std::vector<double> row_dual;
  std::vector<double> reduced_cost;
  std::vector<double> row_activity;
  double objective = 0.0;
  int iterations = 0;
  Basis basis;
};

struct LpOptions {
  int max_iterations = 0;        // 0 -> automatic
  int refactor_interval = 80;
  int degenerate_before_bland = 40;
};

namespace detail {

class SimplexEngine {
public:
  explicit SimplexEngine(const LpProblem& p) : m_(p.num_rows()), n_(p.num_cols()) {
    p.validate();
    const int total = n_ + m_;
    cols_.resize(n_);
    for (int i = 0; i < m_; ++i)
      for (const auto& t : p.rows[i])
        if (t.coef != 0.0) cols_[t.col].push_back({i, t.coef});
    // merge duplicate entries within a column
    for (auto& col : cols_) {
      std::sort(col.begin(), col.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      std::vector<std::pair<int, double>> merged;
      for (const auto& e : col) {
        if (!merged.empty() && merged.back().first == e.first) merged.back().second += e.second;
        else merged.push_back(e);
      }
      std::erase_if(merged, [](const auto& e) { return e.second == 0.0; });
      col = std::move(merged);
    }
    sign_ = p.sense == Sense::maximize ? -1.0 : 1.0;
    cost_.assign(total, 0.0);
    lo_.assign(total, 0.0);
    hi_.assign(total, 0.0);
    double cmax = 0.0;
    for (int j = 0; j < n_; ++j) {
      cost_[j] = sign_ * p.cost[j];
      cmax = std::max(cmax, std::abs(cost_[j]));
      lo_[j] = p.col_lower[j];
      hi_[j] = p.col_upper[j];
    }
    for (int i = 0; i < m_; ++i) {
      lo_[n_ + i] = p.row_lower[i];
      hi_[n_ + i] = p.row_upper[i];
    }
    dual_tol_ = 1e-9 * std::max(1.0, cmax);
  }

  int num_rows() const { return m_; }
  int num_cols() const { return n_; }

  void set_col_bounds(int j, double lo, double hi) {
    lo_[j] = lo;
    hi_[j] = hi;
  }
  double col_lower(int j) const { return lo_[j]; }
  double col_upper(int j) const { return hi_[j]; }

  /// Re-solves from the basis left by the previous solve (any bound changes
  /// are absorbed by phase 1).
  LpSolution resolve(const LpOptions& opt = {}) {
    if (!factored_) return solve(nullptr, opt);
    Basis current;
    current.status = status_;
    return solve(&current, opt);
  }

  LpSolution solve(const Basis* warm, const LpOptions& opt = {}) {
    const int total = n_ + m_;
    for (int j = 0; j < total; ++j)
      if (lo_[j] > hi_[j] + 1e-12) {
        LpSolution s;
        s.status = LpStatus::infeasible;
        return s;
      }
    if (warm && factored_ && warm->status == status_) {
      // Same basis as the last solve: keep the inverse, re-seat the nonbasics.
      for (int j = 0; j < total; ++j)
        if (status_[j] != VarStatus::basic) seat(j);
      basic_values();
    } else {
      if (!(warm && static_cast<int>(warm->status.size()) == total && load_basis(*warm))) slack_basis();
      if (!refactor()) {
        slack_basis();
        refactor();
      }
    }
    const int max_iter = opt.max_iterations > 0 ? opt.max_iterations : 50000 + 50 * (m_ + n_);
    int iterations = 0;
    int degenerate = 0;
    bool bland = false;
    int since_refactor = 0;
    std::vector<double> cb(m_), y(m_), alpha(m_);
    LpStatus outcome = LpStatus::optimal;

    for (;;) {
      if (iterations >= max_iter) throw SolverError("simplex: iteration limit reached");
      if (since_refactor >= opt.refactor_interval) {
        if (!refactor()) throw SolverError("simplex: singular basis during refactorization");
        since_refactor = 0;
      }
      // Phase selection: minimize the sum of infeasibilities while any basic
      // variable is outside its box, otherwise the true objective.
      bool phase1 = false;
      for (int p = 0; p < m_; ++p) {
        const int j = head_[p];
        const double v = x_[j];
        if (v < lo_[j] - ptol(lo_[j])) {
          cb[p] = -1.0;
          phase1 = true;
        } else if (v > hi_[j] + ptol(hi_[j])) {
          cb[p] = 1.0;
          phase1 = true;
        } else {
          cb[p] = 0.0;
        }
      }
      if (!phase1)
        for (int p = 0; p < m_; ++p) cb[p] = cost_[head_[p]];
      compute_duals(cb, y);
      const double dtol = phase1 ? 1e-9 : dual_tol_;

      // Pricing.
      int enter = -1;
      double best = 0.0;
      double enter_d = 0.0;
      for (int j = 0; j < total; ++j) {
        const VarStatus st = status_[j];
        if (st == VarStatus::basic) continue;
        if (lo_[j] == hi_[j]) continue;
        const double d = (phase1 ? 0.0 : cost_[j]) - dot_column(j, y);
        bool eligible = false;
        if (st == VarStatus::at_lower) eligible = d < -dtol;
        else if (st == VarStatus::at_upper) eligible = d > dtol;
        else eligible = std::abs(d) > dtol;
        if (!eligible) continue;
        if (bland) {
          enter = j;
          enter_d = d;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          enter = j;
          enter_d = d;
        }
      }
      if (enter < 0) {
        outcome = phase1 ? LpStatus::infeasible : LpStatus::optimal;
        break;
      }
      const double dir = enter_d < 0.0 ? 1.0 : -1.0;
      ftran(enter, alpha);

      // Ratio test (Harris two-pass unless in Bland mode).
      constexpr double piv_tol = 1e-9;
      double theta_max = kInf;
      for (int p = 0; p < m_; ++p) {
        if (std::abs(alpha[p]) <= piv_tol) continue;
        const double delta = -dir * alpha[p];
        double relaxed = kInf;
        ratio_for(p, delta, phase1, &relaxed, nullptr);
        theta_max = std::min(theta_max, relaxed);
      }
      const double flip = hi_[enter] - lo_[enter];  // inf when either bound is infinite
      int leave = -1;
      double step = 0.0;
      double leave_bound = 0.0;
      if (flip < kInf && flip <= theta_max) {
        step = flip;
      } else if (theta_max == kInf) {
        if (phase1) throw SolverError("simplex: unbounded phase-1 direction");
        outcome = LpStatus::unbounded;
        break;
      } else {
        double best_piv = -1.0;
        double best_ratio = kInf;
        for (int p = 0; p < m_; ++p) {
          if (std::abs(alpha[p]) <= piv_tol) continue;
          const double delta = -dir * alpha[p];
          double exact = kInf;
          double bnd = 0.0;
          double relaxed = kInf;
          ratio_for(p, delta, phase1, &relaxed, &exact, &bnd);
          if (exact == kInf) continue;
          if (bland) {
            if (exact < best_ratio - 1e-12 ||
                (exact <= best_ratio + 1e-12 && leave >= 0 && head_[p] < head_[leave])) {
              best_ratio = exact;
              leave = p;
              leave_bound = bnd;
            }
          } else if (exact <= theta_max) {
            const double piv = std::abs(alpha[p]);
            if (piv > best_piv || (piv == best_piv && head_[p] < head_[leave])) {
              best_piv = piv;
              leave = p;
              leave_bound = bnd;
              best_ratio = exact;
            }
          }
        }
        if (leave < 0) throw SolverError("simplex: ratio test failed");
        step = std::max(best_ratio, 0.0);
      }

      // Update primal values.
      if (step != 0.0) {
        x_[enter] += dir * step;
        for (int p = 0; p < m_; ++p)
          if (alpha[p] != 0.0) x_[head_[p]] += -dir * alpha[p] * step;
      }
      if (leave < 0) {
        status_[enter] = status_[enter] == VarStatus::at_lower ? VarStatus::at_upper : VarStatus::at_lower;
        x_[enter] = status_[enter] == VarStatus::at_lower ? lo_[enter] : hi_[enter];
      } else {
        const int out = head_[leave];
        x_[out] = leave_bound;
        status_[out] = (leave_bound == lo_[out]) ? VarStatus::at_lower : VarStatus::at_upper;
        status_[enter] = VarStatus::basic;
        head_[leave] = enter;
        pivot(leave, alpha);
        ++since_refactor;
      }
      ++iterations;
      if (step <= 1e-12) {
        if (++degenerate > opt.degenerate_before_bland) bland = true;
      } else {
        degenerate = 0;
        bland = false;
      }
    }

    LpSolution sol;
    sol.status = outcome;
    sol.iterations = iterations;
    sol.basis.status = status_;
    if (outcome != LpStatus::optimal) return sol;

    // Clean final values; refactor only when many updates have accumulated.
    if (since_refactor > opt.refactor_interval / 4 || !factored_) {
      if (!refactor()) throw SolverError("simplex: singular final basis");
    } else {
      basic_values();
    }
    for (int p = 0; p < m_; ++p) cb[p] = cost_[head_[p]];
    compute_duals(cb, y);
    sol.x.assign(x_.begin(), x_.begin() + n_);
    sol.row_activity.assign(x_.begin() + n_, x_.end());
    sol.row_dual.resize(m_);
    sol.reduced_cost.resize(n_);
    double obj = 0.0;
    for (int j = 0; j < n_; ++j) {
      obj += cost_[j] * x_[j];
      sol.reduced_cost[j] = sign_ * (status_[j] == VarStatus::basic ? 0.0 : cost_[j] - dot_column(j, y));
    }
    // The logical of row i has zero cost and column -e_i, so its reduced cost is y_i.
    for (int i = 0; i < m_; ++i) sol.row_dual[i] = sign_ * (status_[n_ + i] == VarStatus::basic ? 0.0 : y[i]);
    sol.objective = sign_ * obj;
    return sol;
  }

private:
  static double ptol(double bound) { return 1e-9 * (1.0 + (std::isfinite(bound) ? std::abs(bound) : 0.0)); }

  // Ratio of basic position p moving at rate `delta` per unit step.
  void ratio_for(int p, double delta, bool phase1_mode, double* relaxed, double* exact, double* bound = nullptr) const {
    const int j = head_[p];
    const double v = x_[j];
    const double lo = lo_[j], hi = hi_[j];
    const double tl = ptol(lo), th = ptol(hi);
    *relaxed = kInf;
    if (exact) *exact = kInf;
    const bool below = v < lo - tl;
    const bool above = v > hi + th;
    if (phase1_mode && (below || above)) {
      // Infeasible basic variable: breakpoint where it re-enters its box.
      if (below && delta > 0.0) {
        *relaxed = (lo - v) / delta;
        if (exact) *exact = *relaxed;
        if (bound) *bound = lo;
      } else if (above && delta < 0.0) {
        *relaxed = (v - hi) / (-delta);
        if (exact) *exact = *relaxed;
        if (bound) *bound = hi;
      }
      return;
    }
    if (delta < 0.0 && lo > -kInf) {
      *relaxed = (v - lo + tl) / (-delta);
      if (exact) *exact = std::max(0.0, (v - lo) / (-delta));
      if (bound) *bound = lo;
    } else if (delta > 0.0 && hi < kInf) {
      *relaxed = (hi - v + th) / delta;
      if (exact) *exact = std::max(0.0, (hi - v) / delta);
      if (bound) *bound = hi;
    }
  }

  double dot_column(int j, const std::vector<double>& y) const {
    if (j >= n_) return -y[j - n_];
    double s = 0.0;
    for (const auto& [r, v] : cols_[j]) s += v * y[r];
    return s;
  }

  void compute_duals(const std::vector<double>& cb, std::vector<double>& y) const {
    std::fill(y.begin(), y.end(), 0.0);
    for (int p = 0; p < m_; ++p) {
      const double c = cb[p];
      if (c == 0.0) continue;
      const double* row = &binv_[static_cast<std::size_t>(p) * m_];
      for (int r = 0; r < m_; ++r) y[r] += c * row[r];
    }
  }

  void ftran(int j, std::vector<double>& alpha) const {
    for (int p = 0; p < m_; ++p) {
      const double* row = &binv_[static_cast<std::size_t>(p) * m_];
      double s = 0.0;
      if (j >= n_) {
        s = -row[j - n_];
      } else {
        for (const auto& [r, v] : cols_[j]) s += row[r] * v;
      }
      alpha[p] = s;
    }
  }

  void pivot(int r, const std::vector<double>& alpha) {
    double* prow = &binv_[static_cast<std::size_t>(r) * m_];
    const double inv = 1.0 / alpha[r];
    for (int k = 0; k < m_; ++k) prow[k] *= inv;
    for (int p = 0; p < m_; ++p) {
      if (p == r || alpha[p] == 0.0) continue;
      double* row = &binv_[static_cast<std::size_t>(p) * m_];
      const double f = alpha[p];
      for (int k = 0; k < m_; ++k) row[k] -= f * prow[k];
    }
  }

  void place_nonbasic(int j) {
    if (lo_[j] > -kInf) {
      status_[j] = VarStatus::at_lower;
      x_[j] = lo_[j];
    } else if (hi_[j] < kInf) {
      status_[j] = VarStatus::at_upper;
      x_[j] = hi_[j];
    } else {
      status_[j] = VarStatus::free_zero;
      x_[j] = 0.0;
    }
  }

  void slack_basis() {
    const int total = n_ + m_;
    status_.assign(total, VarStatus::at_lower);
    x_.assign(total, 0.0);
    head_.assign(m_, 0);
    for (int j = 0; j < n_; ++j) place_nonbasic(j);
    for (int i = 0; i < m_; ++i) {
      status_[n_ + i] = VarStatus::basic;
      head_[i] = n_ + i;
    }
  }

  bool load_basis(const Basis& b) {
    const int total = n_ + m_;
    status_ = b.status;
    x_.assign(total, 0.0);
    head_.clear();
    for (int j = 0; j < total; ++j) {
      if (status_[j] == VarStatus::basic) {
        head_.push_back(j);
        continue;
      }
      seat(j);
    }
    return static_cast<int>(head_.size()) == m_;
  }

  // Re-seats a nonbasic variable on its (possibly changed) bounds.
  void seat(int j) {
    if (status_[j] == VarStatus::at_lower && lo_[j] > -kInf) x_[j] = lo_[j];
    else if (status_[j] == VarStatus::at_upper && hi_[j] < kInf) x_[j] = hi_[j];
    else place_nonbasic(j);
  }

  // Rebuild the explicit inverse and basic values. Returns false if singular.
  bool refactor() {
    factored_ = false;
    binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
    std::vector<int> covered(m_, -1);  // row -> basis position of its logical
    std::vector<int> spos;             // basis positions holding structurals
    for (int p = 0; p < m_; ++p) {
      const int j = head_[p];
      if (j >= n_) covered[j - n_] = p;
      else spos.push_back(p);
    }
    std::vector<int> free_rows;
    for (int i = 0; i < m_; ++i)
      if (covered[i] < 0) free_rows.push_back(i);
    const int k = static_cast<int>(spos.size());
    if (static_cast<int>(free_rows.size()) != k) return false;

    // Kernel K = A[free_rows, structural basics], inverted by Gauss-Jordan.
    std::vector<int> row_index(m_, -1);
    for (int t = 0; t < k; ++t) row_index[free_rows[t]] = t;
    std::vector<double> kmat(static_cast<std::size_t>(k) * k, 0.0), kinv(static_cast<std::size_t>(k) * k, 0.0);
    for (int s = 0; s < k; ++s)
      for (const auto& [r, v] : cols_[head_[spos[s]]])
        if (row_index[r] >= 0) kmat[static_cast<std::size_t>(row_index[r]) * k + s] = v;
    for (int t = 0; t < k; ++t) kinv[static_cast<std::size_t>(t) * k + t] = 1.0;
    for (int c = 0; c < k; ++c) {
      int piv = -1;
      double best = 0.0;
      for (int r = c; r < k; ++r) {
        const double a = std::abs(kmat[static_cast<std::size_t>(r) * k + c]);
        if (a > best) {
          best = a;
          piv = r;
        }
      }
      if (piv < 0 || best < 1e-11) return false;
      if (piv != c) {
        for (int q = 0; q < k; ++q) {
          std::swap(kmat[static_cast<std::size_t>(piv) * k + q], kmat[static_cast<std::size_t>(c) * k + q]);
          std::swap(kinv[static_cast<std::size_t>(piv) * k + q], kinv[static_cast<std::size_t>(c) * k + q]);
        }
      }
      const double inv = 1.0 / kmat[static_cast<std::size_t>(c) * k + c];
      for (int q = 0; q < k; ++q) {
        kmat[static_cast<std::size_t>(c) * k + q] *= inv;
        kinv[static_cast<std::size_t>(c) * k + q] *= inv;
      }
      for (int r = 0; r < k; ++r) {
        if (r == c) continue;
        const double f = kmat[static_cast<std::size_t>(r) * k + c];
        if (f == 0.0) continue;
        for (int q = 0; q < k; ++q) {
          kmat[static_cast<std::size_t>(r) * k + q] -= f * kmat[static_cast<std::size_t>(c) * k + q];
          kinv[static_cast<std::size_t>(r) * k + q] -= f * kinv[static_cast<std::size_t>(c) * k + q];
        }
      }
    }
    // kinv maps b[free_rows] -> structural basics (K x = b, with K rows indexed by
    // free_rows and columns by structural position s). Gauss-Jordan above works
    // on K (row t, col s), so kinv[s][t] is the inverse entry.
    for (int s = 0; s < k; ++s) {
      double* row = &binv_[static_cast<std::size_t>(spos[s]) * m_];
      for (int t = 0; t < k; ++t) row[free_rows[t]] = kinv[static_cast<std::size_t>(s) * k + t];
    }
    for (int i = 0; i < m_; ++i)
      if (covered[i] >= 0) binv_[static_cast<std::size_t>(covered[i]) * m_ + i] = -1.0;
    for (int s = 0; s < k; ++s) {
      const double* srow = &binv_[static_cast<std::size_t>(spos[s]) * m_];
      for (const auto& [r, v] : cols_[head_[spos[s]]]) {
        if (covered[r] < 0) continue;
        double* row = &binv_[static_cast<std::size_t>(covered[r]) * m_];
        for (int t = 0; t < k; ++t) row[free_rows[t]] += v * srow[free_rows[t]];
      }
    }
    factored_ = true;
    basic_values();
    return true;
  }

  // Basic values: B x_B = -sum_{nonbasic} a_j x_j.
  void basic_values() {
    std::vector<double> rhs(m_, 0.0);
    for (int j = 0; j < n_ + m_; ++j) {
      if (status_[j] == VarStatus::basic || x_[j] == 0.0) continue;
      if (j >= n_) rhs[j - n_] += x_[j];
      else
        for (const auto& [r, v] : cols_[j]) rhs[r] -= v * x_[j];
    }
    for (int p = 0; p < m_; ++p) {
      const double* row = &binv_[static_cast<std::size_t>(p) * m_];
      double s = 0.0;
      for (int r = 0; r < m_; ++r) s += row[r] * rhs[r];
      x_[head_[p]] = s;
    }
  }

  int m_, n_;
  bool factored_ = false;
  double sign_ = 1.0;
  double dual_tol_ = 1e-9;
  std::vector<std::vector<std::pair<int, double>>> cols_;
  std::vector<double> cost_, lo_, hi_, x_;
  std::vector<VarStatus> status_;
  std::vector<int> head_;
  std::vector<double> binv_;
};

}  // namespace detail

/// Solves an LP; `warm` (if given and of matching size) seeds the basis.
inline LpSolution solve_lp(const LpProblem& p, const LpOptions& opt = {}, const Basis* warm = nullptr) {
  detail::SimplexEngine engine(p);
  return engine.solve(warm, opt);
}

/// Dual objective assembled from row duals and reduced costs; equals the
/// primal objective at an optimum (strong duality).
inline double dual_objective(const LpProblem& p, const LpSolution& s) {
  auto term = [](double mult, double lo, double hi) {
    if (mult > 0.0) return lo > -kInf ? mult * lo : (mult > 1e-9 ? -kInf : 0.0);
    if (mult < 0.0) return hi < kInf ? mult * hi : (mult < -1e-9 ? -kInf : 0.0);
    return 0.0;
  };
  // For a maximization the multipliers flip sign relative to the min form.
  const double sg = p.sense == Sense::maximize ? -1.0 : 1.0;
  double d = 0.0;
  for (int i = 0; i < p.num_rows(); ++i) d += sg * term(sg * s.row_dual[i], p.row_lower[i], p.row_upper[i]);
  for (int j = 0; j < p.num_cols(); ++j) d += sg * term(sg * s.reduced_cost[j], p.col_lower[j], p.col_upper[j]);
  return d;
}

}  // namespace interdict

#endif
