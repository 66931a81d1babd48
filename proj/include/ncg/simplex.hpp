#pragma once

// Dense tableau simplex for  max c'x  s.t.  A x <= b, x >= 0.
//
// Rows may be appended after a solve; the tableau is then repaired with dual
// simplex pivots, which is what a cutting-plane loop needs. The objective can
// be replaced in place, keeping the current (primal feasible) basis.

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace ncg {

/// bland: smallest-index pricing throughout. dantzig: most-violated pricing,
/// falling back to Bland's rule after a run of degenerate pivots.
enum class PivotRule { bland, dantzig };

enum class LpStatus { optimal, unbounded, infeasible, iteration_limit, numerical };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::iteration_limit: return "iteration limit";
    case LpStatus::numerical: return "numerical breakdown";
  }
  return "?";
}

class DenseSimplex {
 public:
  using RealMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  using RealVector = Eigen::VectorXd;

  explicit DenseSimplex(int num_vars, PivotRule rule = PivotRule::bland) : n_(num_vars), rule_(rule) {
    if (num_vars < 1) throw std::invalid_argument("DenseSimplex: need at least one variable");
    c_ = RealVector::Zero(n_);
    tab_ = RealMatrix::Zero(0, n_ + 1);
    z_ = RealVector::Zero(n_ + 1);
  }

  int num_vars() const { return n_; }
  int num_rows() const { return static_cast<int>(basis_.size()); }
  long long pivots() const { return pivots_; }
  void set_max_pivots(long long m) { max_pivots_ = m; }

  /// Appends a' x <= rhs and restores primal feasibility by dual simplex.
  void add_constraint(const RealVector& a, double rhs) {
    if (a.size() != n_) throw std::invalid_argument("DenseSimplex: constraint length mismatch");
    const int m = num_rows();
    const int cols = n_ + m + 1;  // old width, rhs last
    rows_a_.push_back(a);
    rows_b_.push_back(rhs);

    RealMatrix grown = RealMatrix::Zero(m + 1, cols + 1);
    grown.topLeftCorner(m, cols - 1) = tab_.leftCols(cols - 1);
    grown.block(0, cols, m, 1) = tab_.col(cols - 1);
    RealVector row = RealVector::Zero(cols + 1);
    row.head(n_) = a;
    row(cols - 1) = 1.0;  // new slack
    row(cols) = rhs;
    for (int r = 0; r < m; ++r) {
      const double coef = row(basis_[static_cast<std::size_t>(r)]);
      if (coef != 0.0) row -= coef * grown.row(r).transpose();
    }
    grown.row(m) = row.transpose();
    tab_ = std::move(grown);

    RealVector z = RealVector::Zero(cols + 1);
    z.head(cols - 1) = z_.head(cols - 1);
    z(cols) = z_(cols - 1);
    z_ = std::move(z);
    basis_.push_back(cols - 1);
    solved_ = false;
  }

  void set_objective(const RealVector& c) {
    if (c.size() != n_) throw std::invalid_argument("DenseSimplex: objective length mismatch");
    c_ = c;
    recompute_reduced_costs();
    solved_ = false;
  }

  /// Dual simplex until primal feasible, then primal simplex to optimality.
  LpStatus solve() {
    long long budget = max_pivots_;
    for (int attempt = 0;; ++attempt) {
      const LpStatus st = solve_tableau(budget);
      if (!tab_.allFinite() || !z_.allFinite()) return status_ = LpStatus::numerical;
      if (st != LpStatus::optimal) return status_ = st;
      // The tableau is updated in place and drifts; a vertex it calls optimal
      // must still satisfy the original rows.
      const double v = max_violation();
      if (v <= kCheckTol) break;
      if (attempt == 3 || !refactor()) return status_ = LpStatus::numerical;
    }
    solved_ = true;
    return status_ = LpStatus::optimal;
  }

  /// Largest excess a'x − b over the stored rows at the current vertex.
  double max_violation() const {
    const RealVector x = solution();
    double worst = 0.0;
    for (std::size_t r = 0; r < rows_a_.size(); ++r) {
      worst = std::max(worst, (rows_a_[r].dot(x) - rows_b_[r]) / (1.0 + std::abs(rows_b_[r])));
    }
    return worst;
  }


  RealVector solution() const {
    RealVector x = RealVector::Zero(n_);
    const int rhs = width() - 1;
    for (int r = 0; r < num_rows(); ++r) {
      const int j = basis_[static_cast<std::size_t>(r)];
      if (j < n_) x(j) = std::max(tab_(r, rhs), 0.0);
    }
    return x;
  }

  /// Removes constraints whose slack is basic and at least `min_slack`,
  /// except the first `keep_first`. Inactive rows carry no information about
  /// the current vertex, so the basis stays valid.
  int drop_slack_rows(double min_slack, int keep_first = 0) {
    const int m = num_rows();
    const int rhs = width() - 1;
    std::vector<bool> drop(static_cast<std::size_t>(m), false);  // by constraint index
    std::vector<int> row_of(static_cast<std::size_t>(m), -1);
    for (int r = 0; r < m; ++r) {
      const int j = basis_[static_cast<std::size_t>(r)];
      if (j >= n_) row_of[static_cast<std::size_t>(j - n_)] = r;
    }
    int dropped = 0;
    for (int i = keep_first; i < m; ++i) {
      const int r = row_of[static_cast<std::size_t>(i)];
      if (r >= 0 && tab_(r, rhs) >= min_slack) {
        drop[static_cast<std::size_t>(i)] = true;
        ++dropped;
      }
    }
    if (dropped == 0) return 0;
    std::vector<int> new_index(static_cast<std::size_t>(m), -1);
    int next = 0;
    for (int i = 0; i < m; ++i) {
      if (!drop[static_cast<std::size_t>(i)]) new_index[static_cast<std::size_t>(i)] = next++;
    }
    const int m2 = next;
    RealMatrix t = RealMatrix::Zero(m2, n_ + m2 + 1);
    RealVector z = RealVector::Zero(n_ + m2 + 1);
    std::vector<int> basis;
    std::vector<RealVector> ra;
    std::vector<double> rb;
    int out = 0;
    for (int r = 0; r < m; ++r) {
      const int j = basis_[static_cast<std::size_t>(r)];
      if (j >= n_ && drop[static_cast<std::size_t>(j - n_)]) continue;
      t.row(out).head(n_) = tab_.row(r).head(n_);
      basis.push_back(j < n_ ? j : n_ + new_index[static_cast<std::size_t>(j - n_)]);
      ++out;
    }
    for (int i = 0; i < m; ++i) {
      const int ni = new_index[static_cast<std::size_t>(i)];
      if (ni < 0) continue;
      for (int r = 0, o = 0; r < m; ++r) {
        const int j = basis_[static_cast<std::size_t>(r)];
        if (j >= n_ && drop[static_cast<std::size_t>(j - n_)]) continue;
        t(o++, n_ + ni) = tab_(r, n_ + i);
      }
      z(n_ + ni) = z_(n_ + i);
      ra.push_back(rows_a_[static_cast<std::size_t>(i)]);
      rb.push_back(rows_b_[static_cast<std::size_t>(i)]);
    }
    for (int r = 0, o = 0; r < m; ++r) {
      const int j = basis_[static_cast<std::size_t>(r)];
      if (j >= n_ && drop[static_cast<std::size_t>(j - n_)]) continue;
      t(o++, n_ + m2) = tab_(r, rhs);
    }
    z.head(n_) = z_.head(n_);
    z(n_ + m2) = z_(rhs);
    tab_ = std::move(t);
    z_ = std::move(z);
    basis_ = std::move(basis);
    rows_a_ = std::move(ra);
    rows_b_ = std::move(rb);
    return dropped;
  }

  const std::vector<RealVector>& rows() const { return rows_a_; }
  const std::vector<double>& rhs() const { return rows_b_; }

  double objective_value() const { return c_.dot(solution()); }
  LpStatus status() const { return status_; }

  /// Rebuilds the tableau from the stored rows and the current basis. Leaves
  /// the tableau alone and returns false if the basis is numerically singular.
  bool refactor() {
    const int m = num_rows();
    if (m == 0) return true;
    Eigen::MatrixXd full = Eigen::MatrixXd::Zero(m, n_ + m);
    RealVector b(m);
    for (int r = 0; r < m; ++r) {
      full.row(r).head(n_) = rows_a_[static_cast<std::size_t>(r)].transpose();
      full(r, n_ + r) = 1.0;
      b(r) = rows_b_[static_cast<std::size_t>(r)];
    }
    Eigen::MatrixXd bm(m, m);
    for (int r = 0; r < m; ++r) bm.col(r) = full.col(basis_[static_cast<std::size_t>(r)]);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(bm);
    if (!(lu.rcond() > 1e-13)) return false;
    tab_.leftCols(n_ + m) = lu.solve(full);
    tab_.col(n_ + m) = lu.solve(b);
    recompute_reduced_costs();
    return true;
  }

 private:
  LpStatus solve_tableau(long long& budget) {
    while (true) {
      int leave = -1;
      double worst = -kFeasTol;
      const int rhs = width() - 1;
      for (int r = 0; r < num_rows(); ++r) {
        const double v = tab_(r, rhs);
        if (v < worst) {
          if (use_bland()) {
            if (leave < 0 || basis_[static_cast<std::size_t>(r)] < basis_[static_cast<std::size_t>(leave)]) leave = r;
          } else {
            worst = v;
            leave = r;
          }
        }
      }
      if (leave < 0) break;
      // Harris two-pass test: bound the step with the tolerances relaxed, then
      // take the largest pivot among candidates under the bound.
      double bound = std::numeric_limits<double>::infinity();
      for (int j = 0; j < rhs; ++j) {
        const double t = tab_(leave, j);
        if (t < -kPivotTol) bound = std::min(bound, (std::max(z_(j), 0.0) + kCostTol) / -t);
      }
      int enter = -1;
      double biggest = 0.0;
      for (int j = 0; j < rhs; ++j) {
        const double t = tab_(leave, j);
        if (t >= -kPivotTol || std::max(z_(j), 0.0) / -t > bound) continue;
        if (use_bland() ? enter < 0 : -t > biggest) {
          biggest = -t;
          enter = j;
        }
      }
      if (enter < 0) return LpStatus::infeasible;
      pivot(leave, enter);
      if (--budget < 0) return LpStatus::iteration_limit;
    }
    while (true) {
      const int rhs = width() - 1;
      int enter = -1;
      double most = -kCostTol;
      for (int j = 0; j < rhs; ++j) {
        if (z_(j) < most) {
          enter = j;
          if (use_bland()) break;
          most = z_(j);
        }
      }
      if (enter < 0) break;
      double bound = std::numeric_limits<double>::infinity();
      for (int r = 0; r < num_rows(); ++r) {
        const double t = tab_(r, enter);
        if (t > kPivotTol) bound = std::min(bound, (std::max(tab_(r, rhs), 0.0) + kFeasTol) / t);
      }
      int leave = -1;
      double biggest = 0.0;
      for (int r = 0; r < num_rows(); ++r) {
        const double t = tab_(r, enter);
        if (t <= kPivotTol || std::max(tab_(r, rhs), 0.0) / t > bound) continue;
        const bool better = use_bland() ? (leave < 0 || basis_[static_cast<std::size_t>(r)] < basis_[static_cast<std::size_t>(leave)])
                                        : t > biggest;
        if (better) {
          biggest = t;
          leave = r;
        }
      }
      if (leave < 0) return LpStatus::unbounded;
      pivot(leave, enter);
      if (--budget < 0) return LpStatus::iteration_limit;
    }
    return LpStatus::optimal;
  }

  static constexpr double kPivotTol = 1e-9;
  static constexpr double kFeasTol = 1e-9;
  static constexpr double kCostTol = 1e-10;
  static constexpr double kCheckTol = 1e-9;

  int width() const { return static_cast<int>(tab_.cols()); }

  double cost(int j) const { return j < n_ ? c_(j) : 0.0; }

  void recompute_reduced_costs() {
    const int w = width();
    z_ = RealVector::Zero(w);
    for (int j = 0; j < w - 1; ++j) z_(j) = -cost(j);
    for (int r = 0; r < num_rows(); ++r) {
      const double cb = cost(basis_[static_cast<std::size_t>(r)]);
      if (cb != 0.0) z_ += cb * tab_.row(r).transpose();
    }
  }

  bool use_bland() const { return rule_ == PivotRule::bland || degenerate_run_ >= kDegenerateRun; }

  void pivot(int r, int j) {
    const double step = std::abs(tab_(r, width() - 1) / tab_(r, j));
    degenerate_run_ = step <= kFeasTol ? degenerate_run_ + 1 : 0;
    tab_.row(r) /= tab_(r, j);
    const RealVector prow = tab_.row(r).transpose();
    RealVector factors = tab_.col(j);
    factors(r) = 0.0;
    tab_.noalias() -= factors * prow.transpose();
    const double fz = z_(j);
    if (fz != 0.0) z_ -= fz * prow;
    basis_[static_cast<std::size_t>(r)] = j;
    if (++pivots_ % kRefactorEvery == 0) refactor();
  }

  static constexpr long long kRefactorEvery = 200;
  static constexpr int kDegenerateRun = 50;

  int n_;
  PivotRule rule_;
  RealVector c_;
  RealMatrix tab_;  // rows: constraints; cols: [x | slacks | rhs]
  RealVector z_;    // reduced costs (last entry: objective value)
  std::vector<int> basis_;
  std::vector<RealVector> rows_a_;
  std::vector<double> rows_b_;
  long long pivots_ = 0;
  int degenerate_run_ = 0;
  long long max_pivots_ = 200000;
  bool solved_ = false;
  LpStatus status_ = LpStatus::optimal;
};

}  // namespace ncg
