#pragma once

// Dense bounded-variable primal simplex.
//
// Every row i gets a logical variable r_i with A_i x - r_i = 0; the row sense
// becomes a bound on r_i.  Together with the column bounds this gives a
// problem with only equality rows and bounded (possibly free) variables.  The
// start basis is the all-logical basis.  Phase 1 minimizes the sum of bound
// violations of the basic variables (piecewise-linear cost, ratio test stops
// at the first breakpoint); phase 2 minimizes the real objective.  The basis
// inverse is kept explicitly and refactorized periodically.
//
// Row duals are y = c_B B^-1.  For a >= row binding at optimality y_i >= 0,
// i.e. the duals are the shadow prices d(objective)/d(rhs).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace hsdepth::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { kGreaterEqual, kLessEqual, kEqual };
enum class Status { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

inline std::string_view to_string(Status s) {
  switch (s) {
    case Status::kOptimal: return "Optimal";
    case Status::kInfeasible: return "Infeasible";
    case Status::kUnbounded: return "Unbounded";
    case Status::kIterationLimit: return "IterationLimit";
  }
  return "?";
}

/// minimize cost . x  subject to  rows[i] . x (sense_i) rhs_i,  lo <= x <= hi.
struct LpModel {
  std::vector<double> cost;
  std::vector<double> col_lower;
  std::vector<double> col_upper;
  std::vector<std::vector<double>> rows;
  std::vector<Sense> senses;
  std::vector<double> rhs;

  int num_cols() const { return static_cast<int>(cost.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  int add_column(double c, double lo, double hi) {
    cost.push_back(c);
    col_lower.push_back(lo);
    col_upper.push_back(hi);
    for (auto& r : rows) r.push_back(0.0);
    return num_cols() - 1;
  }

  int add_row(std::vector<double> coeffs, Sense sense, double b) {
    if (static_cast<int>(coeffs.size()) != num_cols()) {
      throw std::invalid_argument("row length does not match column count");
    }
    rows.push_back(std::move(coeffs));
    senses.push_back(sense);
    rhs.push_back(b);
    return num_rows() - 1;
  }

  void validate() const {
    const auto n = cost.size();
    if (col_lower.size() != n || col_upper.size() != n) {
      throw std::invalid_argument("bound vectors do not match column count");
    }
    if (senses.size() != rows.size() || rhs.size() != rows.size()) {
      throw std::invalid_argument("row data sizes disagree");
    }
    for (const auto& r : rows) {
      if (r.size() != n) throw std::invalid_argument("row length does not match column count");
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (!(col_lower[j] <= col_upper[j])) throw std::invalid_argument("column lower bound exceeds upper bound");
      if (col_lower[j] == kInf || col_upper[j] == -kInf) throw std::invalid_argument("column bound is infinite in the wrong direction");
    }
  }
};

struct LpOptions {
  double feas_tol = 1e-9;
  double opt_tol = 1e-9;
  double pivot_tol = 1e-9;
  long max_iters = 50'000;
  int stall_threshold = 50;    // degenerate pivots before switching to Bland's rule
  int refactor_interval = 64;  // pivots between basis reinversions
};

struct LpSolution {
  Status status = Status::kIterationLimit;
  double objective_value = 0.0;
  std::vector<double> primal;
  std::vector<double> duals;
  std::vector<double> reduced_costs;
  std::vector<double> row_activity;
  long iterations = 0;
};

/// Simplex engine that keeps its basis between calls, so that bound changes
/// and appended rows are re-solved from the previous basis.
class LpSolver {
 public:
  explicit LpSolver(LpModel model, LpOptions options = {})
      : model_(std::move(model)), opts_(options) {
    model_.validate();
    n_ = model_.num_cols();
    m_ = model_.num_rows();
    A_.resize(m_, n_);
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < n_; ++j) A_(i, j) = model_.rows[i][j];
    lower_.resize(n_ + m_);
    upper_.resize(n_ + m_);
    cost_.assign(n_ + m_, 0.0);
    for (int j = 0; j < n_; ++j) {
      lower_[j] = model_.col_lower[j];
      upper_[j] = model_.col_upper[j];
      cost_[j] = model_.cost[j];
    }
    for (int i = 0; i < m_; ++i) set_logical_bounds(i);
    slack_basis();
  }

  const LpModel& model() const { return model_; }
  int num_cols() const { return n_; }
  int num_rows() const { return m_; }
  const LpOptions& options() const { return opts_; }

  void set_col_bounds(int j, double lo, double hi) {
    if (!(lo <= hi)) throw std::invalid_argument("column lower bound exceeds upper bound");
    model_.col_lower[j] = lo;
    model_.col_upper[j] = hi;
    lower_[j] = lo;
    upper_[j] = hi;
    resnap(j);
  }

  /// Sets lo <= row_i . x <= hi; either side may be infinite.
  void set_row_bounds(int i, double lo, double hi) {
    if (!(lo <= hi)) throw std::invalid_argument("row lower bound exceeds upper bound");
    const int k = n_ + i;
    lower_[k] = lo;
    upper_[k] = hi;
    if (lo == hi) {
      model_.senses[i] = Sense::kEqual;
      model_.rhs[i] = lo;
    } else if (hi == kInf) {
      model_.senses[i] = Sense::kGreaterEqual;
      model_.rhs[i] = lo;
    } else {
      model_.senses[i] = Sense::kLessEqual;
      model_.rhs[i] = hi;
    }
    resnap(k);
  }

  double row_lower(int i) const { return lower_[n_ + i]; }
  double row_upper(int i) const { return upper_[n_ + i]; }

  /// Appends a row; its logical variable enters the basis.
  int add_row(const std::vector<double>& coeffs, Sense sense, double b) {
    model_.add_row(coeffs, sense, b);
    const int old_m = m_;
    ++m_;
    A_.conservativeResize(m_, n_);
    for (int j = 0; j < n_; ++j) A_(old_m, j) = coeffs[j];

    // Logical indices are n_ + i, so appending a row appends a variable.
    lower_.push_back(0.0);
    upper_.push_back(0.0);
    cost_.push_back(0.0);
    set_logical_bounds(old_m);
    x_.push_back(0.0);
    state_.push_back(VarState::kBasic);

    // B' = [[B, 0], [a_B^T, -1]]  =>  B'^-1 = [[B^-1, 0], [a_B^T B^-1, -1]].
    Eigen::RowVectorXd a_b(old_m);
    for (int p = 0; p < old_m; ++p) {
      const int k = basis_[p];
      a_b(p) = k < n_ ? coeffs[k] : 0.0;
    }
    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(m_, m_);
    next.topLeftCorner(old_m, old_m) = binv_;
    next.block(old_m, 0, 1, old_m) = a_b * binv_;
    next(old_m, old_m) = -1.0;
    binv_ = std::move(next);
    basis_.push_back(n_ + old_m);
    dirty_ = true;
    return old_m;
  }

  /// Re-solves from the current basis.
  const LpSolution& solve() {
    run();
    return solution_;
  }

  const LpSolution& solution() const { return solution_; }

 private:
  enum class VarState { kBasic, kAtLower, kAtUpper, kAtZero };

  void set_logical_bounds(int i) {
    const int k = n_ + i;
    const double b = model_.rhs[i];
    switch (model_.senses[i]) {
      case Sense::kGreaterEqual: lower_[k] = b; upper_[k] = kInf; break;
      case Sense::kLessEqual: lower_[k] = -kInf; upper_[k] = b; break;
      case Sense::kEqual: lower_[k] = b; upper_[k] = b; break;
    }
  }

  void nonbasic_at_best_bound(int k) {
    if (std::isfinite(lower_[k])) {
      state_[k] = VarState::kAtLower;
      x_[k] = lower_[k];
    } else if (std::isfinite(upper_[k])) {
      state_[k] = VarState::kAtUpper;
      x_[k] = upper_[k];
    } else {
      state_[k] = VarState::kAtZero;
      x_[k] = 0.0;
    }
  }

  void resnap(int k) {
    if (state_.empty()) return;
    switch (state_[k]) {
      case VarState::kBasic: break;
      case VarState::kAtLower:
        if (std::isfinite(lower_[k])) x_[k] = lower_[k];
        else nonbasic_at_best_bound(k);
        break;
      case VarState::kAtUpper:
        if (std::isfinite(upper_[k])) x_[k] = upper_[k];
        else nonbasic_at_best_bound(k);
        break;
      case VarState::kAtZero: nonbasic_at_best_bound(k); break;
    }
    dirty_ = true;
  }

  void slack_basis() {
    const int total = n_ + m_;
    state_.assign(total, VarState::kAtLower);
    x_.assign(total, 0.0);
    basis_.resize(m_);
    for (int j = 0; j < n_; ++j) nonbasic_at_best_bound(j);
    for (int i = 0; i < m_; ++i) {
      basis_[i] = n_ + i;
      state_[n_ + i] = VarState::kBasic;
    }
    binv_ = -Eigen::MatrixXd::Identity(m_, m_);
    dirty_ = true;
  }

  Eigen::VectorXd column(int k) const {
    if (k < n_) return A_.col(k);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(m_);
    e(k - n_) = -1.0;
    return e;
  }

  // x_B = -B^-1 (N x_N), since [A -I] x = 0.
  void recompute_basics() {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(m_);
    for (int j = 0; j < n_; ++j) {
      if (state_[j] != VarState::kBasic && x_[j] != 0.0) v += A_.col(j) * x_[j];
    }
    for (int i = 0; i < m_; ++i) {
      const int k = n_ + i;
      if (state_[k] != VarState::kBasic) v(i) -= x_[k];
    }
    const Eigen::VectorXd xb = -(binv_ * v);
    for (int p = 0; p < m_; ++p) x_[basis_[p]] = xb(p);
    dirty_ = false;
  }

  // Returns false when the basis matrix is singular.
  bool refactor() {
    pivots_since_refactor_ = 0;
    if (m_ == 0) return true;
    Eigen::MatrixXd b(m_, m_);
    for (int p = 0; p < m_; ++p) b.col(p) = column(basis_[p]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(b);
    if (!lu.isInvertible()) return false;
    binv_ = lu.inverse();
    return true;
  }

  void refactor_or_reset() {
    if (!refactor()) slack_basis();
    recompute_basics();
  }

  double infeasibility(int k) const {
    if (x_[k] < lower_[k] - opts_.feas_tol) return lower_[k] - x_[k];
    if (x_[k] > upper_[k] + opts_.feas_tol) return x_[k] - upper_[k];
    return 0.0;
  }

  bool primal_feasible() const {
    for (int p = 0; p < m_; ++p) {
      if (infeasibility(basis_[p]) > 0.0) return false;
    }
    return true;
  }

  Eigen::VectorXd compute_duals(bool phase1) const {
    Eigen::VectorXd cb(m_);
    for (int p = 0; p < m_; ++p) {
      const int k = basis_[p];
      if (phase1) {
        if (x_[k] < lower_[k] - opts_.feas_tol) cb(p) = -1.0;
        else if (x_[k] > upper_[k] + opts_.feas_tol) cb(p) = 1.0;
        else cb(p) = 0.0;
      } else {
        cb(p) = cost_[k];
      }
    }
    return binv_.transpose() * cb;
  }

  double reduced_cost(int k, const Eigen::VectorXd& y, bool phase1) const {
    const double c = phase1 ? 0.0 : cost_[k];
    if (k < n_) return c - y.dot(A_.col(k));
    return c + y(k - n_);
  }

  // Direction (+1 increase, -1 decrease) in which nonbasic k improves, or 0.
  int improving_direction(int k, double d) const {
    if (lower_[k] == upper_[k]) return 0;
    switch (state_[k]) {
      case VarState::kBasic: return 0;
      case VarState::kAtLower: return d < -opts_.opt_tol ? 1 : 0;
      case VarState::kAtUpper: return d > opts_.opt_tol ? -1 : 0;
      case VarState::kAtZero:
        if (d < -opts_.opt_tol) return 1;
        if (d > opts_.opt_tol) return -1;
        return 0;
    }
    return 0;
  }

  void finish(Status status, long iters) {
    solution_.status = status;
    solution_.iterations = iters;
    solution_.primal.assign(x_.begin(), x_.begin() + n_);
    solution_.row_activity.resize(m_);
    Eigen::Map<const Eigen::VectorXd> xs(x_.data(), n_);
    const Eigen::VectorXd act = A_ * xs;
    for (int i = 0; i < m_; ++i) solution_.row_activity[i] = act(i);
    solution_.objective_value = 0.0;
    for (int j = 0; j < n_; ++j) solution_.objective_value += cost_[j] * x_[j];
    const Eigen::VectorXd y = compute_duals(false);
    solution_.duals.assign(y.data(), y.data() + m_);
    solution_.reduced_costs.resize(n_);
    for (int j = 0; j < n_; ++j) {
      solution_.reduced_costs[j] = state_[j] == VarState::kBasic ? 0.0 : reduced_cost(j, y, false);
    }
  }

  void run() {
    if (dirty_) recompute_basics();
    long iters = 0;
    int degenerate_streak = 0;
    bool fresh = false;  // no pivot since the last reinversion

    while (true) {
      if (iters >= opts_.max_iters) {
        finish(Status::kIterationLimit, iters);
        return;
      }
      const bool phase1 = !primal_feasible();
      const Eigen::VectorXd y = compute_duals(phase1);

      const bool bland = degenerate_streak > opts_.stall_threshold;
      int enter = -1;
      int dir = 0;
      double best = 0.0;
      for (int k = 0; k < n_ + m_; ++k) {
        if (state_[k] == VarState::kBasic) continue;
        const double d = reduced_cost(k, y, phase1);
        const int kd = improving_direction(k, d);
        if (kd == 0) continue;
        if (bland) {
          enter = k;
          dir = kd;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          enter = k;
          dir = kd;
        }
      }

      if (enter < 0) {
        if (!fresh) {
          refactor_or_reset();
          fresh = true;
          continue;
        }
        finish(phase1 ? Status::kInfeasible : Status::kOptimal, iters);
        return;
      }

      const Eigen::VectorXd alpha = binv_ * column(enter);
      // Basic variable at position p moves at rate -dir * alpha(p).
      double t_min = kInf;
      int leave = -1;
      double leave_bound = 0.0;
      double leave_pivot = 0.0;
      for (int p = 0; p < m_; ++p) {
        if (std::abs(alpha(p)) <= opts_.pivot_tol) continue;
        const int b = basis_[p];
        const double rate = -dir * alpha(p);
        const double xb = x_[b];
        double t = kInf;
        double bound = 0.0;
        const bool below = xb < lower_[b] - opts_.feas_tol;
        const bool above = xb > upper_[b] + opts_.feas_tol;
        if (below) {
          if (rate > 0) { t = (lower_[b] - xb) / rate; bound = lower_[b]; }
        } else if (above) {
          if (rate < 0) { t = (upper_[b] - xb) / rate; bound = upper_[b]; }
        } else if (rate > 0) {
          if (std::isfinite(upper_[b])) { t = std::max(0.0, (upper_[b] - xb) / rate); bound = upper_[b]; }
        } else {
          if (std::isfinite(lower_[b])) { t = std::max(0.0, (lower_[b] - xb) / rate); bound = lower_[b]; }
        }
        if (t == kInf) continue;
        bool better = leave < 0 || t < t_min - 1e-12;
        if (!better && t <= t_min + 1e-12) {
          // Ties: lowest variable index under Bland, else the largest pivot.
          better = bland ? b < basis_[leave] : std::abs(alpha(p)) > std::abs(leave_pivot);
        }
        if (better) {
          leave = p;
          leave_bound = bound;
          leave_pivot = alpha(p);
          t_min = t;
        }
      }

      const double span = upper_[enter] - lower_[enter];
      const bool flip = std::isfinite(span) && span <= t_min;
      if (!flip && leave < 0) {
        if (phase1) {
          // Cannot happen in exact arithmetic; recover through reinversion.
          if (!fresh) {
            refactor_or_reset();
            fresh = true;
            continue;
          }
        }
        finish(Status::kUnbounded, iters);
        return;
      }

      ++iters;
      fresh = false;
      const double step = flip ? span : t_min;
      degenerate_streak = step <= 1e-12 ? degenerate_streak + 1 : 0;
      x_[enter] += dir * step;
      for (int p = 0; p < m_; ++p) x_[basis_[p]] -= dir * step * alpha(p);

      if (flip) {
        state_[enter] = dir > 0 ? VarState::kAtUpper : VarState::kAtLower;
        x_[enter] = dir > 0 ? upper_[enter] : lower_[enter];
        continue;
      }

      const int out = basis_[leave];
      x_[out] = leave_bound;
      state_[out] = leave_bound == lower_[out] ? VarState::kAtLower : VarState::kAtUpper;
      basis_[leave] = enter;
      state_[enter] = VarState::kBasic;

      const Eigen::RowVectorXd pivot_row = binv_.row(leave) / alpha(leave);
      binv_.noalias() -= alpha * pivot_row;
      binv_.row(leave) = pivot_row;

      if (++pivots_since_refactor_ >= opts_.refactor_interval) refactor_or_reset();
    }
  }

  LpModel model_;
  LpOptions opts_;
  int n_ = 0;
  int m_ = 0;
  Eigen::MatrixXd A_;
  std::vector<double> lower_, upper_, cost_;
  std::vector<VarState> state_;
  std::vector<double> x_;
  std::vector<int> basis_;
  Eigen::MatrixXd binv_;
  bool dirty_ = true;
  int pivots_since_refactor_ = 0;
  LpSolution solution_;
};

/// One-shot solve from the slack basis.
inline LpSolution solve_lp(const LpModel& model, LpOptions options = {}) {
  LpSolver solver(model, options);
  return solver.solve();
}

}  // namespace hsdepth::lp
