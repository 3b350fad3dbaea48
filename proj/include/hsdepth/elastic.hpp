#pragma once

// Elastic programming for the system a_j . x >= eps, -c <= x <= c:
//
//   minimize sum_j e_j   s.t.  a_j . x + e_j >= eps,  e_j >= 0.
//
// The optimum (SINF) is zero iff the system is feasible.  The elastic value of
// a row is its violation and the row dual its sensitivity; their product
// estimates how much SINF falls when the row is dropped.  Chinneck's cover
// heuristic drops the row with the best estimate until SINF reaches zero.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "hsdepth/core.hpp"
#include "hsdepth/lp.hpp"

namespace hsdepth {

struct ElasticDiagnostics {
  lp::Status status = lp::Status::kIterationLimit;
  double sinf = 0.0;
  int ninf = 0;
  std::vector<double> violation;    // elastic variable value per row
  std::vector<double> sensitivity;  // row dual (shadow price) per row
  Vector x;
  long iterations = 0;
};

/// Columns are x_0..x_{d-1} followed by e_0..e_{n-1}; row j is row a_j.
inline lp::LpModel elasticize(const std::vector<Vector>& rows, double epsilon, double box_bound) {
  const int n = static_cast<int>(rows.size());
  const int d = n == 0 ? 0 : static_cast<int>(rows.front().size());
  lp::LpModel model;
  for (int k = 0; k < d; ++k) model.add_column(0.0, -box_bound, box_bound);
  for (int j = 0; j < n; ++j) model.add_column(1.0, 0.0, lp::kInf);
  for (int j = 0; j < n; ++j) {
    std::vector<double> coeffs(d + n, 0.0);
    std::copy(rows[j].begin(), rows[j].end(), coeffs.begin());
    coeffs[d + j] = 1.0;
    model.add_row(std::move(coeffs), lp::Sense::kGreaterEqual, epsilon);
  }
  return model;
}

/// Drop estimate per row: violation * |sensitivity| for violated rows,
/// |sensitivity| otherwise.
inline std::vector<double> estimate_drops(const ElasticDiagnostics& diag, double tol = 1e-9) {
  std::vector<double> score(diag.violation.size());
  for (std::size_t j = 0; j < score.size(); ++j) {
    const double s = std::abs(diag.sensitivity[j]);
    score[j] = diag.violation[j] > tol ? diag.violation[j] * s : s;
  }
  return score;
}

/// Candidate order for removal: rows violated at the elastic optimum first,
/// then the rest, each group by decreasing weight * estimated drop, lowest
/// index on ties.  The two estimates are not comparable: violations live on
/// the scale of eps while sensitivities are O(1), so a single ranking would
/// always prefer satisfied rows.
inline std::vector<int> drop_order(const ElasticDiagnostics& diag, const std::vector<int>& weights,
                                   const std::vector<int>& rows, double tol = 1e-9) {
  const auto drops = estimate_drops(diag, tol);
  std::vector<int> order(rows);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const bool va = diag.violation[a] > tol;
    const bool vb = diag.violation[b] > tol;
    if (va != vb) return va;
    return weights[a] * drops[a] > weights[b] * drops[b];
  });
  return order;
}

/// Elastic program over a fixed row set whose rows can be switched off and on
/// again.  Consecutive solves restart from the previous simplex basis.
class ElasticProgram {
 public:
  ElasticProgram(const std::vector<Vector>& rows, int dim, double epsilon, double box_bound,
                 double feas_tol = 1e-9)
      : dim_(dim),
        n_(static_cast<int>(rows.size())),
        epsilon_(epsilon),
        feas_tol_(feas_tol),
        active_(rows.size(), true),
        solver_(elasticize(rows, epsilon, box_bound)) {}

  int num_rows() const { return n_; }
  bool active(int j) const { return active_[j]; }
  int active_count() const { return static_cast<int>(std::count(active_.begin(), active_.end(), true)); }

  void set_active(int j, bool on) {
    if (active_[j] == on) return;
    active_[j] = on;
    if (on) {
      solver_.set_row_bounds(j, epsilon_, lp::kInf);
      solver_.set_col_bounds(dim_ + j, 0.0, lp::kInf);
    } else {
      solver_.set_row_bounds(j, -lp::kInf, lp::kInf);
      solver_.set_col_bounds(dim_ + j, 0.0, 0.0);
    }
  }

  ElasticDiagnostics solve() {
    const auto& sol = solver_.solve();
    ElasticDiagnostics diag;
    diag.status = sol.status;
    diag.iterations = sol.iterations;
    diag.violation.assign(n_, 0.0);
    diag.sensitivity.assign(n_, 0.0);
    if (sol.status != lp::Status::kOptimal) return diag;
    diag.x.assign(sol.primal.begin(), sol.primal.begin() + dim_);
    for (int j = 0; j < n_; ++j) {
      if (!active_[j]) continue;
      diag.violation[j] = std::max(0.0, sol.primal[dim_ + j]);
      diag.sensitivity[j] = sol.duals[j];
      diag.sinf += diag.violation[j];
      if (diag.violation[j] > feas_tol_) ++diag.ninf;
    }
    if (diag.sinf <= feas_tol_) diag.ninf = 0;
    return diag;
  }

 private:
  int dim_;
  int n_;
  double epsilon_;
  double feas_tol_;
  std::vector<bool> active_;
  lp::LpSolver solver_;
};

inline ElasticDiagnostics solve_elastic(const std::vector<Vector>& rows, int dim, double epsilon,
                                        double box_bound, double feas_tol = 1e-9) {
  ElasticProgram program(rows, dim, epsilon, box_bound, feas_tol);
  return program.solve();
}

/// Largest t with a_j . x >= t for all rows in `subset`, x in the box.
struct Margin {
  double value = lp::kInf;  // +inf for an empty subset
  Vector x;
};

inline Margin max_margin(const DepthInstance& inst, const std::vector<int>& subset, double box_bound) {
  Margin out;
  out.x.assign(inst.dim, 0.0);
  if (subset.empty()) return out;
  lp::LpModel model;
  for (int k = 0; k < inst.dim; ++k) model.add_column(0.0, -box_bound, box_bound);
  const int t = model.add_column(-1.0, -lp::kInf, lp::kInf);
  for (int j : subset) {
    std::vector<double> coeffs(inst.rows[j]);
    coeffs.push_back(-1.0);
    model.add_row(std::move(coeffs), lp::Sense::kGreaterEqual, 0.0);
  }
  const auto sol = lp::solve_lp(model);
  if (sol.status != lp::Status::kOptimal) {
    out.value = -lp::kInf;
    return out;
  }
  out.value = sol.primal[t];
  out.x.assign(sol.primal.begin(), sol.primal.begin() + inst.dim);
  return out;
}

struct CoverResult {
  std::vector<int> cover;  // row indices, in removal order
  Vector witness;          // satisfies a_j . x >= eps on the remaining rows
  int weight = 0;          // sum of row weights over the cover
  double initial_sinf = 0.0;
  long lp_solves = 0;
};

/// Chinneck's heuristic for a minimum IIS cover.  Each round ranks the active
/// rows with drop_order and removes the first one.  In tested
/// mode the top `heuristic_candidates` rows are removed tentatively and the
/// one with the largest weighted actual drop is kept.
inline CoverResult chinneck_cover(const DepthInstance& inst, const SolverParams& params) {
  CoverResult result;
  const int n = inst.num_rows();
  result.witness.assign(inst.dim, 0.0);
  if (n == 0) return result;

  ElasticProgram program(inst.rows, inst.dim, params.epsilon, params.box_bound, params.feas_tol);
  auto diag = program.solve();
  ++result.lp_solves;
  result.initial_sinf = diag.sinf;

  while (diag.status == lp::Status::kOptimal && diag.sinf > params.feas_tol) {
    std::vector<int> active;
    for (int j = 0; j < n; ++j) {
      if (program.active(j)) active.push_back(j);
    }
    const auto order = drop_order(diag, inst.weights, active, params.feas_tol);

    int chosen = order.front();
    if (params.heuristic == HeuristicMode::kTested && order.size() > 1) {
      const int k = std::min<int>(params.heuristic_candidates, static_cast<int>(order.size()));
      double best_drop = -lp::kInf;
      for (int c = 0; c < k; ++c) {
        const int j = order[c];
        program.set_active(j, false);
        auto trial = program.solve();
        ++result.lp_solves;
        program.set_active(j, true);
        if (trial.status != lp::Status::kOptimal) continue;
        const double drop = inst.weights[j] * (diag.sinf - trial.sinf);
        if (drop > best_drop + 1e-12) {
          best_drop = drop;
          chosen = j;
        }
      }
    }
    program.set_active(chosen, false);
    result.cover.push_back(chosen);
    result.weight += inst.weights[chosen];
    diag = program.solve();
    ++result.lp_solves;
  }
  if (diag.status == lp::Status::kOptimal) result.witness = diag.x;
  return result;
}

}  // namespace hsdepth
