#pragma once

// Hitting-set cuts.  Every infeasible subsystem B of {a_j . x >= eps} must
// lose at least one row, so sum_{j in B} s_j >= 1 is valid for the cover MIP.
//
// Basic infeasible subsystems come from the phase-1 problem
//
//   minimize x0   s.t.  a_j . x + x0 >= eps  (j in J),  x in the box,  x0 free.
//
// A positive optimum proves J infeasible, and the rows with positive dual at
// the optimal basis form an infeasible subsystem of at most d + 1 rows (the
// dual weights certify infeasibility and at most d + 1 logicals can be
// nonbasic).

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "hsdepth/core.hpp"
#include "hsdepth/lp.hpp"

namespace hsdepth {

struct Cut {
  std::vector<int> support;  // sorted row indices

  /// sum of s over the support.
  double activity(std::span<const double> s) const {
    double sum = 0.0;
    for (int j : support) sum += s[j];
    return sum;
  }
  bool violated_by(std::span<const double> s, double tol = 1e-9) const { return activity(s) < 1.0 - tol; }

  bool operator==(const Cut&) const = default;
};

struct CutPoolStats {
  long generated = 0;   // cuts offered to the pool
  long duplicates = 0;  // rejected because the support was already present
};

/// Global cut store keyed by support.  Insertion order is preserved.
class CutPool {
 public:
  bool contains(const Cut& cut) const { return keys_.count(cut.support) > 0; }

  /// Returns false if an equal support is already pooled.
  bool insert(const Cut& cut) {
    ++stats_.generated;
    if (!keys_.insert(cut.support).second) {
      ++stats_.duplicates;
      return false;
    }
    cuts_.push_back(cut);
    return true;
  }

  std::size_t size() const { return cuts_.size(); }
  const std::vector<Cut>& cuts() const { return cuts_; }
  const CutPoolStats& stats() const { return stats_; }

 private:
  std::set<std::vector<int>> keys_;
  std::vector<Cut> cuts_;
  CutPoolStats stats_;
};

/// Optimal x0 of the phase-1 problem over `subset`, and the row duals.
struct PhaseOneResult {
  lp::Status status = lp::Status::kIterationLimit;
  double x0 = 0.0;
  std::vector<double> duals;  // per entry of subset
};

inline PhaseOneResult solve_phase_one(const DepthInstance& inst, std::span<const int> subset,
                                      double epsilon, double box_bound) {
  lp::LpModel model;
  for (int k = 0; k < inst.dim; ++k) model.add_column(0.0, -box_bound, box_bound);
  const int x0 = model.add_column(1.0, -lp::kInf, lp::kInf);
  for (int j : subset) {
    std::vector<double> coeffs(inst.rows[j]);
    coeffs.push_back(1.0);
    model.add_row(std::move(coeffs), lp::Sense::kGreaterEqual, epsilon);
  }
  const auto sol = lp::solve_lp(model);
  PhaseOneResult out;
  out.status = sol.status;
  if (sol.status == lp::Status::kOptimal) {
    out.x0 = sol.primal[x0];
    out.duals = sol.duals;
  }
  return out;
}

/// True when {a_j . x >= eps : j in subset} has no solution in the box.
inline bool subsystem_infeasible(const DepthInstance& inst, std::span<const int> subset,
                                 double epsilon, double box_bound, double feas_tol = 1e-9) {
  if (subset.empty()) return false;
  const auto r = solve_phase_one(inst, subset, epsilon, box_bound);
  return r.status == lp::Status::kOptimal && r.x0 > feas_tol;
}

/// A basic infeasible subsystem of the rows in `subset`, or nullopt when
/// those rows are jointly satisfiable.
inline std::optional<Cut> find_bis(const DepthInstance& inst, std::span<const int> subset,
                                   double epsilon, double box_bound, double feas_tol = 1e-9) {
  if (subset.empty()) return std::nullopt;
  const auto r = solve_phase_one(inst, subset, epsilon, box_bound);
  if (r.status != lp::Status::kOptimal || r.x0 <= feas_tol) return std::nullopt;
  Cut cut;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (r.duals[i] > 1e-9) cut.support.push_back(subset[i]);
  }
  std::sort(cut.support.begin(), cut.support.end());
  cut.support.erase(std::unique(cut.support.begin(), cut.support.end()), cut.support.end());
  if (cut.support.empty()) return std::nullopt;
  return cut;
}

/// Indices of the k smallest values with sum < 1, k maximal.  Sorting and
/// taking the longest prefix is optimal: any j > k values sum to at least the
/// j smallest, which already reach 1.
inline std::vector<int> pseudo_knapsack_select(std::span<const double> values) {
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return values[a] < values[b]; });
  std::vector<int> picked;
  double sum = 0.0;
  for (int j : order) {
    if (sum + values[j] >= 1.0) break;
    sum += values[j];
    picked.push_back(j);
  }
  return picked;
}

enum class CutSelection { kPlain, kKnapsack };

struct CutOptions {
  CutSelection selection = CutSelection::kKnapsack;
  int cut_rounds = 10;
  double epsilon = 1e-5;
  double box_bound = 1.0;
  double feas_tol = 1e-9;
};

/// Separates hitting-set cuts at the relaxation values `s` (one per row).
///
/// Rows are pre-selected by pseudo-knapsack (knapsack mode: every cut found
/// is violated) or by s_j < 0.5 (plain mode).  Up to `cut_rounds` basic
/// infeasible subsystems are extracted; after each one the support row with
/// the largest s (lowest index on ties) leaves the candidate set so the next
/// round finds a different subsystem.  Cuts already in the pool are skipped.
/// New cuts are inserted into the pool and returned.
inline std::vector<Cut> generate_cuts(std::span<const double> s, const DepthInstance& inst,
                                      CutPool& pool, const CutOptions& options) {
  std::vector<int> candidates;
  if (options.selection == CutSelection::kKnapsack) {
    candidates = pseudo_knapsack_select(s);
    std::sort(candidates.begin(), candidates.end());
  } else {
    for (int j = 0; j < static_cast<int>(s.size()); ++j) {
      if (s[j] < 0.5) candidates.push_back(j);
    }
  }

  std::vector<Cut> found;
  for (int round = 0; round < options.cut_rounds && !candidates.empty(); ++round) {
    auto cut = find_bis(inst, candidates, options.epsilon, options.box_bound, options.feas_tol);
    if (!cut) break;
    if (pool.insert(*cut)) found.push_back(*cut);
    int drop = cut->support.front();
    for (int j : cut->support) {
      if (s[j] > s[drop]) drop = j;
    }
    std::erase(candidates, drop);
  }
  return found;
}

}  // namespace hsdepth
