#pragma once

// Branch-and-cut for the big-M cover model
//
//   minimize  sum_j w_j s_j
//   s.t.      a_j . x + M_j s_j >= eps      for every row j
//             sum_{j in B} s_j >= 1         for every pooled cut B
//             -c <= x_i <= c,  s_j in {0, 1}
//
// and for the epsilon-maximizing variant used by the binary search driver
//
//   minimize  -eps
//   s.t.      a_j . x + M_j s_j - eps >= 0,   sum_j w_j s_j <= guess,
//             0 <= eps <= min_j M_j / 2,  same cuts and bounds.
//
// The search is depth first; the s_b = 1 child of every branch is explored
// first.  One LP solver is shared by all nodes: a node only changes the
// bounds of the binaries, so every solve restarts from the previous basis.
// Cuts are globally valid and stay in the LP once added.

#include <algorithm>
#include <chrono>
#include <climits>
#include <cmath>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hsdepth/core.hpp"
#include "hsdepth/cuts.hpp"
#include "hsdepth/elastic.hpp"
#include "hsdepth/lp.hpp"

namespace hsdepth {

enum class SolveStatus { kProven, kTimeLimit, kNodeLimit };

inline std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kProven: return "Proven";
    case SolveStatus::kTimeLimit: return "TimeLimit";
    case SolveStatus::kNodeLimit: return "NodeLimit";
  }
  return "?";
}

struct SearchStats {
  long nodes = 0;
  long cuts = 0;  // cuts added to the pool by this solve
  long lp_iterations = 0;
  long lp_failures = 0;  // node LPs that ended without an optimal basis
  int max_depth = 0;
  int heuristic_value = -1;  // weight of the initial heuristic cover
  double root_bound = -lp::kInf;
  int guess_solves = 0;  // binary search only
  double time_ms = 0.0;
};

struct DepthResult {
  int depth = 0;      // mip_value + forced_count
  int mip_value = 0;  // sum of weights over cover_rows
  std::vector<int> cover_rows;
  std::vector<std::size_t> cover;  // original point indices, forced points included
  Vector direction;                // a_j . direction >= eps off the cover
  SolveStatus status = SolveStatus::kProven;
  double epsilon = 0.0;
  std::optional<double> epsilon_star;  // binary search: a safe epsilon for this instance
  SearchStats stats;
  std::vector<Cut> cuts;  // contents of the cut pool after the solve
};

struct SearchNode {
  std::vector<int> fixed_to_one;
  std::vector<int> fixed_to_zero;
  double parent_bound = 0.0;
  int depth = 0;
};

/// Open nodes, processed last in first out.
class SearchTree {
 public:
  void push(SearchNode node) { open_.push_back(std::move(node)); }

  /// Adds both children of `parent` on row b.  The s_b = 1 child is pushed
  /// last so that next_node() dives into it first.
  void branch(const SearchNode& parent, int b, double bound) {
    SearchNode zero = parent;
    zero.fixed_to_zero.push_back(b);
    zero.parent_bound = bound;
    zero.depth = parent.depth + 1;
    SearchNode one = parent;
    one.fixed_to_one.push_back(b);
    one.parent_bound = bound;
    one.depth = parent.depth + 1;
    open_.push_back(std::move(zero));
    open_.push_back(std::move(one));
  }

  SearchNode next_node() {
    SearchNode node = std::move(open_.back());
    open_.pop_back();
    return node;
  }

  bool empty() const { return open_.empty(); }
  std::size_t size() const { return open_.size(); }

 private:
  std::vector<SearchNode> open_;
};

/// Column layout of the MIP models: x, then one binary per row, then eps.
struct MipLayout {
  int dim = 0;
  int rows = 0;
  int eps_col = -1;  // only in the epsilon-maximizing model

  int s_col(int j) const { return dim + j; }
  int num_cols() const { return dim + rows + (eps_col >= 0 ? 1 : 0); }
};

inline lp::LpModel build_cover_mip(const DepthInstance& inst, const SolverParams& params) {
  lp::LpModel m;
  for (int k = 0; k < inst.dim; ++k) m.add_column(0.0, -params.box_bound, params.box_bound);
  for (int j = 0; j < inst.num_rows(); ++j) m.add_column(inst.weights[j], 0.0, 1.0);
  for (int j = 0; j < inst.num_rows(); ++j) {
    std::vector<double> coeffs(m.num_cols(), 0.0);
    std::copy(inst.rows[j].begin(), inst.rows[j].end(), coeffs.begin());
    coeffs[inst.dim + j] = params.big_m[j];
    m.add_row(std::move(coeffs), lp::Sense::kGreaterEqual, params.epsilon);
  }
  return m;
}

inline lp::LpModel build_guess_mip(const DepthInstance& inst, const SolverParams& params, int guess) {
  lp::LpModel m;
  for (int k = 0; k < inst.dim; ++k) m.add_column(0.0, -params.box_bound, params.box_bound);
  for (int j = 0; j < inst.num_rows(); ++j) m.add_column(0.0, 0.0, 1.0);
  const double cap = 0.5 * *std::min_element(params.big_m.begin(), params.big_m.end());
  const int eps = m.add_column(-1.0, 0.0, cap);
  for (int j = 0; j < inst.num_rows(); ++j) {
    std::vector<double> coeffs(m.num_cols(), 0.0);
    std::copy(inst.rows[j].begin(), inst.rows[j].end(), coeffs.begin());
    coeffs[inst.dim + j] = params.big_m[j];
    coeffs[eps] = -1.0;
    m.add_row(std::move(coeffs), lp::Sense::kGreaterEqual, 0.0);
  }
  std::vector<double> budget(m.num_cols(), 0.0);
  for (int j = 0; j < inst.num_rows(); ++j) budget[inst.dim + j] = inst.weights[j];
  m.add_row(std::move(budget), lp::Sense::kLessEqual, guess);
  return m;
}

/// Outcome of greedy branching at a node.
struct GreedyChoice {
  int row = -1;        // branching row, or -1 when the node's rows are feasible
  double sinf = 0.0;   // elastic objective over the rows not fixed to one
  Vector x;            // elastic solution, a witness when row == -1
  bool ok = true;      // false if the elastic LP failed
};

/// Solves the elastic program of the rows not fixed to one and returns the
/// first unfixed row in drop_order.  Returns row -1 when that program has SINF = 0: the node is then
/// solved by its fixed-to-one rows alone.
inline GreedyChoice select_branch_greedy(const SearchNode& node, const DepthInstance& inst,
                                         const SolverParams& params, ElasticProgram& program) {
  const int n = inst.num_rows();
  std::vector<char> state(n, 0);  // 0 free, 1 fixed one, 2 fixed zero
  for (int j : node.fixed_to_one) state[j] = 1;
  for (int j : node.fixed_to_zero) state[j] = 2;
  for (int j = 0; j < n; ++j) program.set_active(j, state[j] != 1);

  GreedyChoice choice;
  const auto diag = program.solve();
  if (diag.status != lp::Status::kOptimal) {
    choice.ok = false;
    return choice;
  }
  choice.sinf = diag.sinf;
  choice.x = diag.x;
  if (diag.sinf <= params.feas_tol) return choice;

  std::vector<int> unfixed;
  for (int j = 0; j < n; ++j) {
    if (state[j] == 0) unfixed.push_back(j);
  }
  const auto order = drop_order(diag, inst.weights, unfixed, params.feas_tol);
  const auto drops = estimate_drops(diag, params.feas_tol);
  if (!order.empty() && (diag.violation[order.front()] > params.feas_tol || drops[order.front()] > 0.0)) {
    choice.row = order.front();
  }
  if (choice.row < 0) choice.ok = false;  // infeasible but nothing scores
  return choice;
}

inline GreedyChoice select_branch_greedy(const SearchNode& node, const DepthInstance& inst,
                                         const SolverParams& params) {
  ElasticProgram program(inst.rows, inst.dim, params.epsilon, params.box_bound, params.feas_tol);
  return select_branch_greedy(node, inst, params, program);
}

/// Strong branching over the `strong_candidates` most fractional unfixed
/// binaries.  Each candidate is fixed to 0 and to 1 in turn; the score is the
/// product of the two objective increases, each floored at 1e-6 (an
/// infeasible child counts as an increase of 1e6).  The candidate bounds are
/// restored to [0, 1] afterwards.  Returns -1 when no binary is fractional.
inline int select_branch_strong(lp::LpSolver& lp, const MipLayout& layout, std::span<const double> s,
                                std::span<const char> fixed, double parent_objective,
                                const SolverParams& params, long* iterations = nullptr) {
  std::vector<int> candidates;
  for (int j = 0; j < layout.rows; ++j) {
    if (fixed[j]) continue;
    if (std::min(s[j], 1.0 - s[j]) > params.int_tol) candidates.push_back(j);
  }
  if (candidates.empty()) return -1;
  std::stable_sort(candidates.begin(), candidates.end(), [&](int a, int b) {
    return std::abs(s[a] - 0.5) < std::abs(s[b] - 0.5);
  });
  if (static_cast<int>(candidates.size()) > params.strong_candidates) {
    candidates.resize(params.strong_candidates);
  }

  auto child_gain = [&](int col, double value) {
    lp.set_col_bounds(col, value, value);
    const auto& sol = lp.solve();
    if (iterations) *iterations += sol.iterations;
    if (sol.status == lp::Status::kInfeasible) return 1e6;
    if (sol.status != lp::Status::kOptimal) return 1e-6;
    return std::max(sol.objective_value - parent_objective, 1e-6);
  };

  int best = -1;
  double best_score = -1.0;
  for (int j : candidates) {
    const int col = layout.s_col(j);
    const double down = child_gain(col, 0.0);
    const double up = child_gain(col, 1.0);
    lp.set_col_bounds(col, 0.0, 1.0);
    const double score = down * up;
    if (score > best_score || (score == best_score && j < best)) {
      best_score = score;
      best = j;
    }
  }
  return best;
}

namespace detail {

enum class MipKind { kMinCover, kMaxEpsilon };

using Clock = std::chrono::steady_clock;

inline double elapsed_seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct EngineOutcome {
  SolveStatus status = SolveStatus::kProven;
  bool found = false;  // an incumbent exists / a positive-eps solution was found
  int value = INT_MAX;
  std::vector<int> cover;
  Vector x;
  double epsilon = 0.0;
  SearchStats stats;
};

class BranchAndCut {
 public:
  BranchAndCut(const DepthInstance& inst, const SolverParams& params, CutPool& pool, MipKind kind,
               int guess = 0, Clock::time_point start = Clock::now())
      : inst_(inst),
        params_(params),
        pool_(pool),
        kind_(kind),
        guess_(guess),
        start_(start),
        layout_{inst.dim, inst.num_rows(), kind == MipKind::kMaxEpsilon ? inst.dim + inst.num_rows() : -1},
        lp_(kind == MipKind::kMinCover ? build_cover_mip(inst, params) : build_guess_mip(inst, params, guess)),
        elastic_(inst.rows, inst.dim, params.epsilon, params.box_bound, params.feas_tol),
        fixed_state_(inst.num_rows(), 0) {
    cut_options_.selection = params.effective_cuts() == CutMode::kBisKnapsack ? CutSelection::kKnapsack
                                                                              : CutSelection::kPlain;
    cut_options_.cut_rounds = params.cut_rounds;
    // Cuts for the epsilon-maximizing model only need to hold for eps above
    // the acceptance threshold.
    cut_options_.epsilon = kind == MipKind::kMinCover ? params.epsilon : params.eps_accept;
    cut_options_.box_bound = params.box_bound;
    cut_options_.feas_tol = params.feas_tol;
    for (const auto& cut : pool_.cuts()) add_cut_row(cut);
  }

  void set_incumbent(int value, std::vector<int> cover, Vector x) {
    out_.found = true;
    out_.value = value;
    out_.cover = std::move(cover);
    out_.x = std::move(x);
  }

  EngineOutcome run() {
    SearchTree tree;
    SearchNode root;
    root.parent_bound = kind_ == MipKind::kMinCover ? -lp::kInf : lp::kInf;
    tree.push(std::move(root));
    out_.status = SolveStatus::kProven;
    while (!tree.empty() && !stop_) {
      if (elapsed_seconds(start_) > params_.time_limit) {
        out_.status = SolveStatus::kTimeLimit;
        break;
      }
      if (out_.stats.nodes >= params_.node_limit) {
        out_.status = SolveStatus::kNodeLimit;
        break;
      }
      SearchNode node = tree.next_node();
      if (prunable(node.parent_bound)) continue;
      ++out_.stats.nodes;
      out_.stats.max_depth = std::max(out_.stats.max_depth, node.depth);
      process(node, tree);
    }
    return out_;
  }

 private:
  bool minimizing() const { return kind_ == MipKind::kMinCover; }

  // Node bound in model units: cover weight, or the attainable eps.
  double bound_of(const lp::LpSolution& sol) const {
    return minimizing() ? sol.objective_value : -sol.objective_value;
  }

  bool prunable(double bound) const {
    if (minimizing()) {
      return out_.found && std::ceil(bound - 1e-6) >= out_.value;
    }
    return bound <= params_.eps_accept;
  }

  void add_cut_row(const Cut& cut) {
    std::vector<double> coeffs(layout_.num_cols(), 0.0);
    for (int j : cut.support) coeffs[layout_.s_col(j)] = 1.0;
    lp_.add_row(coeffs, lp::Sense::kGreaterEqual, 1.0);
  }

  void apply_fixings(const SearchNode& node) {
    std::vector<char> want(inst_.num_rows(), 0);
    for (int j : node.fixed_to_one) want[j] = 1;
    for (int j : node.fixed_to_zero) want[j] = 2;
    for (int j = 0; j < inst_.num_rows(); ++j) {
      if (want[j] == fixed_state_[j]) continue;
      const int col = layout_.s_col(j);
      if (want[j] == 0) lp_.set_col_bounds(col, 0.0, 1.0);
      else if (want[j] == 1) lp_.set_col_bounds(col, 1.0, 1.0);
      else lp_.set_col_bounds(col, 0.0, 0.0);
      fixed_state_[j] = want[j];
    }
  }

  std::vector<double> s_values(const lp::LpSolution& sol) const {
    std::vector<double> s(inst_.num_rows());
    for (int j = 0; j < inst_.num_rows(); ++j) s[j] = std::clamp(sol.primal[layout_.s_col(j)], 0.0, 1.0);
    return s;
  }

  bool integral(std::span<const double> s) const {
    return std::all_of(s.begin(), s.end(), [&](double v) { return std::min(v, 1.0 - v) <= params_.int_tol; });
  }

  int weight_of(const std::vector<int>& cover) const {
    int w = 0;
    for (int j : cover) w += inst_.weights[j];
    return w;
  }

  std::vector<int> complement(const std::vector<int>& cover) const {
    std::vector<char> in(inst_.num_rows(), 0);
    for (int j : cover) in[j] = 1;
    std::vector<int> rest;
    for (int j = 0; j < inst_.num_rows(); ++j) {
      if (!in[j]) rest.push_back(j);
    }
    return rest;
  }

  // A cover candidate together with a witness; updates the incumbent or, in
  // the epsilon model, stops the search when the margin is large enough.
  void offer(std::vector<int> cover, const Vector& x, std::optional<double> margin = std::nullopt) {
    std::sort(cover.begin(), cover.end());
    const int value = weight_of(cover);
    if (minimizing()) {
      if (!out_.found || value < out_.value) set_incumbent(value, std::move(cover), x);
      return;
    }
    if (value > guess_) return;
    if (!margin) {
      const auto m = max_margin(inst_, complement(cover), params_.box_bound);
      margin = m.value;
      if (*margin > params_.eps_accept) {
        finish_epsilon(std::move(cover), m.x, *margin);
      }
      return;
    }
    if (*margin > params_.eps_accept) finish_epsilon(std::move(cover), x, *margin);
  }

  void finish_epsilon(std::vector<int> cover, const Vector& x, double eps) {
    out_.found = true;
    out_.value = weight_of(cover);
    out_.cover = std::move(cover);
    out_.x = x;
    out_.epsilon = eps;
    stop_ = true;
  }

  void try_rounding(const SearchNode& node, std::span<const double> s) {
    std::vector<int> cover;
    if (minimizing()) {
      for (int j = 0; j < inst_.num_rows(); ++j) {
        if (s[j] > 0.5) cover.push_back(j);
      }
      if (out_.found && weight_of(cover) >= out_.value) return;
      const auto m = max_margin(inst_, complement(cover), params_.box_bound);
      if (m.value >= params_.epsilon - params_.feas_tol) offer(std::move(cover), m.x);
      return;
    }
    // Epsilon model: take the largest s values while the budget allows.
    std::vector<char> zero(inst_.num_rows(), 0);
    for (int j : node.fixed_to_zero) zero[j] = 1;
    std::vector<int> order;
    for (int j = 0; j < inst_.num_rows(); ++j) {
      if (!zero[j] && s[j] > params_.int_tol) order.push_back(j);
    }
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return s[a] > s[b]; });
    int used = 0;
    for (int j : order) {
      if (used + inst_.weights[j] > guess_) continue;
      used += inst_.weights[j];
      cover.push_back(j);
    }
    offer(std::move(cover), Vector{});
  }

  int most_fractional(std::span<const double> s) const {
    int best = -1;
    double dist = lp::kInf;
    for (int j = 0; j < inst_.num_rows(); ++j) {
      if (fixed_state_[j]) continue;
      const double d = std::abs(s[j] - 0.5);
      if (d < dist) {
        dist = d;
        best = j;
      }
    }
    return best;
  }

  // Branching row, or -1 when the node was settled without branching.
  int choose_branch(const SearchNode& node, std::span<const double> s, double objective) {
    if (params_.branching == Branching::kGreedy) {
      const auto choice = select_branch_greedy(node, inst_, params_, elastic_);
      if (choice.ok && choice.row < 0) {
        offer(node.fixed_to_one, choice.x);
        return -1;
      }
      if (choice.ok) return choice.row;
    } else {
      const int b = select_branch_strong(lp_, layout_, s, fixed_state_, objective, params_,
                                         &out_.stats.lp_iterations);
      if (b >= 0) return b;
    }
    const int b = most_fractional(s);
    if (b < 0) offer(node.fixed_to_one, Vector(inst_.dim, 0.0));
    return b;
  }

  void process(const SearchNode& node, SearchTree& tree) {
    apply_fixings(node);
    lp::LpSolution sol = lp_.solve();
    out_.stats.lp_iterations += sol.iterations;
    if (sol.status == lp::Status::kInfeasible) return;
    if (sol.status != lp::Status::kOptimal) {
      ++out_.stats.lp_failures;
      const std::vector<double> half(inst_.num_rows(), 0.5);
      const int b = most_fractional(half);
      if (b >= 0) tree.branch(node, b, node.parent_bound);
      else offer(node.fixed_to_one, Vector(inst_.dim, 0.0));
      return;
    }
    double bound = bound_of(sol);

    if (params_.effective_cuts() != CutMode::kNone) {
      for (int round = 0; round < 50; ++round) {
        if (prunable(bound)) break;
        const auto s = s_values(sol);
        if (integral(s)) break;
        const auto cuts = generate_cuts(s, inst_, pool_, cut_options_);
        if (cuts.empty()) break;
        for (const auto& cut : cuts) add_cut_row(cut);
        out_.stats.cuts += static_cast<long>(cuts.size());
        sol = lp_.solve();
        out_.stats.lp_iterations += sol.iterations;
        if (sol.status == lp::Status::kInfeasible) return;
        if (sol.status != lp::Status::kOptimal) {
          ++out_.stats.lp_failures;
          break;
        }
        const double next = bound_of(sol);
        const double gain = std::abs(next - bound);
        bound = next;
        if (gain < params_.improve_tol) break;
      }
      if (sol.status != lp::Status::kOptimal) {
        const auto s = std::vector<double>(inst_.num_rows(), 0.5);
        const int b = most_fractional(s);
        if (b >= 0) tree.branch(node, b, node.parent_bound);
        return;
      }
    }
    if (node.depth == 0) out_.stats.root_bound = bound;
    if (prunable(bound)) return;

    const auto s = s_values(sol);
    if (integral(s)) {
      std::vector<int> cover;
      for (int j = 0; j < inst_.num_rows(); ++j) {
        if (s[j] > 0.5) cover.push_back(j);
      }
      const Vector x(sol.primal.begin(), sol.primal.begin() + inst_.dim);
      if (minimizing()) offer(std::move(cover), x);
      else offer(std::move(cover), x, sol.primal[layout_.eps_col]);
      return;
    }
    if (params_.rounding) {
      try_rounding(node, s);
      if (stop_ || prunable(bound)) return;
    }
    const int b = choose_branch(node, s, sol.objective_value);
    if (b < 0 || stop_) return;
    tree.branch(node, b, bound);
  }

  const DepthInstance& inst_;
  const SolverParams& params_;
  CutPool& pool_;
  MipKind kind_;
  int guess_;
  Clock::time_point start_;
  MipLayout layout_;
  lp::LpSolver lp_;
  ElasticProgram elastic_;
  std::vector<char> fixed_state_;
  CutOptions cut_options_;
  EngineOutcome out_;
  bool stop_ = false;
};

// Cover rows -> original point indices, forced points included.
inline std::vector<std::size_t> expand_cover(const DepthInstance& inst, const std::vector<int>& rows) {
  std::vector<std::size_t> points(inst.forced_points);
  for (int j : rows) points.insert(points.end(), inst.row_origin[j].begin(), inst.row_origin[j].end());
  std::sort(points.begin(), points.end());
  return points;
}

// Fills cover fields and re-derives the direction as the max-margin witness
// of the rows off the cover.
inline void finalize_result(DepthResult& result, const DepthInstance& inst, const SolverParams& params,
                            std::vector<int> cover_rows, const Vector& fallback_x) {
  std::sort(cover_rows.begin(), cover_rows.end());
  result.cover_rows = std::move(cover_rows);
  result.mip_value = 0;
  for (int j : result.cover_rows) result.mip_value += inst.weights[j];
  result.depth = result.mip_value + inst.forced_count;
  result.cover = expand_cover(inst, result.cover_rows);

  std::vector<char> in(inst.num_rows(), 0);
  for (int j : result.cover_rows) in[j] = 1;
  std::vector<int> rest;
  for (int j = 0; j < inst.num_rows(); ++j) {
    if (!in[j]) rest.push_back(j);
  }
  const auto m = max_margin(inst, rest, params.box_bound);
  result.direction = m.value >= params.epsilon - params.feas_tol ? m.x : fallback_x;
  if (result.direction.empty()) result.direction.assign(inst.dim, 0.0);
}

}  // namespace detail

/// Exact depth by branch-and-cut, starting from Chinneck's cover as incumbent.
inline DepthResult solve_depth(const DepthInstance& inst, const SolverParams& params) {
  const auto start = detail::Clock::now();
  DepthResult result;
  result.epsilon = params.epsilon;
  if (inst.num_rows() == 0) {
    detail::finalize_result(result, inst, params, {}, Vector(inst.dim, 0.0));
    return result;
  }
  params.validate(inst);

  const auto heuristic = chinneck_cover(inst, params);
  CutPool pool;
  detail::BranchAndCut engine(inst, params, pool, detail::MipKind::kMinCover, 0, start);
  engine.set_incumbent(heuristic.weight, heuristic.cover, heuristic.witness);
  auto out = engine.run();

  out.stats.heuristic_value = heuristic.weight;
  result.status = out.status;
  result.stats = out.stats;
  result.cuts = pool.cuts();
  detail::finalize_result(result, inst, params, out.cover, out.x);
  result.stats.time_ms = detail::elapsed_seconds(start) * 1e3;
  return result;
}

}  // namespace hsdepth
