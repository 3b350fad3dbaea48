#pragma once

// Depth by binary search over the cover budget.  A guess g is tested with the
// epsilon-maximizing model: a solution with eps > eps_accept proves depth <= g,
// a proven optimum of eps = 0 proves depth > g.  The search interval starts
// at [0, weight of the heuristic cover] and shrinks to the weight of every
// cover found, so at most ceil(log2(H)) + 1 guesses are tested.

#include <cmath>
#include <string_view>

#include "hsdepth/bnc.hpp"

namespace hsdepth {

enum class GuessStatus { kBelow, kAtOrAbove, kLimit };

inline std::string_view to_string(GuessStatus s) {
  switch (s) {
    case GuessStatus::kBelow: return "Below";
    case GuessStatus::kAtOrAbove: return "AtOrAbove";
    case GuessStatus::kLimit: return "Limit";
  }
  return "?";
}

struct GuessOutcome {
  GuessStatus status = GuessStatus::kLimit;
  SolveStatus limit = SolveStatus::kProven;  // which limit, for kLimit
  double epsilon = 0.0;                      // achieved eps for kAtOrAbove
  std::vector<int> cover;                    // rows removed, weight <= guess
  Vector x;
  SearchStats stats;
};

/// Tests whether the depth (in model units, forced points excluded) is at
/// most `guess`.  Cuts in `pool` are preloaded and new ones are added to it.
inline GuessOutcome test_guess(const DepthInstance& inst, int guess, CutPool& pool, const SolverParams& params,
                               detail::Clock::time_point start = detail::Clock::now()) {
  if (guess < 0) throw std::invalid_argument("guess must be non-negative");
  GuessOutcome result;
  if (inst.num_rows() == 0) {
    result.status = GuessStatus::kAtOrAbove;
    result.epsilon = lp::kInf;
    result.x.assign(inst.dim, 0.0);
    return result;
  }
  detail::BranchAndCut engine(inst, params, pool, detail::MipKind::kMaxEpsilon, guess, start);
  auto out = engine.run();
  result.stats = out.stats;
  if (out.found) {
    result.status = GuessStatus::kAtOrAbove;
    result.epsilon = out.epsilon;
    result.cover = std::move(out.cover);
    result.x = std::move(out.x);
  } else if (out.status == SolveStatus::kProven) {
    result.status = GuessStatus::kBelow;
  } else {
    result.status = GuessStatus::kLimit;
    result.limit = out.status;
  }
  return result;
}

inline DepthResult binary_search_depth(const DepthInstance& inst, const SolverParams& params) {
  const auto start = detail::Clock::now();
  DepthResult result;
  result.epsilon = params.epsilon;
  if (inst.num_rows() == 0) {
    detail::finalize_result(result, inst, params, {}, Vector(inst.dim, 0.0));
    return result;
  }
  params.validate(inst);

  const auto heuristic = chinneck_cover(inst, params);
  result.stats.heuristic_value = heuristic.weight;
  std::vector<int> best_cover = heuristic.cover;
  Vector best_x = heuristic.witness;

  CutPool shared;
  int lo = 0;
  int hi = heuristic.weight;
  while (lo < hi) {
    const int guess = lo + (hi - lo) / 2;
    CutPool fresh;
    CutPool& pool = params.reuse_pool ? shared : fresh;
    auto outcome = test_guess(inst, guess, pool, params, start);
    ++result.stats.guess_solves;
    result.stats.nodes += outcome.stats.nodes;
    result.stats.cuts += outcome.stats.cuts;
    result.stats.lp_iterations += outcome.stats.lp_iterations;
    result.stats.lp_failures += outcome.stats.lp_failures;
    result.stats.max_depth = std::max(result.stats.max_depth, outcome.stats.max_depth);
    for (const auto& cut : pool.cuts()) {
      if (!params.reuse_pool) shared.insert(cut);
    }
    if (outcome.status == GuessStatus::kLimit) {
      result.status = outcome.limit;
      break;
    }
    if (outcome.status == GuessStatus::kBelow) {
      lo = guess + 1;
    } else {
      int w = 0;
      for (int j : outcome.cover) w += inst.weights[j];
      hi = std::min(guess, w);
      best_cover = std::move(outcome.cover);
      best_x = std::move(outcome.x);
    }
  }

  result.cuts = shared.cuts();
  detail::finalize_result(result, inst, params, best_cover, best_x);
  // The safe epsilon is the margin the final cover leaves: the fixed-epsilon
  // model at any eps up to it admits the same cover.
  std::vector<char> in(inst.num_rows(), 0);
  for (int j : result.cover_rows) in[j] = 1;
  std::vector<int> rest;
  for (int j = 0; j < inst.num_rows(); ++j) {
    if (!in[j]) rest.push_back(j);
  }
  const auto margin = max_margin(inst, rest, params.box_bound);
  if (std::isfinite(margin.value)) result.epsilon_star = margin.value;
  result.stats.time_ms = detail::elapsed_seconds(start) * 1e3;
  return result;
}

}  // namespace hsdepth
