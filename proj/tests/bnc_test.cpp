#include "hsdepth/bnc.hpp"

#include <gtest/gtest.h>

#include <random>

#include "hsdepth/oracle.hpp"
#include "instances.hpp"

namespace hsdepth {
namespace {

using testing::from_rows;
using testing::kCross;

SolverParams params_for(const DepthInstance& inst, Branching b = Branching::kGreedy,
                        CutMode cuts = CutMode::kAuto) {
  SolverParams base;
  base.branching = b;
  base.cuts = cuts;
  return make_params(inst, base);
}

// The cover rows must leave a system with a witness at margin epsilon.
void expect_certified(const DepthInstance& inst, const SolverParams& params, const DepthResult& r) {
  std::vector<char> in(inst.num_rows(), 0);
  for (int j : r.cover_rows) in[j] = 1;
  for (int j = 0; j < inst.num_rows(); ++j) {
    if (!in[j]) {
      EXPECT_GE(dot(inst.rows[j], r.direction), params.epsilon - 1e-7);
    }
  }
  int w = 0;
  for (int j : r.cover_rows) w += inst.weights[j];
  EXPECT_EQ(w, r.mip_value);
  EXPECT_EQ(r.depth, r.mip_value + inst.forced_count);
}

TEST(SearchTree, OneChildFirst) {
  SearchTree tree;
  SearchNode root;
  tree.branch(root, 3, 1.5);
  ASSERT_EQ(tree.size(), 2u);
  const auto first = tree.next_node();
  EXPECT_EQ(first.fixed_to_one, (std::vector<int>{3}));
  EXPECT_EQ(first.depth, 1);
  EXPECT_EQ(first.parent_bound, 1.5);
  const auto second = tree.next_node();
  EXPECT_EQ(second.fixed_to_zero, (std::vector<int>{3}));
  EXPECT_TRUE(tree.empty());
}

TEST(SolveDepth, Cross) {
  const auto inst = from_rows(2, kCross);
  const auto params = params_for(inst);
  const auto r = solve_depth(inst, params);
  EXPECT_EQ(r.depth, 2);
  EXPECT_EQ(r.status, SolveStatus::kProven);
  EXPECT_EQ(r.cover.size(), 2u);
  expect_certified(inst, params, r);
}

TEST(SolveDepth, PointOutsideHull) {
  const auto inst = build_instance(testing::make_points(2, {{1, 1}, {2, 1}, {1, 2}}), {0, 0});
  const auto r = solve_depth(inst, params_for(inst));
  EXPECT_EQ(r.depth, 0);
  EXPECT_TRUE(r.cover.empty());
}

TEST(SolveDepth, ForcedPointsAreReported) {
  auto ps = testing::make_points(2, {{1, 1}, {1, 1}, {3, 3}, {1, 1}});
  const Vector p = take_query_point(ps, 0);
  const auto inst = build_instance(ps, p);
  const auto r = solve_depth(inst, params_for(inst));
  EXPECT_EQ(r.depth, 2);
  EXPECT_EQ(r.cover, (std::vector<std::size_t>{0, 2}));
}

TEST(SolveDepth, EmptyInstance) {
  const auto inst = build_instance(testing::make_points(2, {{0, 0}}), {0, 0});
  const auto r = solve_depth(inst, params_for(inst));
  EXPECT_EQ(r.depth, 1);
  EXPECT_EQ(r.stats.nodes, 0);
}

TEST(SolveDepth, WeightsFromMergedRows) {
  // Three copies of +x against one -x: only the single row is worth removing.
  const auto inst = from_rows(1, {{1}, {2}, {3}, {-1}});
  ASSERT_EQ(inst.num_rows(), 2);
  const auto r = solve_depth(inst, params_for(inst));
  EXPECT_EQ(r.depth, 1);
  EXPECT_EQ(r.cover, (std::vector<std::size_t>{3}));
}

TEST(SolveDepth, RootBoundIsBelowOptimum) {
  for (int seed = 0; seed < 20; ++seed) {
    const auto inst = testing::random_instance(15, 3, 10, 70 + seed);
    const auto r = solve_depth(inst, params_for(inst));
    EXPECT_LE(r.stats.root_bound, r.mip_value + 1e-6);
    EXPECT_GE(r.stats.heuristic_value, r.mip_value);
  }
}

struct Config {
  Branching branching;
  CutMode cuts;
};

class SolveDepthConfigs : public ::testing::TestWithParam<Config> {};

TEST_P(SolveDepthConfigs, MatchesOracle) {
  const auto cfg = GetParam();
  for (int seed = 0; seed < 40; ++seed) {
    const int d = 2 + seed % 4;
    const int n = 8 + (seed * 7) % 17;
    const auto points = random_points(n, d, 10, 200 + seed);
    const auto inst = build_instance(points, Vector(d, 0.0));
    const auto params = params_for(inst, cfg.branching, cfg.cuts);
    const auto r = solve_depth(inst, params);
    ASSERT_EQ(r.status, SolveStatus::kProven);
    EXPECT_EQ(r.depth, oracle_depth(translated_rows(points, Vector(d, 0.0)), d)) << "seed " << seed;
    expect_certified(inst, params, r);
    for (const auto& cut : r.cuts) {
      EXPECT_LE(static_cast<int>(cut.support.size()), d + 1);
    }
  }
}

std::string config_name(const ::testing::TestParamInfo<Config>& info) {
  static const char* const kCuts[] = {"Auto", "None", "Bis", "Knapsack"};
  return std::string(info.param.branching == Branching::kGreedy ? "Greedy" : "Strong") +
         kCuts[static_cast<int>(info.param.cuts)];
}

INSTANTIATE_TEST_SUITE_P(All, SolveDepthConfigs,
                         ::testing::Values(Config{Branching::kGreedy, CutMode::kAuto},
                                           Config{Branching::kGreedy, CutMode::kBis},
                                           Config{Branching::kGreedy, CutMode::kNone},
                                           Config{Branching::kStrong, CutMode::kAuto},
                                           Config{Branching::kStrong, CutMode::kBisKnapsack}),
                         config_name);

TEST(SolveDepth, NodeLimitIsReported) {
  const auto inst = testing::random_instance(30, 4, 10, 5);
  SolverParams base;
  base.node_limit = 1;
  base.cuts = CutMode::kNone;
  base.rounding = false;
  const auto params = make_params(inst, base);
  const auto r = solve_depth(inst, params);
  if (r.stats.nodes >= 1 && r.status != SolveStatus::kProven) {
    EXPECT_EQ(r.status, SolveStatus::kNodeLimit);
  }
  // Whatever the status, the reported cover is feasible.
  expect_certified(inst, params, r);
}

TEST(SolveDepth, ZeroTimeLimitKeepsHeuristic) {
  const auto inst = testing::random_instance(20, 3, 10, 6);
  SolverParams base;
  base.time_limit = 0.0;
  const auto params = make_params(inst, base);
  const auto r = solve_depth(inst, params);
  EXPECT_EQ(r.status, SolveStatus::kTimeLimit);
  EXPECT_EQ(r.mip_value, r.stats.heuristic_value);
  expect_certified(inst, params, r);
}

TEST(SolveDepth, HalvingEpsilonKeepsDepth) {
  for (int seed = 0; seed < 15; ++seed) {
    const auto inst = testing::random_instance(14, 3, 10, 300 + seed);
    SolverParams base;
    const auto a = solve_depth(inst, make_params(inst, base));
    base.epsilon /= 2;
    const auto b = solve_depth(inst, make_params(inst, base));
    EXPECT_EQ(a.depth, b.depth);
  }
}

TEST(SelectBranchGreedy, FeasibleNodeIsSettled) {
  const auto inst = from_rows(2, kCross);
  const auto params = params_for(inst);
  SearchNode node;
  node.fixed_to_one = {1, 3};
  const auto c = select_branch_greedy(node, inst, params);
  EXPECT_TRUE(c.ok);
  EXPECT_EQ(c.row, -1);
  EXPECT_GE(c.x[0], params.epsilon - 1e-9);
  EXPECT_GE(c.x[1], params.epsilon - 1e-9);
}

TEST(SelectBranchGreedy, PicksAnUnfixedRow) {
  const auto inst = from_rows(2, kCross);
  SearchNode node;
  node.fixed_to_zero = {0};
  const auto c = select_branch_greedy(node, inst, params_for(inst));
  EXPECT_TRUE(c.ok);
  EXPECT_GT(c.row, 0);
  EXPECT_GT(c.sinf, 0.0);
}

TEST(SelectBranchStrong, PicksAFractionalRowAndRestoresBounds) {
  const auto inst = from_rows(2, kCross);
  const auto params = params_for(inst, Branching::kStrong);
  lp::LpSolver lp(build_cover_mip(inst, params));
  const auto before = lp.solve();
  ASSERT_EQ(before.status, lp::Status::kOptimal);
  MipLayout layout{2, 4, -1};
  std::vector<double> s(4);
  for (int j = 0; j < 4; ++j) s[j] = before.primal[layout.s_col(j)];
  const std::vector<char> fixed(4, 0);
  const int b = select_branch_strong(lp, layout, s, fixed, before.objective_value, params);
  ASSERT_GE(b, 0);
  EXPECT_GT(std::min(s[b], 1.0 - s[b]), params.int_tol);
  const auto after = lp.solve();
  EXPECT_NEAR(after.objective_value, before.objective_value, 1e-9);
}

TEST(SelectBranchStrong, MatchesExhaustiveScoring) {
  int checked = 0;
  for (int seed = 0; seed < 25; ++seed) {
    const auto inst = testing::random_instance(10, 2 + seed % 2, 10, 2000 + seed);
    if (inst.num_rows() == 0) continue;
    auto base = SolverParams{};
    base.branching = Branching::kStrong;
    base.strong_candidates = inst.num_rows();
    const auto params = make_params(inst, base);
    const auto model = build_cover_mip(inst, params);
    lp::LpSolver lp(model);
    const auto root = lp.solve();
    ASSERT_EQ(root.status, lp::Status::kOptimal);
    const MipLayout layout{inst.dim, inst.num_rows(), -1};
    std::vector<double> s(inst.num_rows());
    for (int j = 0; j < inst.num_rows(); ++j) s[j] = root.primal[layout.s_col(j)];

    // Independent scorer: cold solves of both children for every fractional binary.
    auto score_of = [&](int j) {
      auto gain = [&](double v) {
        auto child = model;
        child.col_lower[layout.s_col(j)] = v;
        child.col_upper[layout.s_col(j)] = v;
        const auto sol = lp::solve_lp(child);
        if (sol.status == lp::Status::kInfeasible) return 1e6;
        return std::max(sol.objective_value - root.objective_value, 1e-6);
      };
      return gain(0.0) * gain(1.0);
    };
    double best = -1.0;
    for (int j = 0; j < inst.num_rows(); ++j) {
      if (std::min(s[j], 1.0 - s[j]) > params.int_tol) best = std::max(best, score_of(j));
    }
    const std::vector<char> fixed(inst.num_rows(), 0);
    const int b = select_branch_strong(lp, layout, s, fixed, root.objective_value, params);
    if (best < 0) {
      EXPECT_EQ(b, -1);
      continue;
    }
    ASSERT_GE(b, 0);
    EXPECT_NEAR(score_of(b), best, 1e-7 * (1.0 + best)) << "seed " << seed;
    ++checked;
  }
  EXPECT_GT(checked, 5);
}

TEST(SelectBranchStrong, SingleFractionalBinary) {
  const auto inst = from_rows(1, {{1}, {-1}});
  const auto params = params_for(inst, Branching::kStrong);
  lp::LpSolver lp(build_cover_mip(inst, params));
  const auto root = lp.solve();
  const MipLayout layout{1, 2, -1};
  // Only the second binary is presented as fractional.
  const std::vector<double> s{1.0, 0.5};
  const std::vector<char> fixed(2, 0);
  EXPECT_EQ(select_branch_strong(lp, layout, s, fixed, root.objective_value, params), 1);
}

TEST(SelectBranchGreedy, DominantViolatedRowIsChosen) {
  // Unmerged rows +x, -x, -x: the elastic optimum x = -eps violates only the
  // +x row, which is then the branching row.
  InstanceOptions plain;
  plain.merge = false;
  const auto inst = from_rows(1, {{1}, {-1}, {-2}}, plain);
  SearchNode node;
  const auto c = select_branch_greedy(node, inst, params_for(inst));
  EXPECT_TRUE(c.ok);
  EXPECT_EQ(c.row, 0);
  EXPECT_NEAR(c.sinf, 2e-5, 1e-12);
}

TEST(SolveDepth, WeightedMatchesExpanded) {
  for (int seed = 0; seed < 20; ++seed) {
    auto ps = random_points(12, 2 + seed % 3, 2, 3100 + seed);  // small range: many parallel rows
    const Vector origin(ps.dim, 0.0);
    const auto weighted = build_instance(ps, origin);
    InstanceOptions plain;
    plain.merge = false;
    const auto expanded = build_instance(ps, origin, plain);
    const auto a = solve_depth(weighted, params_for(weighted));
    const auto b = solve_depth(expanded, params_for(expanded));
    EXPECT_EQ(a.depth, b.depth) << seed;
    EXPECT_LE(weighted.num_rows(), expanded.num_rows());
  }
}

TEST(SolveDepth, AddingAPointRaisesDepthByAtMostOne) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> coord(-10, 10);
  for (int seed = 0; seed < 25; ++seed) {
    const int d = 2 + seed % 3;
    auto ps = random_points(10 + seed % 10, d, 10, 3300 + seed);
    const Vector origin(d, 0.0);
    const auto before = build_instance(ps, origin);
    const int d0 = solve_depth(before, params_for(before)).depth;
    Vector q(d);
    for (auto& v : q) v = coord(rng);
    ps.points.push_back(q);
    const auto after = build_instance(ps, origin);
    const int d1 = solve_depth(after, params_for(after)).depth;
    EXPECT_TRUE(d1 == d0 || d1 == d0 + 1) << seed << ": " << d0 << " -> " << d1;
  }
}

}  // namespace
}  // namespace hsdepth
