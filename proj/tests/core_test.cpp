#include "hsdepth/core.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "hsdepth/generate.hpp"
#include "hsdepth/io.hpp"

namespace hsdepth {
namespace {

PointSet make_points(int dim, std::vector<Vector> pts) {
  PointSet ps;
  ps.dim = dim;
  ps.points = std::move(pts);
  return ps;
}

TEST(BuildInstance, CrossAtOrigin) {
  const auto inst = build_instance(make_points(2, {{1, 0}, {-1, 0}, {0, 1}, {0, -1}}), {0, 0});
  ASSERT_EQ(inst.num_rows(), 4);
  EXPECT_EQ(inst.forced_count, 0);
  for (int w : inst.weights) EXPECT_EQ(w, 1);
  EXPECT_EQ(inst.rows[1], (Vector{-1, 0}));
}

TEST(BuildInstance, MergesPositiveMultiples) {
  const auto inst = build_instance(make_points(2, {{2, 0}, {4, 0}}), {0, 0});
  ASSERT_EQ(inst.num_rows(), 1);
  EXPECT_EQ(inst.rows[0], (Vector{1, 0}));
  EXPECT_EQ(inst.weights[0], 2);
  EXPECT_EQ(inst.row_origin[0], (std::vector<std::size_t>{0, 1}));
}

TEST(BuildInstance, OppositeDirectionsStaySeparate) {
  const auto inst = build_instance(make_points(1, {{2}, {-4}}), {0});
  EXPECT_EQ(inst.num_rows(), 2);
}

TEST(BuildInstance, QueryCopiesAreForced) {
  // The query is taken by index, so one copy of (1,1) leaves the data.
  auto ps = make_points(2, {{1, 1}, {1, 1}, {3, 3}, {1, 1}});
  const Vector p = take_query_point(ps, 0);
  const auto inst = build_instance(ps, p);
  ASSERT_EQ(inst.num_rows(), 1);
  EXPECT_NEAR(inst.rows[0][0], 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(inst.rows[0][1], 1 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(inst.weights[0], 1);
  EXPECT_EQ(inst.forced_count, 2);
  EXPECT_EQ(inst.forced_points, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(inst.num_points(), 3);
}

TEST(BuildInstance, DimensionMismatch) {
  EXPECT_THROW(build_instance(make_points(2, {{1, 0}}), {0, 0, 0}), InputError);
  EXPECT_THROW(build_instance(make_points(2, {{1, 0, 2}}), {0, 0}), InputError);
}

TEST(BuildInstance, UnmergedKeepsEveryRow) {
  InstanceOptions opts;
  opts.merge = false;
  const auto inst = build_instance(make_points(2, {{2, 0}, {4, 0}}), {0, 0}, opts);
  EXPECT_EQ(inst.num_rows(), 2);
}

TEST(BuildInstance, TranslationAndScalingInvariance) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> shift(-10, 10);
  std::uniform_real_distribution<double> scale(0.1, 5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto ps = random_points(12, 3, 4, 100 + trial);
    const Vector p{0, 0, 0};
    const auto base = build_instance(ps, p);
    EXPECT_EQ(base.total_weight() + base.forced_count, 12);

    Vector t(3);
    for (auto& v : t) v = shift(rng);
    PointSet moved = ps;
    for (auto& q : moved.points)
      for (int k = 0; k < 3; ++k) q[k] += t[k];
    const auto shifted = build_instance(moved, t);

    PointSet scaled = ps;
    for (auto& q : scaled.points) {
      const double lambda = scale(rng);
      for (auto& v : q) v *= lambda;
    }
    const auto stretched = build_instance(scaled, p);

    for (const auto* other : {&shifted, &stretched}) {
      ASSERT_EQ(other->num_rows(), base.num_rows());
      EXPECT_EQ(other->weights, base.weights);
      EXPECT_EQ(other->forced_count, base.forced_count);
      for (int j = 0; j < base.num_rows(); ++j)
        for (int k = 0; k < 3; ++k) EXPECT_NEAR(other->rows[j][k], base.rows[j][k], 1e-12);
    }
  }
}

TEST(BigM, UnitRows) {
  const auto inst = build_instance(make_points(2, {{1, 0}, {0, 3}}), {0, 0});
  const auto m = compute_big_m(inst, 1000.0);
  EXPECT_NEAR(m[0], 1414.2135623730951, 1e-9);
  const auto inst4 = build_instance(make_points(4, {{1, 0, 0, 0}}), {0, 0, 0, 0});
  EXPECT_DOUBLE_EQ(compute_big_m(inst4, 1.0)[0], 2.0);
}

TEST(BigM, UnnormalizedRowScalesWithNorm) {
  InstanceOptions opts;
  opts.normalize = false;
  const auto inst = build_instance(make_points(3, {{0.5, 0, 0}}), {0, 0, 0}, opts);
  EXPECT_NEAR(compute_big_m(inst, 1.0)[0], std::sqrt(3.0) / 2.0, 1e-15);
}

TEST(LatticeBound, Values) {
  EXPECT_NEAR(lattice_epsilon_bound(10, 2), 1.0 / (20.0 * std::sqrt(2.0)), 1e-15);
  EXPECT_NEAR(lattice_epsilon_bound(10, 2), 0.0353553, 1e-7);
  EXPECT_NEAR(lattice_epsilon_bound(1, 2), 0.353553, 1e-6);
  EXPECT_NEAR(lattice_epsilon_bound(10, 5), std::pow(20.0 * std::sqrt(5.0), -4), 1e-20);
  EXPECT_NEAR(lattice_epsilon_bound(10, 5), 2.5e-7, 1e-9);
  EXPECT_THROW(lattice_epsilon_bound(0, 2), std::invalid_argument);
}

TEST(SolverParams, Validation) {
  const auto inst = build_instance(make_points(2, {{1, 0}, {0, 1}}), {0, 0});
  auto params = make_params(inst);
  EXPECT_NO_THROW(params.validate(inst));
  EXPECT_NEAR(params.big_m[0], std::sqrt(2.0), 1e-15);
  params.epsilon = 2.0;
  EXPECT_THROW(params.validate(inst), std::invalid_argument);
  params.epsilon = 1e-5;
  params.feas_tol = 0.0;
  EXPECT_THROW(params.validate(inst), std::invalid_argument);
}

TEST(SolverParams, KnapsackFollowsBranchingRule) {
  SolverParams p;
  EXPECT_EQ(p.effective_cuts(), CutMode::kBisKnapsack);
  p.branching = Branching::kStrong;
  EXPECT_EQ(p.effective_cuts(), CutMode::kBis);
  p.cuts = CutMode::kNone;
  EXPECT_EQ(p.effective_cuts(), CutMode::kNone);
}

TEST(PointSetIo, ParsesCommentsAndBlankLines) {
  std::istringstream in("# cross\n4 2\n1 0\n\n-1 0\n# inline comment line\n0 1\n0 -1\n");
  const auto ps = parse_point_set(in);
  EXPECT_EQ(ps.dim, 2);
  ASSERT_EQ(ps.size(), 4u);
  EXPECT_EQ(ps.points[3], (Vector{0, -1}));
}

TEST(PointSetIo, Errors) {
  auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return parse_point_set(in);
  };
  EXPECT_THROW(parse(""), InputError);
  EXPECT_THROW(parse("2 2\n1 0\n"), InputError);
  EXPECT_THROW(parse("1 2\n1 0 3\n"), InputError);
  EXPECT_THROW(parse("1 2\n1 x\n"), InputError);
  EXPECT_THROW(parse("1 2\n1 0\n2 2\n"), InputError);
  EXPECT_THROW(parse("1 0\n"), InputError);
}

TEST(PointSetIo, RoundTripPreservesValues) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0, 100);
  for (int trial = 0; trial < 20; ++trial) {
    PointSet ps = random_points(7, 3, 10, trial);
    for (auto& p : ps.points)
      for (auto& v : p) v += g(rng) * 1e-3;
    std::stringstream io;
    write_point_set(io, ps);
    EXPECT_EQ(parse_point_set(io), ps);
  }
}

TEST(PointLiteral, Parses) {
  EXPECT_EQ(parse_point_literal("0,0"), (Vector{0, 0}));
  EXPECT_EQ(parse_point_literal(" 1.5, -2 ,3e1"), (Vector{1.5, -2, 30}));
  EXPECT_THROW(parse_point_literal("1,,2"), InputError);
  EXPECT_THROW(parse_point_literal("a"), InputError);
}

TEST(RandomPoints, DeterministicPerSeed) {
  EXPECT_EQ(random_points(10, 3, 10, 42), random_points(10, 3, 10, 42));
  EXPECT_NE(random_points(10, 3, 10, 42), random_points(10, 3, 10, 43));
  for (const auto& p : random_points(50, 4, 3, 1).points)
    for (double v : p) {
      EXPECT_LE(std::abs(v), 3);
      EXPECT_EQ(v, std::round(v));
    }
}

}  // namespace
}  // namespace hsdepth
