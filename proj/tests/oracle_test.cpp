#include "hsdepth/oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hsdepth/generate.hpp"

namespace hsdepth {
namespace {

const std::vector<Vector> kCross{{1, 0}, {-1, 0}, {0, 1}, {0, -1}};

std::vector<Vector> at_angles(std::initializer_list<double> degrees) {
  std::vector<Vector> rows;
  for (double deg : degrees) {
    const double r = deg * M_PI / 180.0;
    rows.push_back({std::cos(r), std::sin(r)});
  }
  return rows;
}

TEST(OracleDepth, Cross) { EXPECT_EQ(oracle_depth(kCross, 2), 2); }

TEST(OracleDepth, OpenHalfspaceGivesZero) {
  EXPECT_EQ(oracle_depth({{1, 2, 0}, {3, -1, 1}, {1, 0, -5}}, 3), 0);
}

TEST(OracleDepth, Triangle) { EXPECT_EQ(oracle_depth(at_angles({0, 120, 240}), 2), 1); }

TEST(OracleDepth, ZeroRowsCountEverywhere) {
  EXPECT_EQ(oracle_depth({{0, 0}, {1, 0}}, 2), 1);
}

TEST(OracleDepth, OneDimension) {
  EXPECT_EQ(oracle_depth({{1}, {2}, {-1}}, 1), 1);
  EXPECT_EQ(oracle_depth({{1}, {2}}, 1), 0);
}

TEST(OracleDepth, RankDeficientRows) {
  // All rows on the x-axis of R^3: depth is the 1-d depth on that line.
  EXPECT_EQ(oracle_depth({{1, 0, 0}, {2, 0, 0}, {-1, 0, 0}}, 3), 1);
  // Antipodal pairs in a plane of R^3.
  EXPECT_EQ(oracle_depth({{1, 1, 0}, {-1, -1, 0}, {0, 0, 1}, {0, 0, -1}}, 3), 2);
}

TEST(OracleDepth, TiedDirectionsInThreeDimensions) {
  // Octahedron vertices: any closed halfspace through the center holds >= 3.
  const std::vector<Vector> octa{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  EXPECT_EQ(oracle_depth(octa, 3), 3);
}

TEST(SweepDepth2d, Examples) {
  EXPECT_EQ(sweep_depth_2d(kCross), 2);
  EXPECT_EQ(sweep_depth_2d(at_angles({10, 20, 30, 40, 50})), 0);
  EXPECT_EQ(sweep_depth_2d(at_angles({0, 120, 240})), 1);
  EXPECT_EQ(sweep_depth_2d({{1, 0}, {2, 0}, {-1, 0}}), 1);
  EXPECT_EQ(sweep_depth_2d({}), 0);
}

TEST(SweepDepth2d, RejectsBadInput) {
  EXPECT_THROW(sweep_depth_2d({{1, 0, 0}}), std::invalid_argument);
  EXPECT_THROW(sweep_depth_2d({{0, 0}}), std::invalid_argument);
}

TEST(Oracles, AgreeOnRandom2d) {
  for (int seed = 0; seed < 300; ++seed) {
    const int n = 3 + seed % 25;
    auto rows = translated_rows(random_points(n, 2, seed % 2 ? 3 : 10, seed), {0, 0});
    std::erase_if(rows, [](const Vector& a) { return a[0] == 0 && a[1] == 0; });
    EXPECT_EQ(oracle_depth(rows, 2), sweep_depth_2d(rows)) << "seed " << seed;
  }
}

TEST(Oracles, PermutationInvariance) {
  std::mt19937_64 rng(1);
  for (int seed = 0; seed < 30; ++seed) {
    auto rows = translated_rows(random_points(15, 3, 4, seed), {0, 0, 0});
    const int base = oracle_depth(rows, 3);
    std::shuffle(rows.begin(), rows.end(), rng);
    EXPECT_EQ(oracle_depth(rows, 3), base);
  }
}

TEST(Oracles, NoSampledDirectionBeatsOracle) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (int seed = 0; seed < 30; ++seed) {
    const int d = 2 + seed % 3;
    const auto rows = translated_rows(random_points(12, d, 5, 1000 + seed), Vector(d, 0.0));
    const int depth = oracle_depth(rows, d);
    int best_sampled = static_cast<int>(rows.size());
    for (int s = 0; s < 3000; ++s) {
      Vector u(d);
      for (auto& v : u) v = g(rng);
      int count = 0;
      for (const auto& a : rows) count += dot(u, a) <= 0;
      best_sampled = std::min(best_sampled, count);
    }
    EXPECT_LE(depth, best_sampled) << "seed " << seed;
  }
}

}  // namespace
}  // namespace hsdepth
