#pragma once

#include <cstdint>
#include <random>

#include "hsdepth/core.hpp"

namespace hsdepth {

/// n points with integer coordinates drawn uniformly from [-range, range].
inline PointSet random_points(int n, int d, int range, std::uint64_t seed) {
  if (n < 1 || d < 1 || range < 1) throw InputError("random_points: n, d, range must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coord(-range, range);
  PointSet ps;
  ps.dim = d;
  ps.points.assign(n, Vector(d));
  for (auto& p : ps.points) {
    for (auto& c : p) c = coord(rng);
  }
  return ps;
}

/// Removes point `index` from `ps` and returns it as the query point.
inline Vector take_query_point(PointSet& ps, std::size_t index) {
  if (index >= ps.points.size()) {
    throw InputError("point index " + std::to_string(index) + " out of range");
  }
  Vector q = ps.points[index];
  ps.points.erase(ps.points.begin() + static_cast<std::ptrdiff_t>(index));
  if (!ps.labels.empty()) ps.labels.erase(ps.labels.begin() + static_cast<std::ptrdiff_t>(index));
  return q;
}

}  // namespace hsdepth
