#pragma once

// Two-factor ANOVA instances.  Observations z_{i,j,k} (i < n, j < m, k < r)
// follow the additive model mu_i + nu_j + noise.  For a fit theta = (mu, nu)
// the sign gradient of observation (i, j, k) is
//
//   G = -sign(z_{i,j,k} - mu_i - nu_j) * (e_i + e_{n+j}),
//
// and the depth of the origin among these gradients is the regression depth
// of theta.  At most 2nm distinct nonzero gradients exist, so the instances
// are heavily duplicated once r > 1.

#include <random>
#include <stdexcept>
#include <vector>

#include "hsdepth/core.hpp"

namespace hsdepth {

struct AnovaSpec {
  int n = 1;  // levels of the first factor
  int m = 1;  // levels of the second factor
  int r = 1;  // replicates per cell
  Vector theta;  // mu_1..mu_n, nu_1..nu_m
  std::vector<double> z;  // z[(i * m + j) * r + k]
  std::uint64_t seed = 0;

  double obs(int i, int j, int k) const { return z[(static_cast<std::size_t>(i) * m + j) * r + k]; }

  void validate() const {
    if (n < 1 || m < 1 || r < 1) throw std::invalid_argument("anova: n, m, r must be positive");
    if (static_cast<int>(theta.size()) != n + m) throw std::invalid_argument("anova: theta must have n + m entries");
    if (z.size() != static_cast<std::size_t>(n) * m * r) throw std::invalid_argument("anova: z has the wrong size");
  }
};

/// Least-squares fit of the additive model: grand mean split evenly between
/// the two factors plus row and column effects.
inline Vector least_squares_fit(int n, int m, int r, const std::vector<double>& z) {
  std::vector<double> row(n, 0.0), col(m, 0.0);
  double grand = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      for (int k = 0; k < r; ++k) {
        const double v = z[(static_cast<std::size_t>(i) * m + j) * r + k];
        row[i] += v;
        col[j] += v;
        grand += v;
      }
    }
  }
  grand /= static_cast<double>(n) * m * r;
  Vector theta(n + m);
  for (int i = 0; i < n; ++i) theta[i] = row[i] / (m * r) - grand / 2;
  for (int j = 0; j < m; ++j) theta[n + j] = col[j] / (n * r) - grand / 2;
  return theta;
}

struct AnovaNoise {
  double mean = 0.0;
  double stddev = 1.0;
  double effect_spread = 1.0;  // true mu, nu drawn uniformly from [-spread, spread]
};

/// Random instance: true effects uniform, observations normal around
/// mu_i + nu_j, theta set to the least-squares fit.  Deterministic per seed.
inline AnovaSpec gen_random_anova(int n, int m, int r, std::uint64_t seed, AnovaNoise noise = {}) {
  if (n < 1 || m < 1 || r < 1) throw std::invalid_argument("anova: n, m, r must be positive");
  if (!(noise.stddev > 0.0)) throw std::invalid_argument("anova: stddev must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> effect(-noise.effect_spread, noise.effect_spread);
  std::normal_distribution<double> eps(noise.mean, noise.stddev);
  Vector truth(n + m);
  for (auto& t : truth) t = effect(rng);

  AnovaSpec spec;
  spec.n = n;
  spec.m = m;
  spec.r = r;
  spec.seed = seed;
  spec.z.resize(static_cast<std::size_t>(n) * m * r);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      for (int k = 0; k < r; ++k) spec.z[(static_cast<std::size_t>(i) * m + j) * r + k] = truth[i] + truth[n + j] + eps(rng);
    }
  }
  spec.theta = least_squares_fit(n, m, r, spec.z);
  return spec;
}

/// One gradient per observation, in dimension n + m; the query is the origin.
inline PointSet sign_gradients(const AnovaSpec& spec) {
  spec.validate();
  PointSet ps;
  ps.dim = spec.n + spec.m;
  ps.points.reserve(spec.z.size());
  for (int i = 0; i < spec.n; ++i) {
    for (int j = 0; j < spec.m; ++j) {
      for (int k = 0; k < spec.r; ++k) {
        const double resid = spec.obs(i, j, k) - spec.theta[i] - spec.theta[spec.n + j];
        const double sign = resid > 0 ? 1.0 : (resid < 0 ? -1.0 : 0.0);
        Vector g(ps.dim, 0.0);
        if (sign != 0.0) {
          g[i] = -sign;
          g[spec.n + j] = -sign;
        }
        ps.points.push_back(std::move(g));
      }
    }
  }
  return ps;
}

}  // namespace hsdepth
