#pragma once

// Brute-force halfspace depth, used as ground truth in tests.
//
// depth(rows) = min over directions u != 0 of #{ j : u . a_j <= 0 }.
//
// oracle_depth enumerates candidate directions: the normals of hyperplanes
// spanned by d-1 linearly independent rows.  Rows on such a hyperplane are
// resolved by recursing inside it (a small tilt of u within the hyperplane
// decides their sign), so tied and degenerate data are handled without
// perturbation.  sweep_depth_2d is an independent angular sweep for d = 2.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "hsdepth/core.hpp"

namespace hsdepth {

namespace detail {

inline constexpr double kOracleZeroTol = 1e-9;
inline constexpr double kPivotTol = 1e-10;

// Orthonormal basis of span(vectors) by modified Gram-Schmidt.
inline std::vector<Vector> orthonormal_span(const std::vector<Vector>& vectors, int dim) {
  std::vector<Vector> basis;
  for (const auto& v : vectors) {
    if (static_cast<int>(basis.size()) == dim) break;
    Vector w = v;
    const double scale = norm2(v);
    if (scale == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        const double c = dot(w, b);
        for (int k = 0; k < dim; ++k) w[k] -= c * b[k];
      }
    }
    const double len = norm2(w);
    if (len <= kPivotTol * scale) continue;
    for (auto& x : w) x /= len;
    basis.push_back(std::move(w));
  }
  return basis;
}

inline std::vector<Vector> coordinates_in(const std::vector<Vector>& rows, const std::vector<Vector>& basis) {
  std::vector<Vector> out;
  out.reserve(rows.size());
  for (const auto& a : rows) {
    Vector c(basis.size());
    for (std::size_t k = 0; k < basis.size(); ++k) c[k] = dot(a, basis[k]);
    out.push_back(std::move(c));
  }
  return out;
}

// Generalized cross product of d-1 vectors in R^d: the cofactor expansion
// normal.  Zero when the vectors are dependent.  Exact for small integers.
inline Vector cofactor_normal(const std::vector<const Vector*>& vs, int dim) {
  Vector u(dim);
  Eigen::MatrixXd minor(dim - 1, dim - 1);
  for (int col = 0; col < dim; ++col) {
    for (int r = 0; r < dim - 1; ++r) {
      int cc = 0;
      for (int k = 0; k < dim; ++k) {
        if (k == col) continue;
        minor(r, cc++) = (*vs[r])[k];
      }
    }
    const double det = dim == 2 ? minor(0, 0) : minor.determinant();
    u[col] = ((col % 2 == 0) ? 1.0 : -1.0) * det;
  }
  return u;
}

inline int depth_1d(const std::vector<Vector>& rows) {
  int nonpos = 0;
  int nonneg = 0;
  for (const auto& a : rows) {
    if (a[0] <= 0) ++nonpos;
    if (a[0] >= 0) ++nonneg;
  }
  return std::min(nonpos, nonneg);
}

inline int depth_recursive(const std::vector<Vector>& rows, int dim) {
  const int n = static_cast<int>(rows.size());
  if (n == 0) return 0;
  if (dim == 1) return depth_1d(rows);

  const auto span = orthonormal_span(rows, dim);
  if (static_cast<int>(span.size()) < dim) {
    // Directions orthogonal to every row only add to the count; work in the span.
    return depth_recursive(coordinates_in(rows, span), static_cast<int>(span.size()));
  }

  std::vector<double> norms(n);
  for (int j = 0; j < n; ++j) norms[j] = norm2(rows[j]);

  int best = n;
  std::vector<int> pick(dim - 1);
  std::iota(pick.begin(), pick.end(), 0);
  std::vector<const Vector*> chosen(dim - 1);
  std::vector<Vector> on_plane;
  while (true) {
    for (int r = 0; r < dim - 1; ++r) chosen[r] = &rows[pick[r]];
    const Vector u = cofactor_normal(chosen, dim);
    const double ulen = norm2(u);
    double scale = 1.0;
    for (const auto* v : chosen) scale *= norm2(*v);
    if (ulen > kPivotTol * scale) {
      int neg = 0;
      int pos = 0;
      on_plane.clear();
      for (int j = 0; j < n; ++j) {
        const double s = dot(u, rows[j]);
        if (std::abs(s) <= kOracleZeroTol * ulen * norms[j]) on_plane.push_back(rows[j]);
        else if (s < 0) ++neg;
        else ++pos;
      }
      const int side = std::min(neg, pos);
      if (side < best) {
        // Basis of the hyperplane u-perp.
        std::vector<Vector> seeds{u};
        for (int k = 0; k < dim; ++k) {
          Vector e(dim, 0.0);
          e[k] = 1.0;
          seeds.push_back(std::move(e));
        }
        auto perp = orthonormal_span(seeds, dim);
        perp.erase(perp.begin());
        best = std::min(best, side + depth_recursive(coordinates_in(on_plane, perp), dim - 1));
        if (best == 0) return 0;
      }
    }
    // Next (d-1)-combination in lexicographic order.
    int r = dim - 2;
    while (r >= 0 && pick[r] == n - (dim - 1) + r) --r;
    if (r < 0) break;
    ++pick[r];
    for (int k = r + 1; k < dim - 1; ++k) pick[k] = pick[k - 1] + 1;
  }
  return best;
}

}  // namespace detail

/// Exact halfspace depth of the origin among `rows` (zero rows count as
/// lying in every closed halfspace).
inline int oracle_depth(const std::vector<Vector>& rows, int dim) {
  if (dim < 1) throw std::invalid_argument("dimension must be positive");
  int zeros = 0;
  std::vector<Vector> live;
  live.reserve(rows.size());
  for (const auto& a : rows) {
    if (static_cast<int>(a.size()) != dim) throw std::invalid_argument("row dimension mismatch");
    if (norm_inf(a) == 0.0) ++zeros;
    else live.push_back(a);
  }
  return zeros + detail::depth_recursive(live, dim);
}

/// Rows of the unmerged, unnormalized translation of `points` by `p`.
inline std::vector<Vector> translated_rows(const PointSet& points, const Vector& p) {
  std::vector<Vector> rows;
  rows.reserve(points.size());
  for (const auto& q : points.points) {
    Vector a(q.size());
    for (std::size_t k = 0; k < q.size(); ++k) a[k] = q[k] - p[k];
    rows.push_back(std::move(a));
  }
  return rows;
}

/// Angular sweep for d = 2.  Depth is n minus the largest number of rows in
/// an open half-plane through the origin; an optimal open half-plane can be
/// rotated until its boundary touches a row, so it suffices to count the rows
/// with angle in [theta_i, theta_i + pi) for every row i.  Angle comparisons
/// use exact sign predicates, so integer data is handled without tolerance.
inline int sweep_depth_2d(const std::vector<Vector>& rows) {
  for (const auto& a : rows) {
    if (a.size() != 2) throw std::invalid_argument("sweep_depth_2d requires d = 2");
    if (a[0] == 0.0 && a[1] == 0.0) throw std::invalid_argument("sweep_depth_2d rejects zero rows");
  }
  const int n = static_cast<int>(rows.size());
  if (n == 0) return 0;

  auto half = [](const Vector& a) { return (a[1] > 0 || (a[1] == 0 && a[0] > 0)) ? 0 : 1; };
  auto cross = [](const Vector& a, const Vector& b) { return a[0] * b[1] - a[1] * b[0]; };
  std::vector<Vector> sorted = rows;
  std::sort(sorted.begin(), sorted.end(), [&](const Vector& a, const Vector& b) {
    const int ha = half(a);
    const int hb = half(b);
    if (ha != hb) return ha < hb;
    return cross(a, b) > 0;
  });
  // b lies in [angle(a), angle(a) + pi).
  auto in_window = [&](const Vector& a, const Vector& b) {
    const double c = cross(a, b);
    return c > 0 || (c == 0 && dot(a, b) > 0);
  };
  auto same_direction = [&](const Vector& a, const Vector& b) {
    return cross(a, b) == 0 && dot(a, b) > 0;
  };

  int best = 0;
  int end = 0;  // window is [i, end) in the doubled sequence
  for (int i = 0; i < n; ++i) {
    // Only the first row of a run of equal directions starts a window.
    if (i > 0 && same_direction(sorted[i - 1], sorted[i])) continue;
    end = std::max(end, i + 1);
    while (end < i + n && in_window(sorted[i], sorted[end % n])) ++end;
    best = std::max(best, end - i);
  }
  return n - best;
}

}  // namespace hsdepth
