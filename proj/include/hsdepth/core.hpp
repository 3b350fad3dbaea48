#pragma once

// Instance construction for halfspace depth: translation of the point set to
// the query point, row normalization, merging of parallel rows into weighted
// rows, and the big-M / epsilon parameters of the mixed-integer model.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace hsdepth {

using Vector = std::vector<double>;

/// Raised for malformed input: bad dimensions, unparsable files, bad flags.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double dot(const Vector& a, const Vector& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

inline double norm2(const Vector& a) { return std::sqrt(dot(a, a)); }

inline double norm_inf(const Vector& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

/// A labeled point cloud in `dim` dimensions.
struct PointSet {
  int dim = 0;
  std::vector<Vector> points;
  std::vector<std::string> labels;  // empty, or one per point

  std::size_t size() const { return points.size(); }

  void validate() const {
    if (dim <= 0) throw InputError("point set dimension must be positive");
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (static_cast<int>(points[i].size()) != dim) {
        throw InputError("point " + std::to_string(i) + " has " +
                         std::to_string(points[i].size()) +
                         " coordinates, expected " + std::to_string(dim));
      }
    }
    if (!labels.empty() && labels.size() != points.size()) {
      throw InputError("label count does not match point count");
    }
  }

  bool operator==(const PointSet&) const = default;
};

/// The homogeneous system a_j . x > 0 obtained by translating every point by
/// the query point.  Parallel rows (equal up to a positive multiple) are
/// merged into one row whose weight is the multiplicity.  Points equal to the
/// query point yield the unsatisfiable row 0 > 0; they are not rows but are
/// counted in `forced_count` and belong to every cover.
struct DepthInstance {
  int dim = 0;
  std::vector<Vector> rows;
  std::vector<int> weights;
  int forced_count = 0;
  Vector origin_point;
  std::vector<std::vector<std::size_t>> row_origin;  // row -> point indices
  std::vector<std::size_t> forced_points;

  int num_rows() const { return static_cast<int>(rows.size()); }

  int total_weight() const {
    return std::accumulate(weights.begin(), weights.end(), 0);
  }

  /// Number of original points described by the instance.
  int num_points() const { return total_weight() + forced_count; }
};

struct InstanceOptions {
  bool normalize = true;  // scale rows to unit Euclidean norm
  bool merge = true;      // merge rows with equal direction
  double merge_tol = 1e-9;
};

/// Builds the translated row system for query point `p`.
inline DepthInstance build_instance(const PointSet& points, const Vector& p,
                                    const InstanceOptions& options = {}) {
  points.validate();
  if (static_cast<int>(p.size()) != points.dim) {
    throw InputError("query point has " + std::to_string(p.size()) +
                     " coordinates, expected " + std::to_string(points.dim));
  }

  DepthInstance inst;
  inst.dim = points.dim;
  inst.origin_point = p;
  const double zero_tol = 1e-12 * (1.0 + norm_inf(p));

  std::vector<Vector> directions;  // unit directions, used for merging
  for (std::size_t i = 0; i < points.size(); ++i) {
    Vector a(points.dim);
    for (int k = 0; k < points.dim; ++k) a[k] = points.points[i][k] - p[k];
    const double len = norm2(a);
    if (norm_inf(a) <= zero_tol) {
      ++inst.forced_count;
      inst.forced_points.push_back(i);
      continue;
    }
    Vector unit = a;
    for (double& v : unit) v /= len;

    if (options.merge) {
      auto same = std::find_if(directions.begin(), directions.end(),
                               [&](const Vector& u) {
                                 for (int k = 0; k < points.dim; ++k) {
                                   if (std::abs(u[k] - unit[k]) >= options.merge_tol) return false;
                                 }
                                 return true;
                               });
      if (same != directions.end()) {
        const auto r = static_cast<std::size_t>(same - directions.begin());
        ++inst.weights[r];
        inst.row_origin[r].push_back(i);
        continue;
      }
    }
    directions.push_back(unit);
    inst.rows.push_back(options.normalize ? unit : a);
    inst.weights.push_back(1);
    inst.row_origin.push_back({i});
  }
  return inst;
}

/// Big-M per row: sqrt(d c^2) * |a_j|, an upper bound on |a_j . x| over the
/// box -c <= x_i <= c.
inline Vector compute_big_m(const DepthInstance& inst, double box_bound) {
  const double scale = std::sqrt(inst.dim * box_bound * box_bound);
  Vector m(inst.rows.size());
  for (std::size_t j = 0; j < inst.rows.size(); ++j) m[j] = scale * norm2(inst.rows[j]);
  return m;
}

/// Lower bound (2 m sqrt(d))^-(d-1) on the distance from the origin to an
/// affine hyperplane spanned by d affinely independent integer points with
/// coordinates bounded by m.  Far too small to use as epsilon beyond a few
/// dimensions; kept for reference and diagnostics.
inline double lattice_epsilon_bound(int m, int d) {
  if (m <= 0 || d < 2) throw std::invalid_argument("lattice bound needs m >= 1 and d >= 2");
  return std::pow(2.0 * m * std::sqrt(static_cast<double>(d)), -(d - 1));
}

enum class Branching { kGreedy, kStrong };
enum class CutMode { kAuto, kNone, kBis, kBisKnapsack };
enum class HeuristicMode { kSingle, kTested };

struct SolverParams {
  double epsilon = 1e-5;
  double box_bound = 1.0;
  Vector big_m;  // per row; filled by make_params
  int cut_rounds = 10;
  double improve_tol = 1e-3;
  double feas_tol = 1e-9;
  double int_tol = 1e-6;
  double time_limit = 600.0;  // seconds
  long node_limit = 1'000'000;

  Branching branching = Branching::kGreedy;
  CutMode cuts = CutMode::kAuto;
  int strong_candidates = 5;
  HeuristicMode heuristic = HeuristicMode::kTested;
  int heuristic_candidates = 3;
  bool rounding = true;

  // Binary search driver.
  double eps_accept = 1e-7;
  bool reuse_pool = true;

  /// Knapsack selection is on with greedy branching and off with strong
  /// branching unless set explicitly.
  CutMode effective_cuts() const {
    if (cuts != CutMode::kAuto) return cuts;
    return branching == Branching::kGreedy ? CutMode::kBisKnapsack : CutMode::kBis;
  }

  void validate(const DepthInstance& inst) const {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (!(box_bound > 0.0)) throw std::invalid_argument("box bound must be positive");
    if (!(feas_tol > 0.0) || !(int_tol > 0.0) || !(improve_tol > 0.0) || !(eps_accept > 0.0)) {
      throw std::invalid_argument("tolerances must be positive");
    }
    if (static_cast<int>(big_m.size()) != inst.num_rows()) {
      throw std::invalid_argument("big_m must have one entry per row");
    }
    for (double m : big_m) {
      if (!(epsilon < m)) {
        throw std::invalid_argument("epsilon must be below every big-M value");
      }
    }
    if (cut_rounds < 1 || strong_candidates < 1 || heuristic_candidates < 1) {
      throw std::invalid_argument("candidate and round counts must be positive");
    }
  }
};

/// Default parameters for `inst`, with big-M computed from the box bound.
inline SolverParams make_params(const DepthInstance& inst, SolverParams base = {}) {
  base.big_m = compute_big_m(inst, base.box_bound);
  return base;
}

}  // namespace hsdepth
