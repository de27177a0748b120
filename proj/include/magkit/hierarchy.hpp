#pragma once

#include <Eigen/Core>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "magkit/metric_space.hpp"
#include "magkit/subset.hpp"

#include <json.hpp>

namespace magkit {

/// Discrete center hierarchy: nested levels S_0 ⊇ S_1 ⊇ ... where S_i is a
/// minimal independent covering set of S_{i-1} of radius 2^(i-1). Level 0 is
/// the whole point set with nominal radius 0; the top level is the first
/// singleton. Supports incremental point insertion and deletion; point ids
/// stay stable across updates.
///
/// Maintenance rules (deterministic, ascending-id scans):
///  - build: a point of S_{i-1} becomes a center of S_i unless it is within
///    2^(i-1) of an already accepted center.
///  - insert q: q joins S_1..S_L for the largest L such that q is farther
///    than 2^(j-1) from every center of S_j for all j <= L. The first level
///    that breaks this is exactly a level that covers q. If q reaches the
///    old top, levels are extended until the top is a singleton again.
///  - delete q: q leaves every level bottom-up; points of S_{i-1} left
///    uncovered at level i are promoted into S_i in ascending-id order.
class CoverHierarchy {
public:
  static CoverHierarchy build(const MetricSpace& space);

  int point_count() const;                 // active points
  int height() const { return static_cast<int>(levels_.size()) - 1; }
  const std::vector<std::vector<int>>& levels() const { return levels_; }
  double level_radius(int level) const { return level == 0 ? 0.0 : std::ldexp(1.0, level - 1); }

  /// Covering center of `id` (a member of S_{level-1}) at S_level.
  int parent(int level, int id) const;

  bool is_active(int id) const;
  double distance(int a, int b) const { return dist_(a, b); }
  double diameter() const;

  /// Inserts a new point by coordinates (requires a coordinate-backed space).
  /// Returns its id.  Errors: DuplicatePoint, NonFiniteCoordinate.
  int insert_point(const Eigen::VectorXd& coords);
  /// Inserts a new point given its distances to the active points in
  /// ascending-id order.  Errors: DuplicatePoint, NegativeDistance.
  int insert_point_dists(const Eigen::VectorXd& dists_to_active);

  /// Removes a point from every level, promoting uncovered points as needed.
  /// Errors: UnknownPoint.
  void delete_point(int id);

  /// Magnitude approximation curve: accumulate points from the top level
  /// down (ascending id within a level), evaluating magnitude after each
  /// addition, up to `budget` points.
  SelectionCurve approx_magnitude_topdown(double t, int budget) const;

  /// Empty if all hierarchy invariants (nesting, covering, independence,
  /// minimality, parent validity) hold, else a description of a violation.
  std::optional<std::string> check_invariants() const;

  nlohmann::json to_json() const;

private:
  CoverHierarchy() = default;

  void rebuild_parents(int level);
  void extend_top();
  void trim_top();
  int finish_insert(int id);

  Eigen::MatrixXd dist_;  // grows with inserted points; inactive rows keep stale data
  std::optional<Eigen::MatrixXd> points_;
  Metric metric_ = Metric::euclidean;
  std::vector<bool> active_;
  std::vector<std::vector<int>> levels_;           // ascending ids per level
  std::vector<std::map<int, int>> parents_;        // parents_[i]: S_i -> S_{i+1}
};

inline CoverHierarchy build_hierarchy(const MetricSpace& space) {
  return CoverHierarchy::build(space);
}

}  // namespace magkit
