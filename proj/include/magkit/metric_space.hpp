#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

#include "magkit/errors.hpp"

namespace magkit {

enum class Metric { euclidean, manhattan };

enum class DuplicatePolicy { reject, deduplicate };

const char* metric_name(Metric m);

/// A finite metric space with stable point ids 0..n-1. Immutable once built;
/// distances are stored dense so row sweeps stay cache-friendly.
class MetricSpace {
public:
  int size() const { return static_cast<int>(dist_.rows()); }
  double distance(int i, int j) const { return dist_(i, j); }
  const Eigen::MatrixXd& distances() const { return dist_; }

  bool has_points() const { return points_.has_value(); }
  const Eigen::MatrixXd& points() const { return *points_; }
  Metric metric() const { return metric_; }

  /// Number of exact duplicates merged into point i (1 unless built with
  /// DuplicatePolicy::deduplicate).
  int multiplicity(int i) const { return multiplicity_[static_cast<size_t>(i)]; }

  double diameter() const;
  /// Smallest off-diagonal distance; 0 for a single point.
  double min_gap() const;

  /// The space tX: same points, all distances scaled by t.
  MetricSpace scaled(double t) const;
  /// Subspace on the given point ids (new ids follow the given order).
  MetricSpace subset(const std::vector<int>& ids) const;

  std::uint64_t uid() const { return uid_; }

private:
  MetricSpace() = default;

  Eigen::MatrixXd dist_;
  std::optional<Eigen::MatrixXd> points_;
  Metric metric_ = Metric::euclidean;
  std::vector<int> multiplicity_;
  std::uint64_t uid_ = 0;

  friend MetricSpace build_space(const Eigen::MatrixXd&, Metric, DuplicatePolicy);
  friend MetricSpace build_space_from_dist(const Eigen::MatrixXd&, DuplicatePolicy);
};

/// Builds a metric space from an n x D coordinate matrix.
/// Errors: EmptyInput, NonFiniteCoordinate, DuplicatePoints (reject policy).
MetricSpace build_space(const Eigen::MatrixXd& points, Metric metric = Metric::euclidean,
                        DuplicatePolicy policy = DuplicatePolicy::reject);

/// Wraps an explicit distance matrix (symmetrized by averaging).
/// Errors: NotSquare, AsymmetryExceedsTolerance (1e-9), NegativeDistance,
/// NonzeroDiagonal, EmptyInput, DuplicatePoints.
MetricSpace build_space_from_dist(const Eigen::MatrixXd& dist,
                                  DuplicatePolicy policy = DuplicatePolicy::reject);

Eigen::MatrixXd pairwise_distances(const Eigen::MatrixXd& points, Metric metric);

}  // namespace magkit
