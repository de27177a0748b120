#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "magkit/metric_space.hpp"

namespace magkit {

/// Similarity matrix zeta_ij = exp(-t * d_ij) with unit diagonal.
struct SimilarityMatrix {
  Eigen::MatrixXd zeta;
  double scale = 1.0;
  std::uint64_t space_uid = 0;

  int n() const { return static_cast<int>(zeta.rows()); }
};

SimilarityMatrix similarity(const MetricSpace& space, double t);

/// Builds zeta straight from coordinates without materializing the n x n
/// distance matrix (used on large benchmark clouds).
SimilarityMatrix similarity_from_points(const Eigen::MatrixXd& points, Metric metric, double t);

}  // namespace magkit
