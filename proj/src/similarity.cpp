#include "magkit/similarity.hpp"

#include <cmath>

namespace magkit {

SimilarityMatrix similarity(const MetricSpace& space, double t) {
  if (!(t > 0.0)) throw_input("NonPositiveScale", "similarity scale t must be positive");
  const int n = space.size();
  SimilarityMatrix sim;
  sim.scale = t;
  sim.space_uid = space.uid();
  sim.zeta.resize(n, n);
  const Eigen::MatrixXd& d = space.distances();
  for (int i = 0; i < n; ++i) {
    sim.zeta(i, i) = 1.0;
    for (int j = i + 1; j < n; ++j) {
      const double z = std::exp(-t * d(i, j));
      sim.zeta(i, j) = z;
      sim.zeta(j, i) = z;
    }
  }
  return sim;
}

SimilarityMatrix similarity_from_points(const Eigen::MatrixXd& points, Metric metric, double t) {
  if (!(t > 0.0)) throw_input("NonPositiveScale", "similarity scale t must be positive");
  if (points.rows() == 0 || points.cols() == 0)
    throw_input("EmptyInput", "point matrix must have at least one row and column");
  if (!points.allFinite()) throw_input("NonFiniteCoordinate", "point coordinates must be finite");
  const int n = static_cast<int>(points.rows());
  SimilarityMatrix sim;
  sim.scale = t;
  sim.zeta.resize(n, n);
  for (int i = 0; i < n; ++i) {
    sim.zeta(i, i) = 1.0;
    for (int j = i + 1; j < n; ++j) {
      const auto diff = points.row(i) - points.row(j);
      const double d = metric == Metric::euclidean ? diff.norm() : diff.cwiseAbs().sum();
      const double z = std::exp(-t * d);
      sim.zeta(i, j) = z;
      sim.zeta(j, i) = z;
    }
  }
  return sim;
}

}  // namespace magkit
