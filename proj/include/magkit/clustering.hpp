#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "magkit/metric_space.hpp"

#include <json.hpp>

namespace magkit {

struct ClusterStep {
  int point_id = 0;
  int cluster_id = 0;
  double best_increase = 0.0;
  bool new_cluster = false;
};

struct ClusteringResult {
  std::vector<int> assignment;  // point id -> cluster id, ids contiguous from 0
  double theta = 0.0;
  std::vector<ClusterStep> trace;  // the n-1 assignment rounds in order
  int cluster_count = 0;
  int start_point = 0;
  double mean_pairwise_distance = 1.0;  // normalizer applied before clustering
  std::uint64_t seed = 0;

  void write_assignment_csv(std::ostream& out) const;
  nlohmann::json to_json() const;
};

/// Magnitude clusterer. Distances are pre-scaled so the mean pairwise
/// distance is 1 (the similarity scale is then fixed at 1). Starting from a
/// seeded random singleton cluster, each round finds the (point, cluster)
/// pair with the smallest magnitude increase; the point merges when the
/// increase is below theta and founds a new cluster otherwise. Ties break to
/// the lowest point id, then the lowest cluster id.
ClusteringResult cluster(const MetricSpace& space, double theta, std::uint64_t rng_seed = 0);

struct PersistenceProfile {
  std::vector<double> thetas;
  std::vector<int> counts;
  int persistent_count = 0;  // count with the longest contiguous run (ties: smaller count)

  void write_csv(std::ostream& out) const;
};

/// Runs the clusterer across a threshold grid with a shared seed.
PersistenceProfile persistence_sweep(const MetricSpace& space, const std::vector<double>& thetas,
                                     std::uint64_t rng_seed = 0);

/// 24 log-spaced thresholds in [1e-3, 1].
std::vector<double> default_theta_grid();

}  // namespace magkit
