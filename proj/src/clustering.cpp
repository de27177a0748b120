#include "magkit/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "magkit/bordered.hpp"
#include "magkit/scale.hpp"

namespace magkit {

namespace {

constexpr int kExactMeanLimit = 5000;
constexpr long kMeanSamplePairs = 100000;

double mean_pairwise_distance(const MetricSpace& space, std::uint64_t seed) {
  const int n = space.size();
  if (n < 2) return 1.0;
  if (n <= kExactMeanLimit) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) sum += space.distance(i, j);
    return sum / (0.5 * n * (n - 1));
  }
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::uniform_int_distribution<int> pick(0, n - 1);
  double sum = 0.0;
  long kept = 0;
  while (kept < kMeanSamplePairs) {
    const int i = pick(rng);
    const int j = pick(rng);
    if (i == j) continue;
    sum += space.distance(i, j);
    ++kept;
  }
  return sum / kept;
}

struct Cluster {
  IncrementalMagnitude inc;
  std::vector<int> members;
  explicit Cluster(int capacity) : inc(capacity) {}
};

}  // namespace

void ClusteringResult::write_assignment_csv(std::ostream& out) const {
  out << "point_id,cluster_id\n";
  for (size_t i = 0; i < assignment.size(); ++i) out << i << ',' << assignment[i] << '\n';
}

nlohmann::json ClusteringResult::to_json() const {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["theta"] = theta;
  j["seed"] = seed;
  j["start_point"] = start_point;
  j["mean_pairwise_distance"] = mean_pairwise_distance;
  j["cluster_count"] = cluster_count;
  j["assignment"] = assignment;
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : trace)
    steps.push_back({{"point", s.point_id},
                     {"cluster", s.cluster_id},
                     {"best_increase", s.best_increase},
                     {"new_cluster", s.new_cluster}});
  j["trace"] = std::move(steps);
  return j;
}

ClusteringResult cluster(const MetricSpace& space, double theta, std::uint64_t rng_seed) {
  if (!(theta >= 0.0)) throw_input("InvalidConfig", "theta must be >= 0");
  const int n = space.size();

  ClusteringResult result;
  result.theta = theta;
  result.seed = rng_seed;
  result.assignment.assign(static_cast<size_t>(n), -1);
  result.mean_pairwise_distance = mean_pairwise_distance(space, rng_seed);
  const double scale = 1.0 / result.mean_pairwise_distance;

  std::mt19937_64 rng(rng_seed);
  const int start = n == 1 ? 0 : std::uniform_int_distribution<int>(0, n - 1)(rng);
  result.start_point = start;

  std::vector<Cluster> clusters;
  clusters.emplace_back(8);
  clusters[0].inc.add(Eigen::VectorXd());
  clusters[0].members.push_back(start);
  result.assignment[static_cast<size_t>(start)] = 0;

  std::vector<int> remaining;
  for (int i = 0; i < n; ++i)
    if (i != start) remaining.push_back(i);

  auto column = [&](const Cluster& c, int b) {
    Eigen::VectorXd z(static_cast<Eigen::Index>(c.members.size()));
    for (size_t a = 0; a < c.members.size(); ++a)
      z[static_cast<Eigen::Index>(a)] = std::exp(-scale * space.distance(c.members[a], b));
    return z;
  };

  while (!remaining.empty()) {
    int best_point = -1, best_cluster = -1;
    double best_increase = std::numeric_limits<double>::infinity();
    for (int b : remaining) {
      for (size_t ci = 0; ci < clusters.size(); ++ci) {
        const double inc = clusters[ci].inc.gain_if_added(column(clusters[ci], b));
        if (inc < best_increase) {
          best_increase = inc;
          best_point = b;
          best_cluster = static_cast<int>(ci);
        }
      }
    }
    const bool merge = best_increase < theta;
    if (merge) {
      auto& c = clusters[static_cast<size_t>(best_cluster)];
      c.inc.add(column(c, best_point));
      c.members.push_back(best_point);
    } else {
      best_cluster = static_cast<int>(clusters.size());
      clusters.emplace_back(8);
      clusters.back().inc.add(Eigen::VectorXd());
      clusters.back().members.push_back(best_point);
    }
    result.assignment[static_cast<size_t>(best_point)] = best_cluster;
    result.trace.push_back({best_point, best_cluster, best_increase, !merge});
    remaining.erase(std::find(remaining.begin(), remaining.end(), best_point));
  }

  result.cluster_count = static_cast<int>(clusters.size());
  return result;
}

void PersistenceProfile::write_csv(std::ostream& out) const {
  out << "theta,cluster_count\n";
  out.precision(17);
  for (size_t i = 0; i < thetas.size(); ++i) out << thetas[i] << ',' << counts[i] << '\n';
}

PersistenceProfile persistence_sweep(const MetricSpace& space, const std::vector<double>& thetas,
                                     std::uint64_t rng_seed) {
  if (thetas.empty()) throw_input("InvalidConfig", "threshold grid is empty");
  for (size_t i = 0; i < thetas.size(); ++i) {
    if (!(thetas[i] >= 0.0)) throw_input("InvalidConfig", "thresholds must be >= 0");
    if (i > 0 && thetas[i] <= thetas[i - 1])
      throw_input("InvalidConfig", "threshold grid must be strictly ascending");
  }

  PersistenceProfile profile;
  profile.thetas = thetas;
  for (double theta : thetas)
    profile.counts.push_back(cluster(space, theta, rng_seed).cluster_count);

  // Longest contiguous run of one count; ties go to the smaller count.
  int best_len = 0, best_count = profile.counts[0];
  size_t i = 0;
  while (i < profile.counts.size()) {
    size_t j = i;
    while (j + 1 < profile.counts.size() && profile.counts[j + 1] == profile.counts[i]) ++j;
    const int len = static_cast<int>(j - i + 1);
    if (len > best_len || (len == best_len && profile.counts[i] < best_count)) {
      best_len = len;
      best_count = profile.counts[i];
    }
    i = j + 1;
  }
  profile.persistent_count = best_count;
  return profile;
}

std::vector<double> default_theta_grid() {
  return log_spaced(1e-3, 1.0, 24);
}

}  // namespace magkit
