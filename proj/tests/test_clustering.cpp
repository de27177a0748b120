#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <set>

#include "magkit/clustering.hpp"
#include "magkit/magnitude.hpp"
#include "test_util.hpp"

using namespace magkit;

namespace {

MetricSpace two_pairs() {
  Eigen::MatrixXd pts(4, 1);
  pts << 0.0, 0.1, 10.0, 10.1;
  return build_space(pts);
}

// partition as a set of id-sets, ignoring cluster labels
std::set<std::set<int>> partition_of(const std::vector<int>& assignment) {
  std::set<std::set<int>> parts;
  const int k = *std::max_element(assignment.begin(), assignment.end()) + 1;
  for (int c = 0; c < k; ++c) {
    std::set<int> part;
    for (size_t i = 0; i < assignment.size(); ++i)
      if (assignment[i] == c) part.insert(static_cast<int>(i));
    parts.insert(part);
  }
  return parts;
}

}  // namespace

TEST_SUITE("magnitude-clustering") {

TEST_CASE("four-point line splits into its two pairs at theta 0.5") {
  for (std::uint64_t seed : {0ull, 1ull, 7ull}) {
    const auto result = cluster(two_pairs(), 0.5, seed);
    CHECK(result.cluster_count == 2);
    CHECK(partition_of(result.assignment) ==
          std::set<std::set<int>>{{0, 1}, {2, 3}});
    CHECK(result.mean_pairwise_distance == doctest::Approx(6.7).epsilon(1e-12));
  }
}

TEST_CASE("theta 0 isolates every point") {
  const auto result = cluster(two_pairs(), 0.0, 3);
  CHECK(result.cluster_count == 4);
  for (const auto& step : result.trace) {
    CHECK(step.new_cluster);
    CHECK(step.best_increase > 0.0);
  }
}

TEST_CASE("a large theta merges everything on blob data") {
  std::mt19937_64 rng(5);
  const auto space = build_space(testutil::blobs({{0, 0}, {6, 0}}, 20, 0.5, rng));
  const auto result = cluster(space, 1.0, 0);
  CHECK(result.cluster_count == 1);
}

TEST_CASE("cluster ids are contiguous and every point is assigned once") {
  std::mt19937_64 rng(9);
  const auto space = build_space(testutil::random_cloud(30, 2, rng, 2.0));
  const auto result = cluster(space, 0.3, 11);
  REQUIRE(result.assignment.size() == 30);
  std::set<int> seen(result.assignment.begin(), result.assignment.end());
  CHECK(static_cast<int>(seen.size()) == result.cluster_count);
  CHECK(*seen.begin() == 0);
  CHECK(*seen.rbegin() == result.cluster_count - 1);
  CHECK(result.trace.size() == 29);
  // merge/new-cluster events agree with theta
  for (const auto& step : result.trace)
    CHECK(step.new_cluster == (step.best_increase >= 0.3));
}

TEST_CASE("fixed seed reproduces the assignment") {
  std::mt19937_64 rng(13);
  const auto space = build_space(testutil::random_cloud(25, 2, rng, 2.0));
  const auto a = cluster(space, 0.2, 5);
  const auto b = cluster(space, 0.2, 5);
  CHECK(a.assignment == b.assignment);
  CHECK(a.start_point == b.start_point);
  REQUIRE(a.trace.size() == b.trace.size());
  for (size_t i = 0; i < a.trace.size(); ++i)
    CHECK(a.trace[i].best_increase == b.trace[i].best_increase);
}

TEST_CASE("trace replay reproduces every recorded increase") {
  std::mt19937_64 rng(17);
  const auto space = build_space(testutil::random_cloud(18, 2, rng, 2.0));
  const auto result = cluster(space, 0.4, 3);
  const double scale = 1.0 / result.mean_pairwise_distance;

  std::vector<std::vector<int>> members(static_cast<size_t>(result.cluster_count));
  members[static_cast<size_t>(result.assignment[static_cast<size_t>(result.start_point)])]
      .push_back(result.start_point);
  for (const auto& step : result.trace) {
    if (!step.new_cluster) {
      // recompute Mag(c u {b}) - Mag(c) from scratch at this step
      const auto& cl = members[static_cast<size_t>(step.cluster_id)];
      Eigen::MatrixXd d(cl.size() + 1, cl.size() + 1);
      for (size_t a = 0; a < cl.size(); ++a) {
        d(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(cl.size())) =
            scale * space.distance(cl[a], step.point_id);
        d(static_cast<Eigen::Index>(cl.size()), static_cast<Eigen::Index>(a)) =
            d(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(cl.size()));
        for (size_t b = 0; b < cl.size(); ++b)
          d(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
              scale * space.distance(cl[a], cl[b]);
      }
      d(static_cast<Eigen::Index>(cl.size()), static_cast<Eigen::Index>(cl.size())) = 0.0;
      const auto with = magnitude_exact(similarity(build_space_from_dist(d), 1.0));
      const double without =
          cl.size() == 1
              ? 1.0
              : magnitude_exact(
                    similarity(build_space_from_dist(d.topLeftCorner(
                                   static_cast<Eigen::Index>(cl.size()),
                                   static_cast<Eigen::Index>(cl.size()))),
                               1.0))
                    .estimate.value;
      CHECK(with.estimate.value - without == doctest::Approx(step.best_increase).epsilon(1e-9));
    }
    members[static_cast<size_t>(step.cluster_id)].push_back(step.point_id);
  }
}

TEST_CASE("persistence finds the blob count") {
  std::mt19937_64 rng(23);
  std::vector<int> truth;
  const auto space =
      build_space(testutil::blobs({{0, 0}, {10, 0}, {5, 9}}, 40, 0.6, rng, &truth));
  const auto profile = persistence_sweep(space, default_theta_grid(), 1);
  CHECK(profile.persistent_count == 3);

  // the persistent clustering matches the generating labels
  double best_theta = 0.0;
  for (size_t i = 0; i < profile.thetas.size(); ++i)
    if (profile.counts[i] == 3) best_theta = profile.thetas[i];
  const auto result = cluster(space, best_theta, 1);
  CHECK(testutil::adjusted_rand_index(result.assignment, truth) >= 0.9);
}

TEST_CASE("a single tight blob persists at one cluster") {
  std::mt19937_64 rng(31);
  const auto space = build_space(testutil::blobs({{0, 0}}, 150, 0.5, rng));
  const auto profile = persistence_sweep(space, default_theta_grid(), 2);
  CHECK(profile.persistent_count == 1);
}

TEST_CASE("single-threshold grid reports that run's count") {
  const auto space = two_pairs();
  const auto profile = persistence_sweep(space, {0.5}, 0);
  CHECK(profile.persistent_count == 2);
}

TEST_CASE("single point clusters trivially") {
  Eigen::MatrixXd pt(1, 2);
  pt << 0.0, 0.0;
  const auto result = cluster(build_space(pt), 0.5, 0);
  CHECK(result.cluster_count == 1);
  CHECK(result.assignment == std::vector<int>{0});
  CHECK(result.trace.empty());
}

TEST_CASE("trace json shape") {
  const auto result = cluster(two_pairs(), 0.5, 0);
  const auto j = result.to_json();
  CHECK(j.at("schema_version") == 1);
  CHECK(j.at("cluster_count") == 2);
  CHECK(j.at("trace").size() == 3);
  CHECK(j.at("assignment").size() == 4);
}

}  // TEST_SUITE
