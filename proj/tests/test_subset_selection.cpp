#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "magkit/bordered.hpp"
#include "magkit/oracles.hpp"
#include "magkit/similarity.hpp"
#include "magkit/subset.hpp"
#include "test_util.hpp"

using namespace magkit;

TEST_SUITE("subset-selection") {

TEST_CASE("two points: the second is forced and the curve ends at the exact pair") {
  Eigen::MatrixXd pts(2, 1);
  pts << 0.0, 2.0;
  const auto space = build_space(pts);
  const auto curve = greedy_select(space, 1.0, 1e-3, -1, 7);
  REQUIRE(curve.steps.size() == 2);
  const auto exact = magnitude_exact(similarity(space, 1.0)).estimate.value;
  CHECK(curve.final_magnitude() == doctest::Approx(exact).epsilon(1e-10));
  CHECK(curve.stopped_at == 2);
}

TEST_CASE("greedy curve is strictly increasing and bounded by the full magnitude") {
  std::mt19937_64 rng(11);
  const auto space = build_space(testutil::random_cloud(40, 2, rng));
  const auto full = magnitude_exact(similarity(space, 1.0)).estimate.value;
  const auto curve = greedy_select(space, 1.0, 1e-12, 40, 3);
  REQUIRE(curve.steps.size() == 40);
  for (size_t i = 0; i + 1 < curve.steps.size(); ++i)
    CHECK(curve.steps[i + 1].magnitude > curve.steps[i].magnitude);
  for (const auto& s : curve.steps) CHECK(s.magnitude <= full + 1e-10);
  CHECK(curve.final_magnitude() == doctest::Approx(full).epsilon(1e-8));
}

TEST_CASE("incremental magnitudes match fresh exact solves") {
  std::mt19937_64 rng(19);
  const auto space = build_space(testutil::random_cloud(15, 2, rng));
  const auto curve = greedy_select(space, 1.0, 1e-12, 15, 0);
  std::vector<int> prefix;
  for (const auto& step : curve.steps) {
    prefix.push_back(step.point_id);
    const auto exact =
        magnitude_exact(similarity(space.subset(prefix), 1.0)).estimate.value;
    CHECK(step.magnitude == doctest::Approx(exact).epsilon(1e-9));
  }
}

TEST_CASE("greedy increments never grow on the real line") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 4 + static_cast<int>(rng() % 7);
    const auto xs = testutil::random_sorted_distinct(n, rng);
    const auto space = build_space(xs);
    const auto curve = greedy_select(space, 1.0, 1e-12, n, trial);
    for (size_t i = 2; i < curve.steps.size(); ++i) {
      const double inc = curve.steps[i].magnitude - curve.steps[i - 1].magnitude;
      const double first = curve.steps[1].magnitude - curve.steps[0].magnitude;
      CHECK(inc <= first + 1e-10);
    }
  }
}

TEST_CASE("diminishing returns fails in higher dimension on the cross-polytope family") {
  // Insertion order with the center last: its marginal exceeds every earlier
  // one once e^-t * Mag(vertices) passes 2.
  const int dim = 250;
  const double t = 5.0;
  Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(2 * dim + 1, dim);
  for (int i = 0; i < dim; ++i) {
    pts(2 * i, i) = t;
    pts(2 * i + 1, i) = -t;
  }
  const auto space = build_space(pts);
  const auto sim_col = [&](const std::vector<int>& members, int cand) {
    Eigen::VectorXd z(static_cast<Eigen::Index>(members.size()));
    for (size_t a = 0; a < members.size(); ++a)
      z[static_cast<Eigen::Index>(a)] = std::exp(-space.distance(members[a], cand));
    return z;
  };
  IncrementalMagnitude inc(2 * dim + 1);
  std::vector<int> members;
  double first_increment = 0.0, last_increment = 0.0, prev = 0.0;
  for (int id = 0; id <= 2 * dim; ++id) {
    inc.add(sim_col(members, id));
    members.push_back(id);
    const double increment = inc.magnitude() - prev;
    prev = inc.magnitude();
    if (id == 1) first_increment = increment;
    last_increment = increment;
  }
  CHECK(first_increment < 1.0);
  CHECK(last_increment > 1.0);  // the far-from-submodular jump
  CHECK(last_increment > first_increment + 0.5);
  CHECK(last_increment ==
        doctest::Approx(counterexample_gap_closed_form(dim, t)).epsilon(1e-6));
}

TEST_CASE("greedy meets the 1 - 1/e guarantee against brute force in 1d") {
  std::mt19937_64 rng(31);
  const double factor = 1.0 - std::exp(-1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 6 + static_cast<int>(rng() % 3);
    const int k = 2 + static_cast<int>(rng() % 3);
    const auto space = build_space(testutil::random_sorted_distinct(n, rng));
    const auto curve = greedy_select(space, 1.0, 1e-12, k, trial);
    const auto best = brute_force_best_subset(space, 1.0, k);
    CHECK(curve.final_magnitude() >= factor * best.magnitude - 1e-9);
  }
}

TEST_CASE("greedy reaches 99 percent of the blob magnitude early") {
  std::mt19937_64 rng(7);
  const auto pts = testutil::blobs({{0, 0}, {9, 0}, {4.5, 8}}, 30, 0.5, rng);
  const auto space = build_space(pts);
  const double full = magnitude_exact(similarity(space, 1.0)).estimate.value;
  const auto curve = greedy_select(space, 1.0, 1e-12, space.size(), 1);
  int reached = space.size();
  for (const auto& s : curve.steps)
    if (s.magnitude >= 0.99 * full) {
      reached = s.subset_size;
      break;
    }
  CHECK(reached <= space.size() * 2 / 5);
}

TEST_CASE("greedy stops once the relative increase drops below tolerance") {
  std::mt19937_64 rng(37);
  const auto space = build_space(testutil::blobs({{0, 0}}, 30, 0.3, rng));
  const auto curve = greedy_select(space, 1.0, 0.05, space.size(), 2);
  CHECK(curve.stopped_at < space.size());
  CHECK(curve.tolerance_used == 0.05);
  CHECK(static_cast<int>(curve.steps.size()) == curve.stopped_at);
  // the realized final relative increase is the one that fell below tolerance
  const auto& s = curve.steps;
  const double last_rel =
      (s.back().magnitude - s[s.size() - 2].magnitude) / s[s.size() - 2].magnitude;
  CHECK(last_rel < 0.05);
}

TEST_CASE("random subsets: trivial sizes and seeded reproducibility") {
  std::mt19937_64 rng(3);
  const auto space = build_space(testutil::random_cloud(25, 2, rng));
  const auto curve = random_select(space, 1.0, {1, 10, 25}, 99);
  REQUIRE(curve.steps.size() == 3);
  CHECK(curve.steps[0].magnitude == doctest::Approx(1.0).epsilon(1e-12));
  const double full = magnitude_exact(similarity(space, 1.0)).estimate.value;
  CHECK(curve.steps[2].magnitude == doctest::Approx(full).epsilon(1e-9));
  CHECK(curve.steps[1].magnitude > curve.steps[0].magnitude);

  const auto again = random_select(space, 1.0, {1, 10, 25}, 99);
  for (size_t i = 0; i < 3; ++i) {
    CHECK(again.steps[i].point_id == curve.steps[i].point_id);
    CHECK(again.steps[i].magnitude == curve.steps[i].magnitude);
  }
}

TEST_CASE("mean random curve does not beat greedy on blobs") {
  std::mt19937_64 rng(5);
  const auto space = build_space(testutil::blobs({{0, 0}, {8, 0}}, 30, 0.4, rng));
  const auto greedy = greedy_select(space, 1.0, 1e-12, space.size(), 0);
  std::vector<int> sizes;
  for (int s = 1; s <= space.size(); ++s) sizes.push_back(s);
  std::vector<double> mean(sizes.size(), 0.0);
  const int seeds = 5;
  for (int seed = 0; seed < seeds; ++seed) {
    const auto rc = random_select(space, 1.0, sizes, static_cast<std::uint64_t>(seed));
    for (size_t i = 0; i < sizes.size(); ++i) mean[i] += rc.steps[i].magnitude / seeds;
  }
  for (size_t i = 0; i < sizes.size(); ++i)
    CHECK(mean[i] <= greedy.steps[i].magnitude + 1e-9);
}

TEST_CASE("parameter-magnitude estimator") {
  Eigen::Vector2d pair(0.0, 3.0);
  const auto est = estimate_param_magnitude(pair, 2, 0);
  CHECK(est.value == doctest::Approx(1.0 + std::tanh(1.5)).epsilon(1e-14));

  Eigen::VectorXd constant = Eigen::VectorXd::Constant(40, 2.5);
  const auto degenerate = estimate_param_magnitude(constant, 10, 0);
  CHECK(degenerate.value == 1.0);
  CHECK(degenerate.degenerate);

  std::mt19937_64 rng(13);
  Eigen::VectorXd params(30);
  for (int i = 0; i < 30; ++i) params[i] = std::uniform_real_distribution<double>(-5, 5)(rng);
  const auto full = estimate_param_magnitude(params, 30, 1);
  std::vector<double> sorted(params.data(), params.data() + 30);
  std::sort(sorted.begin(), sorted.end());
  Eigen::VectorXd xs = Eigen::Map<Eigen::VectorXd>(sorted.data(), 30);
  CHECK(full.value == doctest::Approx(magnitude_1d(xs)).epsilon(1e-14));

  // extremes always included: the two-point lower bound holds for any sample
  for (int seed = 0; seed < 10; ++seed) {
    const auto est2 = estimate_param_magnitude(params, 5, static_cast<std::uint64_t>(seed));
    const double range = params.maxCoeff() - params.minCoeff();
    CHECK(est2.value >= 1.0 + std::tanh(range / 2.0) - 1e-12);
    CHECK(est2.value <= full.value + 1e-12);  // monotone in the sample
  }

  Eigen::VectorXd single(1);
  single << 1.0;
  try {
    estimate_param_magnitude(single, 2, 0);
    FAIL("expected DegenerateParams");
  } catch (const Error& e) {
    CHECK(e.code() == "DegenerateParams");
  }
}

}  // TEST_SUITE
