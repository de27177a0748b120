#include "magkit/oracles.hpp"

#include <algorithm>
#include <cmath>

#include "magkit/similarity.hpp"

namespace magkit {

namespace {

constexpr double kSlackTol = 1e-9;

double exact_value(const MetricSpace& space, double t) {
  return magnitude_exact(similarity(space, t)).estimate.value;
}

// Sorted copy of xs with extra values spliced in; rejects ties.
Eigen::VectorXd with_values(const Eigen::VectorXd& xs, std::initializer_list<double> extra) {
  std::vector<double> v(xs.data(), xs.data() + xs.size());
  v.insert(v.end(), extra.begin(), extra.end());
  std::sort(v.begin(), v.end());
  for (size_t i = 0; i + 1 < v.size(); ++i)
    if (v[i] == v[i + 1]) throw_input("DuplicateValues", "1d values must be pairwise distinct");
  return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void finish(SubmodularityReport& r) {
  r.slack = r.mag_s_x1 + r.mag_s_x2 - r.mag_s_both - r.mag_s;
  r.holds = r.slack >= -kSlackTol;
}

}  // namespace

nlohmann::json SubmodularityReport::to_json() const {
  return {{"instance", instance}, {"mag_s_x1", mag_s_x1},     {"mag_s_x2", mag_s_x2},
          {"mag_s_both", mag_s_both}, {"mag_s", mag_s},       {"slack", slack},
          {"holds", holds}};
}

MetricSpace cross_polytope(int dim, double t) {
  if (dim < 1) throw_input("EmptyInput", "cross-polytope dimension must be >= 1");
  if (!(t > 0.0)) throw_input("NonPositiveScale", "cross-polytope scale must be positive");
  Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(2 * dim, dim);
  for (int i = 0; i < dim; ++i) {
    pts(2 * i, i) = t;
    pts(2 * i + 1, i) = -t;
  }
  return build_space(pts, Metric::euclidean);
}

double counterexample_gap(int dim, double t) {
  if (dim < 1) throw_input("EmptyInput", "cross-polytope dimension must be >= 1");
  if (!(t > 0.0)) throw_input("NonPositiveScale", "cross-polytope scale must be positive");
  // Build the (2D+1)-point space once; the vertex-only space is its prefix.
  Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(2 * dim + 1, dim);
  for (int i = 0; i < dim; ++i) {
    pts(2 * i, i) = t;
    pts(2 * i + 1, i) = -t;
  }
  const MetricSpace with_center = build_space(pts, Metric::euclidean);
  std::vector<int> vertex_ids(static_cast<size_t>(2 * dim));
  for (int i = 0; i < 2 * dim; ++i) vertex_ids[static_cast<size_t>(i)] = i;
  const MetricSpace vertices = with_center.subset(vertex_ids);
  return exact_value(with_center, 1.0) - exact_value(vertices, 1.0);
}

double counterexample_gap_closed_form(int dim, double t) {
  const double mag = magnitude_homogeneous_cross(dim, t);
  const double a = 1.0 - std::exp(-t) * mag;
  const double denom = 1.0 - std::exp(-2.0 * t) * mag;
  return a * a / denom;
}

double limit_gap(double t) {
  if (!(t > 0.0)) throw_input("NonPositiveScale", "t must be positive");
  // (e^t - e^{t sqrt2})^2 / (e^{2t} - e^{t sqrt2}), factored so every
  // exponential argument except the leading one is negative.
  const double s = std::sqrt(2.0);
  const double lead = std::exp(2.0 * t * (s - 1.0));
  const double num = std::expm1(t * (1.0 - s));
  const double denom = -std::expm1(t * (s - 2.0));
  return lead * num * num / denom;
}

SubmodularityReport check_submodular_1d(const Eigen::VectorXd& xs, double x1, double x2) {
  SubmodularityReport r;
  r.instance = "1d n=" + std::to_string(xs.size());
  r.mag_s = magnitude_1d(with_values(xs, {}));
  r.mag_s_x1 = magnitude_1d(with_values(xs, {x1}));
  r.mag_s_x2 = magnitude_1d(with_values(xs, {x2}));
  r.mag_s_both = magnitude_1d(with_values(xs, {x1, x2}));
  finish(r);
  return r;
}

SubmodularityReport check_submodular_3pt(double d1, double d2, double d3) {
  if (!(d1 > 0.0 && d2 > 0.0 && d3 > 0.0))
    throw_input("NonPositiveDistance", "side lengths must be positive");
  if (d1 > d2 + d3 || d2 > d1 + d3 || d3 > d1 + d2)
    throw_input("TriangleViolation", "side lengths violate the triangle inequality");

  Eigen::MatrixXd dist(3, 3);
  dist << 0, d1, d2, d1, 0, d3, d2, d3, 0;
  const MetricSpace space = build_space_from_dist(dist);

  // Magnitude of every subset, indexed by bitmask.
  double mag[8];
  mag[0] = 0.0;
  for (int mask = 1; mask < 8; ++mask) {
    std::vector<int> ids;
    for (int b = 0; b < 3; ++b)
      if (mask & (1 << b)) ids.push_back(b);
    mag[mask] = ids.size() == 1 ? 1.0 : exact_value(space.subset(ids), 1.0);
  }

  SubmodularityReport worst;
  worst.instance = "3pt d=(" + std::to_string(d1) + "," + std::to_string(d2) + "," +
                   std::to_string(d3) + ")";
  bool first = true;
  for (int s = 0; s < 8; ++s) {
    for (int u = s; u < 8; ++u) {
      SubmodularityReport r;
      r.mag_s_x1 = mag[s];
      r.mag_s_x2 = mag[u];
      r.mag_s_both = mag[s | u];
      r.mag_s = mag[s & u];
      finish(r);
      if (first || r.slack < worst.slack) {
        first = false;
        r.instance = worst.instance;
        worst = r;
      }
    }
  }
  return worst;
}

SubmodularityReport check_submodular_cross(int dim_small, int dim_large, double t) {
  if (dim_small < 1 || dim_small >= dim_large)
    throw_input("InvalidConfig", "need 1 <= dim_small < dim_large");
  SubmodularityReport r;
  r.instance = "cross D" + std::to_string(dim_small) + " in D" + std::to_string(dim_large) +
               " t=" + std::to_string(t);

  Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(2 * dim_large + 1, dim_large);
  for (int i = 0; i < dim_large; ++i) {
    pts(2 * i, i) = t;
    pts(2 * i + 1, i) = -t;
  }
  const MetricSpace full = build_space(pts, Metric::euclidean);  // X_large u {0}
  const int center = 2 * dim_large;

  auto ids_upto = [&](int dim, bool with_center) {
    std::vector<int> ids;
    for (int i = 0; i < 2 * dim; ++i) ids.push_back(i);
    if (with_center) ids.push_back(center);
    return ids;
  };
  r.mag_s_x1 = exact_value(full.subset(ids_upto(dim_small, true)), 1.0);   // f(S)
  r.mag_s_x2 = exact_value(full.subset(ids_upto(dim_large, false)), 1.0);  // f(T)
  r.mag_s_both = exact_value(full, 1.0);                                   // f(S u T)
  r.mag_s = exact_value(full.subset(ids_upto(dim_small, false)), 1.0);     // f(S n T)
  finish(r);
  return r;
}

BestSubset brute_force_best_subset(const MetricSpace& space, double t, int k) {
  const int n = space.size();
  if (n > 20) throw_input("TooLarge", "brute-force enumeration is capped at n = 20");
  if (k < 1 || k > n) throw_input("InvalidConfig", "k must be in [1, n]");

  std::vector<int> pick(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) pick[static_cast<size_t>(i)] = i;
  BestSubset best;
  best.magnitude = -1.0;
  while (true) {
    const double value = k == 1 ? 1.0 : exact_value(space.subset(pick), t);
    if (value > best.magnitude) {  // strict: keeps the lexicographically first
      best.magnitude = value;
      best.ids = pick;
    }
    // next combination in lexicographic order
    int i = k - 1;
    while (i >= 0 && pick[static_cast<size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++pick[static_cast<size_t>(i)];
    for (int j = i + 1; j < k; ++j) pick[static_cast<size_t>(j)] = pick[static_cast<size_t>(j - 1)] + 1;
  }
  return best;
}

}  // namespace magkit
