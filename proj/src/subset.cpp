#include "magkit/subset.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

#include "magkit/bordered.hpp"

namespace magkit {

namespace {

Eigen::VectorXd sim_column(const MetricSpace& space, double t, const std::vector<int>& members,
                           int candidate) {
  Eigen::VectorXd z(static_cast<Eigen::Index>(members.size()));
  for (size_t a = 0; a < members.size(); ++a)
    z[static_cast<Eigen::Index>(a)] = std::exp(-t * space.distance(members[a], candidate));
  return z;
}

}  // namespace

void SelectionCurve::write_csv(std::ostream& out) const {
  out << "size,point_id,magnitude\n";
  out.precision(17);
  for (const auto& s : steps) out << s.subset_size << ',' << s.point_id << ',' << s.magnitude << '\n';
}

SelectionCurve greedy_select(const MetricSpace& space, double t, double tolerance_k,
                             int max_size, std::uint64_t rng_seed) {
  const int n = space.size();
  if (!(t > 0.0)) throw_input("NonPositiveScale", "scale t must be positive");
  if (!(tolerance_k > 0.0 && tolerance_k < 1.0))
    throw_input("InvalidConfig", "tolerance_k must lie in (0, 1)");
  if (max_size < 0) max_size = n;
  if (max_size > n) throw_input("InvalidConfig", "max_size exceeds the point count");

  SelectionCurve curve;
  curve.tolerance_used = tolerance_k;
  if (max_size == 0) return curve;

  std::mt19937_64 rng(rng_seed);
  const int seed_point = static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(rng));

  IncrementalMagnitude inc(max_size);
  std::vector<int> members;
  std::vector<bool> taken(static_cast<size_t>(n), false);
  inc.add(Eigen::VectorXd());
  members.push_back(seed_point);
  taken[static_cast<size_t>(seed_point)] = true;
  curve.steps.push_back({1, seed_point, inc.magnitude()});

  while (static_cast<int>(members.size()) < max_size) {
    int best_id = -1;
    double best_gain = -1.0;
    for (int s = 0; s < n; ++s) {
      if (taken[static_cast<size_t>(s)]) continue;
      const double gain = inc.gain_if_added(sim_column(space, t, members, s));
      if (gain > best_gain) {
        best_gain = gain;
        best_id = s;
      }
    }
    const double mag_old = inc.magnitude();
    inc.add(sim_column(space, t, members, best_id));
    members.push_back(best_id);
    taken[static_cast<size_t>(best_id)] = true;
    curve.steps.push_back({static_cast<int>(members.size()), best_id, inc.magnitude()});
    if ((inc.magnitude() - mag_old) / mag_old < tolerance_k) break;
  }
  curve.stopped_at = static_cast<int>(members.size());
  return curve;
}

SelectionCurve random_select(const MetricSpace& space, double t, std::vector<int> sizes,
                             std::uint64_t rng_seed) {
  const int n = space.size();
  if (!(t > 0.0)) throw_input("NonPositiveScale", "scale t must be positive");
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  for (int s : sizes)
    if (s < 1 || s > n) throw_input("InvalidConfig", "subset size out of range");

  SelectionCurve curve;
  if (sizes.empty()) return curve;

  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(rng_seed);
  std::shuffle(order.begin(), order.end(), rng);

  IncrementalMagnitude inc(sizes.back());
  std::vector<int> members;
  size_t next = 0;
  for (int k = 0; k < sizes.back(); ++k) {
    const int id = order[static_cast<size_t>(k)];
    inc.add(sim_column(space, t, members, id));
    members.push_back(id);
    if (k + 1 == sizes[next]) {
      curve.steps.push_back({k + 1, id, inc.magnitude()});
      ++next;
    }
  }
  curve.stopped_at = sizes.back();
  return curve;
}

MagnitudeEstimate estimate_param_magnitude(const Eigen::VectorXd& params, int sample_size,
                                           std::uint64_t rng_seed) {
  const Eigen::Index n = params.size();
  if (n < 2) throw_input("DegenerateParams", "parameter vector needs at least 2 entries");
  if (sample_size < 2) throw_input("InvalidConfig", "sample_size must be >= 2");
  if (!params.allFinite()) throw_input("NonFiniteCoordinate", "parameters must be finite");
  const auto t0 = std::chrono::steady_clock::now();

  Eigen::Index imin = 0, imax = 0;
  params.minCoeff(&imin);
  params.maxCoeff(&imax);

  std::vector<double> chosen;
  chosen.push_back(params[imin]);
  chosen.push_back(params[imax]);
  if (sample_size >= n) {
    for (Eigen::Index i = 0; i < n; ++i) chosen.push_back(params[i]);
  } else {
    // Partial Fisher-Yates over indices, seeded.
    std::vector<Eigen::Index> idx(static_cast<size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    std::mt19937_64 rng(rng_seed);
    for (int k = 0; k < sample_size; ++k) {
      std::uniform_int_distribution<Eigen::Index> pick(k, n - 1);
      std::swap(idx[static_cast<size_t>(k)], idx[static_cast<size_t>(pick(rng))]);
      chosen.push_back(params[idx[static_cast<size_t>(k)]]);
    }
  }
  std::sort(chosen.begin(), chosen.end());
  chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());

  MagnitudeEstimate est;
  est.method = Method::closed_form_1d;
  if (chosen.size() == 1) {
    est.value = 1.0;
    est.pmag = 1.0;
    est.degenerate = true;
  } else {
    Eigen::VectorXd xs = Eigen::Map<Eigen::VectorXd>(chosen.data(),
                                                     static_cast<Eigen::Index>(chosen.size()));
    est.value = magnitude_1d(xs);
    est.pmag = est.value;
  }
  est.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return est;
}

}  // namespace magkit
