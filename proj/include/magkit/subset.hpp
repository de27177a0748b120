#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "magkit/magnitude.hpp"
#include "magkit/metric_space.hpp"

namespace magkit {

struct SelectionStep {
  int subset_size = 0;
  int point_id = 0;
  double magnitude = 0.0;
};

struct SelectionCurve {
  std::vector<SelectionStep> steps;
  double tolerance_used = 0.0;
  int stopped_at = 0;

  double final_magnitude() const { return steps.empty() ? 0.0 : steps.back().magnitude; }
  void write_csv(std::ostream& out) const;
};

/// Greedy magnitude maximization: start from one seeded random point, then
/// repeatedly add the point with the largest magnitude gain (ties to the
/// lowest id). Stops once the realized relative increase drops below
/// tolerance_k, or at max_size. Candidate evaluations reuse the running
/// Cholesky factor, so a round over r remaining points costs O(r |S|^2).
SelectionCurve greedy_select(const MetricSpace& space, double t, double tolerance_k = 1e-3,
                             int max_size = -1, std::uint64_t rng_seed = 0);

/// Random baseline: nested seeded random subsets evaluated at each requested
/// size.
SelectionCurve random_select(const MetricSpace& space, double t, std::vector<int> sizes,
                             std::uint64_t rng_seed);

/// Magnitude of a parameter vector viewed as a subset of the real line,
/// estimated from the extremes plus a uniform sample: the sampled values and
/// the min and max are deduplicated, sorted and fed to magnitude_1d. Exact
/// whenever the sample covers every distinct value.
/// Errors: DegenerateParams (fewer than 2 values).
MagnitudeEstimate estimate_param_magnitude(const Eigen::VectorXd& params, int sample_size,
                                           std::uint64_t rng_seed);

}  // namespace magkit
