#pragma once

#include <string>
#include <vector>

#include "magkit/magnitude.hpp"
#include "magkit/metric_space.hpp"

#include <json.hpp>

namespace magkit {

/// One submodularity check f(S) + f(T) >= f(S u T) + f(S n T).
struct SubmodularityReport {
  std::string instance;
  double mag_s_x1 = 0.0;    // f(S u {x1}) resp. f(S)
  double mag_s_x2 = 0.0;    // f(S u {x2}) resp. f(T)
  double mag_s_both = 0.0;  // f(S u {x1, x2}) resp. f(S u T)
  double mag_s = 0.0;       // f(S) resp. f(S n T)
  double slack = 0.0;       // first two minus last two
  bool holds = false;       // slack >= -1e-9

  nlohmann::json to_json() const;
};

/// The 2D-point vertex set {t e_1, -t e_1, ..., t e_D, -t e_D} of the scaled
/// cross-polytope in R^D, Euclidean metric.
MetricSpace cross_polytope(int dim, double t);

/// Mag(X u {0}) - Mag(X) for the cross-polytope via dense solves on the
/// (2D+1)- and 2D-point systems. Exceeds 1 for large D and t, certifying
/// non-submodularity.
double counterexample_gap(int dim, double t);

/// Same gap from the homogeneous closed form plus the bordered update:
/// gap = (1 - e^{-t} M)^2 / (1 - e^{-2t} M) with M the cross-polytope
/// magnitude.
double counterexample_gap_closed_form(int dim, double t);

/// The D -> infinity limit of the gap: (e^t - e^{t sqrt 2})^2 / (e^{2t} - e^{t sqrt 2}).
double limit_gap(double t);

/// Submodularity of 1d magnitude on X u {x1}, X u {x2} via the tanh closed
/// form. Always holds (slack is exactly 0 when x1 and x2 fall in different
/// gaps).  Errors: DuplicateValues.
SubmodularityReport check_submodular_1d(const Eigen::VectorXd& xs, double x1, double x2);

/// Worst submodularity slack over all subset pairs of the 3-point space with
/// side lengths d1 = d(x1,x2), d2 = d(x1,x3), d3 = d(x2,x3). Always holds.
/// Errors: TriangleViolation.
SubmodularityReport check_submodular_3pt(double d1, double d2, double d3);

/// Non-submodularity quadruple on nested cross-polytopes: S = X_{ds} u {0},
/// T = X_{dl} with X_{ds} a sub-cross-polytope of X_{dl} (ds < dl).
/// Violated for e.g. (14, 30, 3).
SubmodularityReport check_submodular_cross(int dim_small, int dim_large, double t);

struct BestSubset {
  std::vector<int> ids;
  double magnitude = 0.0;
};

/// Enumerates all C(n,k) subsets and returns the magnitude maximizer
/// (lexicographically smallest on ties).  Errors: TooLarge (n > 20).
BestSubset brute_force_best_subset(const MetricSpace& space, double t, int k);

}  // namespace magkit
