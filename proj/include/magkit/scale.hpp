#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "magkit/hierarchy.hpp"
#include "magkit/solvers.hpp"

namespace magkit {

enum class SweepMethod { exact, iter_norm, gd, hierarchy };

const char* sweep_method_name(SweepMethod m);

struct SweepConfig {
  SolverConfig solver;        // iter_norm / gd backends
  int hierarchy_budget = -1;  // hierarchy backend; -1 means all points
};

/// The magnitude function t -> Mag(tX) evaluated on a scale grid. Failures
/// are recorded per entry instead of aborting the sweep.
struct ScaleSweep {
  std::vector<double> scales;
  std::vector<double> values;
  std::vector<bool> ok;
  std::vector<std::string> error_codes;
  SweepMethod method = SweepMethod::exact;

  /// d log Mag / d log t for each adjacent pair of valid entries
  /// (NaN where either endpoint failed).
  std::vector<double> slopes() const;
  void write_csv(std::ostream& out) const;
};

ScaleSweep magnitude_function(const MetricSpace& space, const std::vector<double>& scales,
                              SweepMethod method = SweepMethod::exact,
                              const SweepConfig& cfg = {});

/// 32 log-spaced scales spanning [0.01/diameter, 100/min_gap]; brackets the
/// Mag -> 1 and Mag -> n regimes.
std::vector<double> default_scale_grid(const MetricSpace& space, int steps = 32);

std::vector<double> log_spaced(double lo, double hi, int steps);

/// Least-squares slope of log Mag against log t over entries [lo, hi]
/// (inclusive). Errors: InsufficientWindow (fewer than 2 valid entries).
double magnitude_dimension(const ScaleSweep& sweep, int lo, int hi);

}  // namespace magkit
