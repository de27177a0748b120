#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "magkit/magnitude.hpp"

namespace magkit {

struct SolverConfig {
  long max_iters = 1000;
  double tol = 1e-6;           // convergence threshold on max_i |G(i) - 1|
  double learning_rate = 0.01; // gd only
  long batch_size = 0;         // gd only; 0 means full batch
  std::uint64_t rng_seed = 0;  // gd batch shuffling
  bool record_trace = false;
};

struct TraceRow {
  long iteration = 0;
  double estimate = 0.0;  // sum of weights
  double residual = 0.0;  // max_i |G(i) - 1|
  double loss = 0.0;      // squared-residual loss, sum form
  double elapsed_seconds = 0.0;
};

struct ConvergenceTrace {
  std::vector<TraceRow> rows;
  void write_csv(std::ostream& out) const;
};

struct SolveResult {
  MagnitudeEstimate estimate;
  Weighting weighting;
  ConvergenceTrace trace;
};

/// Fixed-point scheme: w starts at all ones; each iteration computes
/// G(i) = sum_j zeta_ij w_j for all rows from the previous w, then divides
/// w_i by G(i) simultaneously. Weights stay strictly positive. Stops at
/// max_i |G(i) - 1| <= tol or max_iters (non-convergence is reported in the
/// estimate, never an error).  Errors: NonFiniteUpdate (internal).
SolveResult solve_iter_norm(const SimilarityMatrix& sim, const SolverConfig& cfg = {});

/// Minimizes the squared weighting residual by (stochastic) gradient descent
/// with momentum 0.9 from w = ones. The full-loss gradient is
/// 2 zeta'(zeta w - 1); update steps use the batch mean. Mini-batches sample
/// rows without replacement per epoch (one iteration = one epoch).
/// Errors: Diverged (loss non-finite or increasing for 10 straight epochs).
SolveResult solve_gd(const SimilarityMatrix& sim, const SolverConfig& cfg = {});

}  // namespace magkit
