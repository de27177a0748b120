#pragma once

#include <Eigen/Core>

#include "magkit/similarity.hpp"

namespace magkit {

enum class Method {
  exact,
  closed_form_1d,
  closed_form_homogeneous,
  gd,
  iter_norm,
  greedy_subset,
  hierarchy_subset,
};

const char* method_name(Method m);

/// A candidate magnitude weighting w together with its residual zeta*w - 1.
/// An exact weighting has residual zero up to solver tolerance.
struct Weighting {
  Eigen::VectorXd w;
  Eigen::VectorXd residual;
  double scale = 1.0;

  double max_residual() const {
    return residual.size() == 0 ? 0.0 : residual.cwiseAbs().maxCoeff();
  }
};

struct MagnitudeEstimate {
  double value = 0.0;
  double pmag = 0.0;  // sum of positive weights
  Method method = Method::exact;
  long iterations = 0;
  double residual_norm = 0.0;
  double wall_time = 0.0;  // seconds
  bool converged = true;
  bool jittered = false;    // diagonal jitter was needed to factorize
  bool degenerate = false;  // input collapsed to a single distinct value
};

struct ExactResult {
  MagnitudeEstimate estimate;
  Weighting weighting;
};

/// Ground truth: solves zeta * w = 1 by Cholesky factorization (the inverse
/// is never formed) and returns sum(w). Retries once with diagonal jitter
/// 1e-10 * trace/n before giving up.
/// Errors: NotPositiveDefinite.
ExactResult magnitude_exact(const SimilarityMatrix& sim);

/// Two points at distance d: 2 / (1 + exp(-d)).  Errors: NonPositiveDistance.
double magnitude_two_point(double d);

/// Magnitude of the scaled cross-polytope vertex set {±t e_1, ..., ±t e_D}:
/// 2D / (1 + e^{-2t} + 2(D-1) e^{-t sqrt(2)}).
double magnitude_homogeneous_cross(int dim, double t);

/// Magnitude of a finite subset of the real line, xs strictly increasing:
/// 1 + sum_i tanh((x_{i+1} - x_i)/2).
/// Errors: UnsortedInput, DuplicateValues, EmptyInput.
double magnitude_1d(const Eigen::VectorXd& xs);

/// Sum of the positive entries of a weighting.
double pmag(const Weighting& w);

}  // namespace magkit
