#pragma once

#include <Eigen/Core>

#include "magkit/errors.hpp"

namespace magkit {

/// Magnitude of a growing point set, maintained through the Cholesky factor
/// of its similarity matrix. With L the factor of zeta_S and u = L^{-1} 1,
/// the magnitude is |u|^2, and appending a point with similarity column z
/// changes it by the bordered-block (Schur complement) identity
///
///   Mag(S + s) - Mag(S) = (1 - 1' zeta_S^{-1} z)^2 / (1 - z' zeta_S^{-1} z)
///
/// so evaluating or committing a candidate costs O(|S|^2) instead of a fresh
/// factorization.
class IncrementalMagnitude {
public:
  explicit IncrementalMagnitude(int capacity);

  int size() const { return k_; }
  double magnitude() const { return mag_; }

  /// Marginal gain of appending a point whose similarities to the current
  /// members (in insertion order) are z. A numerically dependent column
  /// (near-duplicate point) reports zero gain.
  double gain_if_added(const Eigen::VectorXd& z) const;

  /// Appends the point. Errors: NotPositiveDefinite if the bordered matrix
  /// loses positive definiteness (duplicate or degenerate geometry).
  void add(const Eigen::VectorXd& z);

private:
  Eigen::MatrixXd chol_;  // lower triangular, leading k x k block valid
  Eigen::VectorXd u_;     // L^{-1} * ones, leading k entries valid
  int k_ = 0;
  double mag_ = 0.0;
};

}  // namespace magkit
