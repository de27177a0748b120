#include "magkit/bordered.hpp"

#include <cmath>

namespace magkit {

namespace {
constexpr double kDependenceTol = 1e-12;
}

IncrementalMagnitude::IncrementalMagnitude(int capacity) {
  const int c = std::max(capacity, 1);
  chol_.setZero(c, c);
  u_.setZero(c);
}

double IncrementalMagnitude::gain_if_added(const Eigen::VectorXd& z) const {
  if (static_cast<int>(z.size()) != k_)
    throw_input("EmptyInput", "similarity column has wrong length");
  if (k_ == 0) return 1.0;  // a first point always contributes magnitude 1

  // y = L^{-1} z by forward substitution.
  Eigen::VectorXd y = chol_.topLeftCorner(k_, k_)
                          .triangularView<Eigen::Lower>()
                          .solve(z);
  const double denom = 1.0 - y.squaredNorm();
  if (denom <= kDependenceTol) return 0.0;
  const double num = 1.0 - u_.head(k_).dot(y);
  return num * num / denom;
}

void IncrementalMagnitude::add(const Eigen::VectorXd& z) {
  if (static_cast<int>(z.size()) != k_)
    throw_input("EmptyInput", "similarity column has wrong length");
  if (k_ >= chol_.rows()) {
    const int c = std::max(2 * k_, 4);
    chol_.conservativeResize(c, c);
    chol_.topRightCorner(k_, c - k_).setZero();
    chol_.bottomRows(c - k_).setZero();
    u_.conservativeResize(c);
  }
  if (k_ == 0) {
    chol_(0, 0) = 1.0;
    u_(0) = 1.0;
    k_ = 1;
    mag_ = 1.0;
    return;
  }
  Eigen::VectorXd y = chol_.topLeftCorner(k_, k_)
                          .triangularView<Eigen::Lower>()
                          .solve(z);
  const double d2 = 1.0 - y.squaredNorm();
  if (d2 <= kDependenceTol)
    throw_solver("NotPositiveDefinite",
                 "appending this point makes the similarity matrix numerically singular");
  const double d = std::sqrt(d2);
  chol_.row(k_).head(k_) = y.transpose();
  chol_(k_, k_) = d;
  const double unew = (1.0 - u_.head(k_).dot(y)) / d;
  u_(k_) = unew;
  mag_ += unew * unew;
  ++k_;
}

}  // namespace magkit
