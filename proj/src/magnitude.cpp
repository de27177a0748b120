#include "magkit/magnitude.hpp"

#include <Eigen/Cholesky>
#include <chrono>
#include <cmath>

namespace magkit {

const char* method_name(Method m) {
  switch (m) {
    case Method::exact: return "exact";
    case Method::closed_form_1d: return "closed_form_1d";
    case Method::closed_form_homogeneous: return "closed_form_homogeneous";
    case Method::gd: return "gd";
    case Method::iter_norm: return "iter_norm";
    case Method::greedy_subset: return "greedy_subset";
    case Method::hierarchy_subset: return "hierarchy_subset";
  }
  return "unknown";
}

ExactResult magnitude_exact(const SimilarityMatrix& sim) {
  const int n = sim.n();
  if (n == 0) throw_input("EmptyInput", "similarity matrix is empty");
  const auto t0 = std::chrono::steady_clock::now();

  Eigen::LLT<Eigen::MatrixXd> llt(sim.zeta);
  bool jittered = false;
  if (llt.info() != Eigen::Success) {
    const double jitter = 1e-10 * sim.zeta.trace() / n;
    Eigen::MatrixXd z = sim.zeta;
    z.diagonal().array() += jitter;
    llt.compute(z);
    jittered = true;
    if (llt.info() != Eigen::Success)
      throw_solver("NotPositiveDefinite",
                   "similarity matrix is not positive definite; the space has "
                   "degenerate geometry or a non-positive-definite pseudometric");
  }

  Weighting wt;
  wt.scale = sim.scale;
  wt.w = llt.solve(Eigen::VectorXd::Ones(n));
  wt.residual = sim.zeta * wt.w - Eigen::VectorXd::Ones(n);

  const auto t1 = std::chrono::steady_clock::now();

  MagnitudeEstimate est;
  est.value = wt.w.sum();
  est.pmag = pmag(wt);
  est.method = Method::exact;
  est.iterations = 0;
  est.residual_norm = wt.max_residual();
  est.wall_time = std::chrono::duration<double>(t1 - t0).count();
  est.jittered = jittered;
  return {est, std::move(wt)};
}

double magnitude_two_point(double d) {
  if (!(d > 0.0)) throw_input("NonPositiveDistance", "two-point distance must be positive");
  return 2.0 / (1.0 + std::exp(-d));
}

double magnitude_homogeneous_cross(int dim, double t) {
  if (dim < 1) throw_input("EmptyInput", "cross-polytope dimension must be >= 1");
  if (!(t > 0.0)) throw_input("NonPositiveScale", "cross-polytope scale must be positive");
  const double denom =
      1.0 + std::exp(-2.0 * t) + 2.0 * (dim - 1) * std::exp(-t * std::sqrt(2.0));
  return 2.0 * dim / denom;
}

double magnitude_1d(const Eigen::VectorXd& xs) {
  const Eigen::Index n = xs.size();
  if (n == 0) throw_input("EmptyInput", "1d magnitude needs at least one value");
  double mag = 1.0;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double gap = xs[i + 1] - xs[i];
    if (gap < 0.0) throw_input("UnsortedInput", "1d values must be strictly increasing");
    if (gap == 0.0) throw_input("DuplicateValues", "1d values must be distinct");
    const double h = 0.5 * gap;
    // tanh saturates to 1 in double precision by h = 40; clamping also covers
    // infinite gaps, where the convention tanh(inf) = 1 applies.
    mag += h > 40.0 ? 1.0 : std::tanh(h);
  }
  return mag;
}

double pmag(const Weighting& w) {
  return w.w.array().max(0.0).sum();
}

}  // namespace magkit
