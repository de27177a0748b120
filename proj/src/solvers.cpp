#include "magkit/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

namespace magkit {

namespace {

constexpr double kGdMomentum = 0.9;

void validate(const SolverConfig& cfg, bool gd) {
  if (cfg.max_iters < 1) throw_input("InvalidConfig", "max_iters must be >= 1");
  if (!(cfg.tol > 0.0)) throw_input("InvalidConfig", "tol must be positive");
  if (gd && !(cfg.learning_rate > 0.0))
    throw_input("InvalidConfig", "learning_rate must be positive");
  if (gd && cfg.batch_size < 0) throw_input("InvalidConfig", "batch_size must be >= 0");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

void ConvergenceTrace::write_csv(std::ostream& out) const {
  out << "iteration,estimate,residual,loss,elapsed_seconds\n";
  out.precision(17);
  for (const auto& r : rows)
    out << r.iteration << ',' << r.estimate << ',' << r.residual << ',' << r.loss << ','
        << r.elapsed_seconds << '\n';
}

SolveResult solve_iter_norm(const SimilarityMatrix& sim, const SolverConfig& cfg) {
  validate(cfg, false);
  const int n = sim.n();
  if (n == 0) throw_input("EmptyInput", "similarity matrix is empty");
  const auto t0 = std::chrono::steady_clock::now();

  SolveResult res;
  Eigen::VectorXd w = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd g = sim.zeta * w;
  double residual = (g.array() - 1.0).abs().maxCoeff();
  long iters = 0;

  while (residual > cfg.tol && iters < cfg.max_iters) {
    if (!g.allFinite() || g.minCoeff() <= 0.0)
      throw_solver("NonFiniteUpdate", "row sum G(i) is non-positive or non-finite");
    w.array() /= g.array();
    ++iters;
    g = sim.zeta * w;
    residual = (g.array() - 1.0).abs().maxCoeff();
    if (cfg.record_trace)
      res.trace.rows.push_back({iters, w.sum(), residual, (g.array() - 1.0).square().sum(),
                                seconds_since(t0)});
  }

  res.weighting.w = std::move(w);
  res.weighting.residual = g.array() - 1.0;
  res.weighting.scale = sim.scale;
  res.estimate.value = res.weighting.w.sum();
  res.estimate.pmag = pmag(res.weighting);
  res.estimate.method = Method::iter_norm;
  res.estimate.iterations = iters;
  res.estimate.residual_norm = residual;
  res.estimate.converged = residual <= cfg.tol;
  res.estimate.wall_time = seconds_since(t0);
  return res;
}

SolveResult solve_gd(const SimilarityMatrix& sim, const SolverConfig& cfg) {
  validate(cfg, true);
  const int n = sim.n();
  if (n == 0) throw_input("EmptyInput", "similarity matrix is empty");
  const long batch = cfg.batch_size == 0 ? n : std::min<long>(cfg.batch_size, n);
  const bool full = batch >= n;
  const auto t0 = std::chrono::steady_clock::now();

  SolveResult res;
  Eigen::VectorXd w = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd velocity = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd r = sim.zeta * w - Eigen::VectorXd::Ones(n);
  double residual = r.cwiseAbs().maxCoeff();
  double prev_loss = r.squaredNorm();
  int rising = 0;
  long iters = 0;

  std::mt19937_64 rng(cfg.rng_seed);
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);

  while (residual > cfg.tol && iters < cfg.max_iters) {
    if (full) {
      // r already holds zeta*w - 1 for the current w.
      velocity = kGdMomentum * velocity + (2.0 / n) * (sim.zeta * r);
      w -= cfg.learning_rate * velocity;
    } else {
      std::shuffle(order.begin(), order.end(), rng);
      for (long s = 0; s < n; s += batch) {
        const long e = std::min<long>(n, s + batch);
        const long m = e - s;
        Eigen::VectorXd grad = Eigen::VectorXd::Zero(n);
        for (long k = s; k < e; ++k) {
          const int i = order[static_cast<size_t>(k)];
          const double ri = sim.zeta.row(i).dot(w) - 1.0;
          grad += (2.0 / m) * ri * sim.zeta.row(i).transpose();
        }
        velocity = kGdMomentum * velocity + grad;
        w -= cfg.learning_rate * velocity;
      }
    }
    ++iters;
    r = sim.zeta * w - Eigen::VectorXd::Ones(n);
    residual = r.cwiseAbs().maxCoeff();
    const double loss = r.squaredNorm();
    if (!std::isfinite(loss))
      throw_solver("Diverged", "loss became non-finite; reduce the learning rate");
    rising = loss > prev_loss ? rising + 1 : 0;
    if (rising >= 10)
      throw_solver("Diverged", "loss increased for 10 consecutive iterations; "
                               "reduce the learning rate");
    prev_loss = loss;
    if (cfg.record_trace)
      res.trace.rows.push_back({iters, w.sum(), residual, loss, seconds_since(t0)});
  }

  res.weighting.w = std::move(w);
  res.weighting.residual = std::move(r);
  res.weighting.scale = sim.scale;
  res.estimate.value = res.weighting.w.sum();
  res.estimate.pmag = pmag(res.weighting);
  res.estimate.method = Method::gd;
  res.estimate.iterations = iters;
  res.estimate.residual_norm = residual;
  res.estimate.converged = residual <= cfg.tol;
  res.estimate.wall_time = seconds_since(t0);
  return res;
}

}  // namespace magkit
