#include "magkit/metric_space.hpp"

#include <atomic>
#include <cmath>
#include <numeric>

namespace magkit {

namespace {

std::atomic<std::uint64_t> g_next_uid{1};

constexpr double kSymmetryTol = 1e-9;

// Union-find over the groups of points at mutual distance exactly zero.
struct Groups {
  std::vector<int> parent;
  explicit Groups(int n) : parent(static_cast<size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[static_cast<size_t>(x)] != x) {
      parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
      x = parent[static_cast<size_t>(x)];
    }
    return x;
  }
  void merge(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<size_t>(std::max(a, b))] = std::min(a, b);
  }
};

// Applies the duplicate policy to a validated distance matrix. Returns the
// kept representative for each original index (lowest id in its zero-group).
void resolve_duplicates(Eigen::MatrixXd& dist, std::optional<Eigen::MatrixXd>& points,
                        std::vector<int>& multiplicity, DuplicatePolicy policy) {
  const int n = static_cast<int>(dist.rows());
  bool any = false;
  for (int i = 0; i < n && !any; ++i)
    for (int j = i + 1; j < n; ++j)
      if (dist(i, j) == 0.0) {
        if (policy == DuplicatePolicy::reject)
          throw_input("DuplicatePoints", "points " + std::to_string(i) + " and " +
                                              std::to_string(j) + " are at distance zero");
        any = true;
        break;
      }
  multiplicity.assign(static_cast<size_t>(n), 1);
  if (!any) return;

  Groups g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (dist(i, j) == 0.0) g.merge(i, j);

  std::vector<int> keep;
  std::vector<int> count(static_cast<size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    int r = g.find(i);
    if (count[static_cast<size_t>(r)] == 0) keep.push_back(r);
    ++count[static_cast<size_t>(r)];
  }
  const int m = static_cast<int>(keep.size());
  Eigen::MatrixXd nd(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) nd(a, b) = dist(keep[static_cast<size_t>(a)], keep[static_cast<size_t>(b)]);
  dist.swap(nd);
  if (points) {
    Eigen::MatrixXd np(m, points->cols());
    for (int a = 0; a < m; ++a) np.row(a) = points->row(keep[static_cast<size_t>(a)]);
    *points = std::move(np);
  }
  multiplicity.resize(static_cast<size_t>(m));
  for (int a = 0; a < m; ++a) multiplicity[static_cast<size_t>(a)] = count[static_cast<size_t>(keep[static_cast<size_t>(a)])];
}

}  // namespace

const char* metric_name(Metric m) {
  return m == Metric::euclidean ? "euclidean" : "manhattan";
}

Eigen::MatrixXd pairwise_distances(const Eigen::MatrixXd& points, Metric metric) {
  const int n = static_cast<int>(points.rows());
  Eigen::MatrixXd d(n, n);
  for (int i = 0; i < n; ++i) {
    d(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) {
      const auto diff = points.row(i) - points.row(j);
      const double v = metric == Metric::euclidean ? diff.norm() : diff.cwiseAbs().sum();
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return d;
}

double MetricSpace::diameter() const {
  return size() < 2 ? 0.0 : dist_.maxCoeff();
}

double MetricSpace::min_gap() const {
  const int n = size();
  if (n < 2) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) best = std::min(best, dist_(i, j));
  return best;
}

MetricSpace MetricSpace::scaled(double t) const {
  if (!(t > 0.0)) throw_input("NonPositiveScale", "scale factor must be positive");
  MetricSpace s;
  s.dist_ = dist_ * t;
  if (points_) s.points_ = *points_ * t;
  s.metric_ = metric_;
  s.multiplicity_ = multiplicity_;
  s.uid_ = g_next_uid.fetch_add(1);
  return s;
}

MetricSpace MetricSpace::subset(const std::vector<int>& ids) const {
  const int m = static_cast<int>(ids.size());
  if (m == 0) throw_input("EmptyInput", "subset of zero points");
  MetricSpace s;
  s.dist_.resize(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) s.dist_(a, b) = dist_(ids[static_cast<size_t>(a)], ids[static_cast<size_t>(b)]);
  if (points_) {
    Eigen::MatrixXd p(m, points_->cols());
    for (int a = 0; a < m; ++a) p.row(a) = points_->row(ids[static_cast<size_t>(a)]);
    s.points_ = std::move(p);
  }
  s.metric_ = metric_;
  s.multiplicity_.assign(static_cast<size_t>(m), 1);
  s.uid_ = g_next_uid.fetch_add(1);
  return s;
}

MetricSpace build_space(const Eigen::MatrixXd& points, Metric metric, DuplicatePolicy policy) {
  if (points.rows() == 0 || points.cols() == 0)
    throw_input("EmptyInput", "point matrix must have at least one row and column");
  if (!points.allFinite())
    throw_input("NonFiniteCoordinate", "point coordinates must all be finite");

  MetricSpace s;
  s.points_ = points;
  s.metric_ = metric;
  s.dist_ = pairwise_distances(points, metric);
  resolve_duplicates(s.dist_, s.points_, s.multiplicity_, policy);
  s.uid_ = g_next_uid.fetch_add(1);
  return s;
}

MetricSpace build_space_from_dist(const Eigen::MatrixXd& dist, DuplicatePolicy policy) {
  if (dist.rows() == 0) throw_input("EmptyInput", "distance matrix is empty");
  if (dist.rows() != dist.cols())
    throw_input("NotSquare", "distance matrix must be square, got " + std::to_string(dist.rows()) +
                                 "x" + std::to_string(dist.cols()));
  if (!dist.allFinite()) throw_input("NonFiniteCoordinate", "distance entries must be finite");

  const double asym = (dist - dist.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTol)
    throw_input("AsymmetryExceedsTolerance",
                "max asymmetry " + std::to_string(asym) + " exceeds 1e-9");

  Eigen::MatrixXd d = 0.5 * (dist + dist.transpose());
  if (d.minCoeff() < 0.0) throw_input("NegativeDistance", "distances must be non-negative");
  for (Eigen::Index i = 0; i < d.rows(); ++i)
    if (d(i, i) != 0.0) throw_input("NonzeroDiagonal", "diagonal entries must be zero");

  MetricSpace s;
  s.dist_ = std::move(d);
  s.metric_ = Metric::euclidean;
  resolve_duplicates(s.dist_, s.points_, s.multiplicity_, policy);
  s.uid_ = g_next_uid.fetch_add(1);
  return s;
}

}  // namespace magkit
