#include "magkit/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "magkit/bordered.hpp"

namespace magkit {

namespace {

void sorted_insert(std::vector<int>& v, int id) {
  v.insert(std::upper_bound(v.begin(), v.end(), id), id);
}

bool erase_value(std::vector<int>& v, int id) {
  auto it = std::lower_bound(v.begin(), v.end(), id);
  if (it == v.end() || *it != id) return false;
  v.erase(it);
  return true;
}

}  // namespace

CoverHierarchy CoverHierarchy::build(const MetricSpace& space) {
  CoverHierarchy h;
  h.dist_ = space.distances();
  if (space.has_points()) h.points_ = space.points();
  h.metric_ = space.metric();
  const int n = space.size();
  h.active_.assign(static_cast<size_t>(n), true);
  h.levels_.emplace_back();
  for (int i = 0; i < n; ++i) h.levels_[0].push_back(i);
  h.extend_top();
  h.trim_top();
  return h;
}

int CoverHierarchy::point_count() const {
  return static_cast<int>(levels_.empty() ? 0 : levels_[0].size());
}

int CoverHierarchy::parent(int level, int id) const {
  if (level < 1 || level > height()) throw_input("InvalidConfig", "level out of range");
  const auto& map = parents_[static_cast<size_t>(level - 1)];
  auto it = map.find(id);
  if (it == map.end()) throw_input("UnknownPoint", "point is not a member of the child level");
  return it->second;
}

bool CoverHierarchy::is_active(int id) const {
  return id >= 0 && id < static_cast<int>(active_.size()) && active_[static_cast<size_t>(id)];
}

double CoverHierarchy::diameter() const {
  const auto& s0 = levels_[0];
  double d = 0.0;
  for (size_t a = 0; a < s0.size(); ++a)
    for (size_t b = a + 1; b < s0.size(); ++b) d = std::max(d, dist_(s0[a], s0[b]));
  return d;
}

void CoverHierarchy::rebuild_parents(int level) {
  auto& map = parents_[static_cast<size_t>(level - 1)];
  map.clear();
  const double r = level_radius(level);
  for (int x : levels_[static_cast<size_t>(level - 1)]) {
    for (int c : levels_[static_cast<size_t>(level)]) {
      if (dist_(x, c) <= r) {
        map.emplace(x, c);
        break;
      }
    }
  }
}

void CoverHierarchy::extend_top() {
  while (levels_.back().size() > 1) {
    const int level = static_cast<int>(levels_.size());
    const double r = level_radius(level);
    std::vector<int> centers;
    for (int x : levels_.back()) {
      bool covered = false;
      for (int c : centers)
        if (dist_(x, c) <= r) {
          covered = true;
          break;
        }
      if (!covered) centers.push_back(x);
    }
    levels_.push_back(std::move(centers));
    parents_.emplace_back();
    rebuild_parents(level);
  }
}

void CoverHierarchy::trim_top() {
  while (levels_.size() >= 2 && levels_.back().size() <= 1 &&
         levels_[levels_.size() - 2].size() <= 1) {
    levels_.pop_back();
    parents_.pop_back();
  }
}

int CoverHierarchy::finish_insert(int id) {
  if (levels_.empty() || levels_[0].empty()) {
    levels_.assign(1, {id});
    parents_.clear();
    return id;
  }
  // Largest L with q independent of every center at all levels 1..L. The
  // first level that fails holds a center within its radius, which also
  // covers q there.
  int top = height();
  int deepest = 0;
  for (int j = 1; j <= top; ++j) {
    const double r = level_radius(j);
    bool independent = true;
    for (int c : levels_[static_cast<size_t>(j)])
      if (dist_(id, c) <= r) {
        independent = false;
        break;
      }
    if (!independent) break;
    deepest = j;
  }
  sorted_insert(levels_[0], id);
  for (int j = 1; j <= deepest; ++j) sorted_insert(levels_[static_cast<size_t>(j)], id);
  for (int j = 1; j <= std::min(deepest + 1, top); ++j) rebuild_parents(j);
  if (deepest == top) extend_top();
  trim_top();
  return id;
}

int CoverHierarchy::insert_point(const Eigen::VectorXd& coords) {
  if (!points_) throw_input("InvalidConfig", "hierarchy was built from an explicit distance matrix; "
                                             "insert with distances instead");
  if (coords.size() != points_->cols())
    throw_input("InvalidConfig", "coordinate dimension mismatch");
  if (!coords.allFinite()) throw_input("NonFiniteCoordinate", "coordinates must be finite");

  const int old_n = static_cast<int>(points_->rows());
  for (int i = 0; i < old_n; ++i) {
    if (!active_[static_cast<size_t>(i)]) continue;
    const auto diff = points_->row(i).transpose() - coords;
    const double d = metric_ == Metric::euclidean ? diff.norm() : diff.cwiseAbs().sum();
    if (d == 0.0) throw_input("DuplicatePoint", "an identical active point already exists");
  }

  points_->conservativeResize(old_n + 1, Eigen::NoChange);
  points_->row(old_n) = coords.transpose();
  dist_.conservativeResize(old_n + 1, old_n + 1);
  for (int i = 0; i < old_n; ++i) {
    const auto diff = points_->row(i) - points_->row(old_n);
    const double d = metric_ == Metric::euclidean ? diff.norm() : diff.cwiseAbs().sum();
    dist_(i, old_n) = d;
    dist_(old_n, i) = d;
  }
  dist_(old_n, old_n) = 0.0;
  active_.push_back(true);
  return finish_insert(old_n);
}

int CoverHierarchy::insert_point_dists(const Eigen::VectorXd& dists_to_active) {
  const std::vector<int> s0 = levels_.empty() ? std::vector<int>{} : levels_[0];
  if (dists_to_active.size() != static_cast<Eigen::Index>(s0.size()))
    throw_input("InvalidConfig", "expected one distance per active point");
  if (!dists_to_active.allFinite())
    throw_input("NonFiniteCoordinate", "distances must be finite");
  for (Eigen::Index i = 0; i < dists_to_active.size(); ++i) {
    if (dists_to_active[i] < 0.0) throw_input("NegativeDistance", "distances must be non-negative");
    if (dists_to_active[i] == 0.0) throw_input("DuplicatePoint", "zero distance to an active point");
  }
  if (points_) throw_input("InvalidConfig", "hierarchy holds coordinates; insert by coordinates");

  const int old_n = static_cast<int>(active_.size());
  dist_.conservativeResize(old_n + 1, old_n + 1);
  dist_.row(old_n).setConstant(std::numeric_limits<double>::quiet_NaN());
  dist_.col(old_n).setConstant(std::numeric_limits<double>::quiet_NaN());
  for (size_t a = 0; a < s0.size(); ++a) {
    dist_(s0[a], old_n) = dists_to_active[static_cast<Eigen::Index>(a)];
    dist_(old_n, s0[a]) = dists_to_active[static_cast<Eigen::Index>(a)];
  }
  dist_(old_n, old_n) = 0.0;
  active_.push_back(true);
  return finish_insert(old_n);
}

void CoverHierarchy::delete_point(int id) {
  if (!is_active(id)) throw_input("UnknownPoint", "no active point with this id");
  active_[static_cast<size_t>(id)] = false;
  erase_value(levels_[0], id);
  if (levels_[0].empty()) {
    levels_.assign(1, {});
    parents_.clear();
    return;
  }
  for (int i = 1; i <= height(); ++i) {
    auto& si = levels_[static_cast<size_t>(i)];
    erase_value(si, id);
    const double r = level_radius(i);
    // Promote uncovered members of S_{i-1}, ascending id.
    for (int x : levels_[static_cast<size_t>(i - 1)]) {
      bool covered = false;
      for (int c : si)
        if (dist_(x, c) <= r) {
          covered = true;
          break;
        }
      if (!covered) sorted_insert(si, x);
    }
    rebuild_parents(i);
  }
  extend_top();
  trim_top();
}

SelectionCurve CoverHierarchy::approx_magnitude_topdown(double t, int budget) const {
  if (!(t > 0.0)) throw_input("NonPositiveScale", "scale t must be positive");
  const int n = point_count();
  if (budget < 1 || budget > n) throw_input("InvalidConfig", "budget must be in [1, point_count]");

  std::vector<int> order;
  std::vector<bool> seen(active_.size(), false);
  for (int level = height(); level >= 0 && static_cast<int>(order.size()) < budget; --level) {
    for (int id : levels_[static_cast<size_t>(level)]) {
      if (seen[static_cast<size_t>(id)]) continue;
      seen[static_cast<size_t>(id)] = true;
      order.push_back(id);
      if (static_cast<int>(order.size()) == budget) break;
    }
  }

  SelectionCurve curve;
  IncrementalMagnitude inc(budget);
  std::vector<int> members;
  for (int id : order) {
    Eigen::VectorXd z(static_cast<Eigen::Index>(members.size()));
    for (size_t a = 0; a < members.size(); ++a)
      z[static_cast<Eigen::Index>(a)] = std::exp(-t * dist_(members[a], id));
    inc.add(z);
    members.push_back(id);
    curve.steps.push_back({static_cast<int>(members.size()), id, inc.magnitude()});
  }
  curve.stopped_at = budget;
  return curve;
}

std::optional<std::string> CoverHierarchy::check_invariants() const {
  if (levels_.empty()) return "no levels";
  // S_0 is exactly the active id set, ascending.
  {
    std::vector<int> act;
    for (int i = 0; i < static_cast<int>(active_.size()); ++i)
      if (active_[static_cast<size_t>(i)]) act.push_back(i);
    if (act != levels_[0]) return "level 0 does not match the active point set";
  }
  if (parents_.size() + 1 != levels_.size()) return "parent maps out of sync with levels";
  if (point_count() >= 1 && levels_.back().size() != 1) return "top level is not a singleton";

  for (int i = 1; i <= height(); ++i) {
    const auto& child = levels_[static_cast<size_t>(i - 1)];
    const auto& si = levels_[static_cast<size_t>(i)];
    const double r = level_radius(i);
    // Nesting.
    for (int c : si)
      if (!std::binary_search(child.begin(), child.end(), c))
        return "level " + std::to_string(i) + " is not a subset of its child level";
    // Covering, and parent map validity.
    for (int x : child) {
      int cover = -1;
      for (int c : si)
        if (dist_(x, c) <= r) {
          cover = c;
          break;
        }
      if (cover < 0)
        return "point " + std::to_string(x) + " uncovered at level " + std::to_string(i);
      auto it = parents_[static_cast<size_t>(i - 1)].find(x);
      if (it == parents_[static_cast<size_t>(i - 1)].end())
        return "missing parent for point " + std::to_string(x) + " at level " + std::to_string(i);
      if (dist_(x, it->second) > r ||
          !std::binary_search(si.begin(), si.end(), it->second))
        return "invalid parent for point " + std::to_string(x) + " at level " + std::to_string(i);
    }
    // Independence.
    for (size_t a = 0; a < si.size(); ++a)
      for (size_t b = a + 1; b < si.size(); ++b)
        if (dist_(si[a], si[b]) <= r)
          return "centers " + std::to_string(si[a]) + "," + std::to_string(si[b]) +
                 " too close at level " + std::to_string(i);
    // Minimality: every center is the sole cover of some child point.
    for (int c : si) {
      bool needed = false;
      for (int x : child) {
        if (dist_(x, c) > r) continue;
        bool other = false;
        for (int c2 : si)
          if (c2 != c && dist_(x, c2) <= r) {
            other = true;
            break;
          }
        if (!other) {
          needed = true;
          break;
        }
      }
      if (!needed)
        return "center " + std::to_string(c) + " is redundant at level " + std::to_string(i);
    }
  }
  // Height bound (radius floor at 2^(i-1) makes one extra level unavoidable
  // for diameters below 1; updates may add one more).
  if (point_count() >= 2) {
    const double d = diameter();
    const int bound = static_cast<int>(std::max(std::ceil(std::log2(d)), 0.0)) + 2;
    if (height() > bound)
      return "height " + std::to_string(height()) + " exceeds bound " + std::to_string(bound);
  }
  return std::nullopt;
}

nlohmann::json CoverHierarchy::to_json() const {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["point_count"] = point_count();
  j["height"] = height();
  j["levels"] = levels_;
  std::vector<double> radii;
  for (int i = 0; i <= height(); ++i) radii.push_back(level_radius(i));
  j["radii"] = radii;
  nlohmann::json parents = nlohmann::json::array();
  for (const auto& level_map : parents_) {
    nlohmann::json m = nlohmann::json::object();
    for (const auto& [child, center] : level_map) m[std::to_string(child)] = center;
    parents.push_back(std::move(m));
  }
  j["parents"] = std::move(parents);
  return j;
}

}  // namespace magkit
