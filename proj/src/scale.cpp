#include "magkit/scale.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <ostream>

namespace magkit {

const char* sweep_method_name(SweepMethod m) {
  switch (m) {
    case SweepMethod::exact: return "exact";
    case SweepMethod::iter_norm: return "iter_norm";
    case SweepMethod::gd: return "gd";
    case SweepMethod::hierarchy: return "hierarchy";
  }
  return "unknown";
}

std::vector<double> ScaleSweep::slopes() const {
  std::vector<double> s;
  for (size_t i = 0; i + 1 < scales.size(); ++i) {
    if (ok[i] && ok[i + 1]) {
      s.push_back((std::log(values[i + 1]) - std::log(values[i])) /
                  (std::log(scales[i + 1]) - std::log(scales[i])));
    } else {
      s.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
  return s;
}

void ScaleSweep::write_csv(std::ostream& out) const {
  out << "t,magnitude,method,error_flag\n";
  out.precision(17);
  for (size_t i = 0; i < scales.size(); ++i) {
    out << scales[i] << ',';
    if (ok[i])
      out << values[i];
    out << ',' << sweep_method_name(method) << ',' << error_codes[i] << '\n';
  }
}

ScaleSweep magnitude_function(const MetricSpace& space, const std::vector<double>& scales,
                              SweepMethod method, const SweepConfig& cfg) {
  for (size_t i = 0; i < scales.size(); ++i) {
    if (!(scales[i] > 0.0)) throw_input("NonPositiveScale", "all grid scales must be positive");
    if (i > 0 && scales[i] <= scales[i - 1])
      throw_input("InvalidConfig", "scale grid must be strictly ascending");
  }

  ScaleSweep sweep;
  sweep.method = method;
  sweep.scales = scales;
  sweep.values.assign(scales.size(), std::numeric_limits<double>::quiet_NaN());
  sweep.ok.assign(scales.size(), false);
  sweep.error_codes.assign(scales.size(), "");

  // One hierarchy serves every scale; only the prefix is re-evaluated.
  std::unique_ptr<CoverHierarchy> hier;
  int budget = 0;
  if (method == SweepMethod::hierarchy) {
    hier = std::make_unique<CoverHierarchy>(CoverHierarchy::build(space));
    budget = cfg.hierarchy_budget < 0 ? space.size() : cfg.hierarchy_budget;
  }

  for (size_t i = 0; i < scales.size(); ++i) {
    try {
      switch (method) {
        case SweepMethod::exact:
          sweep.values[i] = magnitude_exact(similarity(space, scales[i])).estimate.value;
          break;
        case SweepMethod::iter_norm:
          sweep.values[i] = solve_iter_norm(similarity(space, scales[i]), cfg.solver).estimate.value;
          break;
        case SweepMethod::gd:
          sweep.values[i] = solve_gd(similarity(space, scales[i]), cfg.solver).estimate.value;
          break;
        case SweepMethod::hierarchy:
          sweep.values[i] = hier->approx_magnitude_topdown(scales[i], budget).final_magnitude();
          break;
      }
      sweep.ok[i] = true;
    } catch (const Error& e) {
      sweep.error_codes[i] = e.code();
    }
  }
  return sweep;
}

std::vector<double> log_spaced(double lo, double hi, int steps) {
  if (steps < 1 || !(lo > 0.0) || hi < lo)
    throw_input("InvalidConfig", "log grid needs 0 < lo <= hi and steps >= 1");
  std::vector<double> g;
  if (steps == 1) {
    g.push_back(lo);
    return g;
  }
  const double ratio = std::log(hi / lo) / (steps - 1);
  for (int k = 0; k < steps; ++k) g.push_back(lo * std::exp(ratio * k));
  g.back() = hi;
  return g;
}

std::vector<double> default_scale_grid(const MetricSpace& space, int steps) {
  double lo = 0.01, hi = 100.0;
  if (space.size() >= 2) {
    lo = 0.01 / space.diameter();
    hi = 100.0 / space.min_gap();
  }
  return log_spaced(lo, std::max(hi, lo), steps);
}

double magnitude_dimension(const ScaleSweep& sweep, int lo, int hi) {
  const int n = static_cast<int>(sweep.scales.size());
  if (lo < 0 || hi >= n || lo > hi) throw_input("InsufficientWindow", "window out of range");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (int i = lo; i <= hi; ++i) {
    if (!sweep.ok[static_cast<size_t>(i)]) continue;
    const double x = std::log(sweep.scales[static_cast<size_t>(i)]);
    const double y = std::log(sweep.values[static_cast<size_t>(i)]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) throw_input("InsufficientWindow", "need at least 2 valid scales in the window");
  const double denom = m * sxx - sx * sx;
  if (denom == 0.0) throw_input("InsufficientWindow", "window scales are not distinct");
  return (m * sxy - sx * sy) / denom;
}

}  // namespace magkit
