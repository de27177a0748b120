// magkit: magnitude toolkit command line.
//
// Exit codes: 0 success, 1 input error, 2 solver error, 3 verification
// failure. Errors are mirrored to stderr as JSON {code, message}.

#include <Eigen/Core>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "magkit/clustering.hpp"
#include "magkit/csv.hpp"
#include "magkit/hierarchy.hpp"
#include "magkit/magnitude.hpp"
#include "magkit/metric_space.hpp"
#include "magkit/oracles.hpp"
#include "magkit/record.hpp"
#include "magkit/scale.hpp"
#include "magkit/similarity.hpp"
#include "magkit/solvers.hpp"
#include "magkit/subset.hpp"

using nlohmann::json;

namespace {

struct InputFlags {
  std::string path;
  bool dist = false;
  std::string metric = "euclidean";
  bool dedup = false;
};

void add_input_flags(CLI::App* cmd, InputFlags& in) {
  cmd->add_option("input", in.path, "input CSV file")->required();
  cmd->add_flag("--dist", in.dist, "input is an n x n distance matrix");
  cmd->add_option("--metric", in.metric, "point metric: euclidean|manhattan")
      ->check(CLI::IsMember({"euclidean", "manhattan"}));
  cmd->add_flag("--dedup", in.dedup, "merge exact duplicate points instead of rejecting");
}

magkit::MetricSpace load_space(const InputFlags& in) {
  const auto policy =
      in.dedup ? magkit::DuplicatePolicy::deduplicate : magkit::DuplicatePolicy::reject;
  if (in.dist) return magkit::build_space_from_dist(magkit::read_dist_csv(in.path), policy);
  const auto metric =
      in.metric == "manhattan" ? magkit::Metric::manhattan : magkit::Metric::euclidean;
  return magkit::build_space(magkit::read_points_csv(in.path), metric, policy);
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path);
  if (!out) magkit::throw_input("FileNotFound", "cannot write " + path);
  out << contents;
}

template <typename Writable>
void write_csv_file(const std::string& path, const Writable& w) {
  std::ofstream out(path);
  if (!out) magkit::throw_input("FileNotFound", "cannot write " + path);
  w.write_csv(out);
}

long parse_long(const std::string& tok) {
  try {
    size_t used = 0;
    const long v = std::stol(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    magkit::throw_input("InvalidConfig", "expected an integer, got '" + tok + "'");
  }
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(static_cast<int>(parse_long(tok)));
  }
  if (out.empty()) magkit::throw_input("InvalidConfig", "expected a comma-separated list");
  return out;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = seed ^ (a * 0x9e3779b97f4a7c15ull) ^ (b * 0xbf58476d1ce4e5b9ull);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

Eigen::MatrixXd normal_cloud(int n, int dims, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXd pts(n, dims);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < dims; ++j) pts(i, j) = g(rng);
  return pts;
}

// ---------------------------------------------------------------------------
// compute

struct ComputeArgs {
  InputFlags in;
  std::string method = "exact";
  double scale = 1.0;
  double tol = 1e-6;
  long max_iters = 1000;
  double lr = 0.01;
  std::string batch = "full";
  std::uint64_t seed = 0;
  std::string weights_path;
  std::string trace_path;
};

int run_compute(const ComputeArgs& a) {
  const auto space = load_space(a.in);
  json config{{"method", a.method}, {"scale", a.scale}, {"seed", a.seed}};

  magkit::MagnitudeEstimate est;
  std::optional<magkit::Weighting> weighting;
  std::optional<magkit::ConvergenceTrace> trace;

  if (a.method == "closed-1d") {
    if (a.in.dist || !space.has_points() || space.points().cols() != 1)
      magkit::throw_input("InvalidConfig", "closed-1d needs a one-column point cloud");
    Eigen::VectorXd xs = space.points().col(0) * a.scale;
    std::sort(xs.data(), xs.data() + xs.size());
    const auto t0 = std::chrono::steady_clock::now();
    est.value = magkit::magnitude_1d(xs);
    est.pmag = est.value;
    est.method = magkit::Method::closed_form_1d;
    est.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  } else {
    const auto sim = magkit::similarity(space, a.scale);
    magkit::SolverConfig cfg;
    cfg.tol = a.tol;
    cfg.max_iters = a.max_iters;
    cfg.learning_rate = a.lr;
    cfg.batch_size = a.batch == "full" ? 0 : parse_long(a.batch);
    cfg.rng_seed = a.seed;
    cfg.record_trace = !a.trace_path.empty();
    config["tol"] = a.tol;
    config["max_iters"] = a.max_iters;
    if (a.method == "exact") {
      auto res = magkit::magnitude_exact(sim);
      est = res.estimate;
      weighting = std::move(res.weighting);
    } else if (a.method == "iter-norm") {
      auto res = magkit::solve_iter_norm(sim, cfg);
      est = res.estimate;
      weighting = std::move(res.weighting);
      trace = std::move(res.trace);
    } else {
      config["lr"] = a.lr;
      config["batch"] = a.batch;
      auto res = magkit::solve_gd(sim, cfg);
      est = res.estimate;
      weighting = std::move(res.weighting);
      trace = std::move(res.trace);
    }
  }

  if (!a.weights_path.empty()) {
    if (!weighting) magkit::throw_input("InvalidConfig", "closed-1d does not produce weights");
    std::ofstream out(a.weights_path);
    if (!out) magkit::throw_input("FileNotFound", "cannot write " + a.weights_path);
    out << "point_id,weight,residual\n";
    out.precision(17);
    for (Eigen::Index i = 0; i < weighting->w.size(); ++i)
      out << i << ',' << weighting->w[i] << ',' << weighting->residual[i] << '\n';
  }
  if (!a.trace_path.empty() && trace) write_csv_file(a.trace_path, *trace);

  const auto rec = magkit::RunRecord::from_estimate("compute", magkit::file_digest(a.in.path),
                                                    std::move(config), est);
  std::cout << rec.to_json().dump(2) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// function

struct FunctionArgs {
  InputFlags in;
  std::string method = "exact";
  double t_min = 0.0, t_max = 0.0;
  int t_steps = 32;
  std::string preset;
  double preset_r = 0.0;
  int budget = -1;
  std::string out_path;
  std::string dim_window;
};

int run_function(const FunctionArgs& a) {
  const auto space = load_space(a.in);

  std::vector<double> grid;
  if (a.preset == "sqrt-r") {
    if (!(a.preset_r > 0.0))
      magkit::throw_input("InvalidConfig", "--preset sqrt-r needs --preset-r > 0");
    grid = {std::sqrt(a.preset_r)};
  } else if (a.t_min > 0.0 || a.t_max > 0.0) {
    if (!(a.t_min > 0.0) || a.t_max < a.t_min || a.t_steps < 1)
      magkit::throw_input("InvalidConfig", "need 0 < --t-min <= --t-max and --t-steps >= 1");
    grid = magkit::log_spaced(a.t_min, a.t_max, a.t_steps);
  } else {
    grid = magkit::default_scale_grid(space, a.t_steps);
  }

  magkit::SweepMethod method = magkit::SweepMethod::exact;
  if (a.method == "iter-norm") method = magkit::SweepMethod::iter_norm;
  else if (a.method == "gd") method = magkit::SweepMethod::gd;
  else if (a.method == "hierarchy") method = magkit::SweepMethod::hierarchy;
  else if (a.method != "exact") magkit::throw_input("InvalidConfig", "unknown sweep method");

  magkit::SweepConfig cfg;
  cfg.hierarchy_budget = a.budget;
  const auto sweep = magkit::magnitude_function(space, grid, method, cfg);
  write_csv_file(a.out_path, sweep);

  json out{{"schema_version", 1},
           {"command", "function"},
           {"input_digest", magkit::file_digest(a.in.path)},
           {"method", a.method},
           {"scales", grid.size()},
           {"output", a.out_path},
           {"timestamp", magkit::utc_timestamp()}};
  if (!a.dim_window.empty()) {
    const auto colon = a.dim_window.find(':');
    if (colon == std::string::npos)
      magkit::throw_input("InvalidConfig", "--dimension expects LO:HI grid indices");
    const int lo = static_cast<int>(parse_long(a.dim_window.substr(0, colon)));
    const int hi = static_cast<int>(parse_long(a.dim_window.substr(colon + 1)));
    out["dimension"] = magkit::magnitude_dimension(sweep, lo, hi);
    out["dimension_window"] = {lo, hi};
  }
  std::cout << out.dump(2) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// subset

struct SubsetArgs {
  InputFlags in;
  std::string method = "greedy";
  double scale = 1.0;
  int budget = -1;
  double tolerance = 1e-3;
  std::string sizes;
  std::uint64_t seed = 0;
  std::string out_path;
  std::string dump_hierarchy;
};

int run_subset(const SubsetArgs& a) {
  const auto space = load_space(a.in);
  magkit::SelectionCurve curve;
  if (a.method == "greedy") {
    curve = magkit::greedy_select(space, a.scale, a.tolerance, a.budget, a.seed);
  } else if (a.method == "hierarchy") {
    const auto hier = magkit::build_hierarchy(space);
    const int budget = a.budget < 0 ? space.size() : a.budget;
    curve = hier.approx_magnitude_topdown(a.scale, budget);
    if (!a.dump_hierarchy.empty()) write_file(a.dump_hierarchy, hier.to_json().dump(2) + "\n");
  } else if (a.method == "random") {
    std::vector<int> sizes;
    if (!a.sizes.empty()) sizes = parse_int_list(a.sizes);
    else if (a.budget > 0) for (int s = 1; s <= a.budget; ++s) sizes.push_back(s);
    else for (int s = 1; s <= space.size(); ++s) sizes.push_back(s);
    curve = magkit::random_select(space, a.scale, sizes, a.seed);
  } else {
    magkit::throw_input("InvalidConfig", "unknown subset method");
  }
  write_csv_file(a.out_path, curve);

  json out{{"schema_version", 1},
           {"command", "subset"},
           {"input_digest", magkit::file_digest(a.in.path)},
           {"method", a.method},
           {"scale", a.scale},
           {"seed", a.seed},
           {"selected", curve.steps.size()},
           {"final_magnitude", curve.final_magnitude()},
           {"output", a.out_path},
           {"timestamp", magkit::utc_timestamp()}};
  std::cout << out.dump(2) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// cluster

struct ClusterArgs {
  InputFlags in;
  double theta = -1.0;
  bool sweep = false;
  double theta_min = 1e-3, theta_max = 1.0;
  int theta_steps = 24;
  std::uint64_t seed = 0;
  std::string assign_path;
  std::string trace_path;
  std::string profile_path;
};

int run_cluster(const ClusterArgs& a) {
  const auto space = load_space(a.in);
  json out{{"schema_version", 1},
           {"command", "cluster"},
           {"input_digest", magkit::file_digest(a.in.path)},
           {"seed", a.seed},
           {"timestamp", magkit::utc_timestamp()}};

  if (a.sweep) {
    const auto grid = magkit::log_spaced(a.theta_min, a.theta_max, a.theta_steps);
    const auto profile = magkit::persistence_sweep(space, grid, a.seed);
    if (!a.profile_path.empty()) write_csv_file(a.profile_path, profile);
    out["persistent_count"] = profile.persistent_count;
    out["thetas"] = profile.thetas;
    out["cluster_counts"] = profile.counts;
  } else {
    if (a.theta < 0.0)
      magkit::throw_input("InvalidConfig", "pass --theta or --sweep");
    const auto result = magkit::cluster(space, a.theta, a.seed);
    if (!a.assign_path.empty()) {
      std::ofstream f(a.assign_path);
      if (!f) magkit::throw_input("FileNotFound", "cannot write " + a.assign_path);
      result.write_assignment_csv(f);
    }
    if (!a.trace_path.empty()) write_file(a.trace_path, result.to_json().dump(2) + "\n");
    out["theta"] = a.theta;
    out["cluster_count"] = result.cluster_count;
  }
  std::cout << out.dump(2) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// hierarchy

int run_hierarchy(const InputFlags& in, const std::string& out_path) {
  const auto hier = magkit::build_hierarchy(load_space(in));
  const std::string text = hier.to_json().dump(2) + "\n";
  if (out_path.empty()) std::cout << text;
  else write_file(out_path, text);
  return 0;
}

// ---------------------------------------------------------------------------
// bench

struct BenchArgs {
  std::string sizes = "1000,2000";
  std::string methods = "exact,iter-norm";
  int repeats = 3;
  std::uint64_t seed = 0;
  std::string out_path;
  double tol = 1e-6;
  long max_iters = 1000;
  int exact_cap = 15000;
};

int run_bench(const BenchArgs& a) {
  const auto sizes = parse_int_list(a.sizes);
  std::vector<std::string> methods;
  {
    std::stringstream ss(a.methods);
    std::string tok;
    while (std::getline(ss, tok, ',')) methods.push_back(tok);
  }
  if (a.repeats < 1) magkit::throw_input("InvalidConfig", "--repeats must be >= 1");

  std::ostringstream csv;
  csv << "size,method,mean_time,std_time,mean_abs_rel_error\n";
  csv.precision(17);

  for (int n : sizes) {
    if (n < 1) magkit::throw_input("InvalidConfig", "sizes must be positive");
    std::vector<double> exact_values(static_cast<size_t>(a.repeats),
                                     std::numeric_limits<double>::quiet_NaN());
    std::vector<magkit::SimilarityMatrix> sims;
    for (int r = 0; r < a.repeats; ++r)
      sims.push_back(magkit::similarity_from_points(
          normal_cloud(n, 2, mix_seed(a.seed, static_cast<std::uint64_t>(n),
                                      static_cast<std::uint64_t>(r))),
          magkit::Metric::euclidean, 1.0));
    if (n <= a.exact_cap)
      for (int r = 0; r < a.repeats; ++r)
        exact_values[static_cast<size_t>(r)] =
            magkit::magnitude_exact(sims[static_cast<size_t>(r)]).estimate.value;

    for (const auto& method : methods) {
      std::vector<double> times, errors;
      for (int r = 0; r < a.repeats; ++r) {
        const auto& sim = sims[static_cast<size_t>(r)];
        double value = 0.0, secs = 0.0;
        magkit::SolverConfig cfg;
        cfg.tol = a.tol;
        cfg.max_iters = a.max_iters;
        if (method == "exact") {
          if (n > a.exact_cap) continue;
          const auto res = magkit::magnitude_exact(sim);
          value = res.estimate.value;
          secs = res.estimate.wall_time;
        } else if (method == "iter-norm") {
          const auto res = magkit::solve_iter_norm(sim, cfg);
          value = res.estimate.value;
          secs = res.estimate.wall_time;
        } else if (method == "gd") {
          const auto res = magkit::solve_gd(sim, cfg);
          value = res.estimate.value;
          secs = res.estimate.wall_time;
        } else {
          magkit::throw_input("InvalidConfig", "unknown bench method " + method);
        }
        times.push_back(secs);
        const double exact = exact_values[static_cast<size_t>(r)];
        if (std::isfinite(exact)) errors.push_back(std::abs(value - exact) / exact);
      }
      csv << n << ',' << method << ',';
      if (!times.empty()) {
        double mean = 0.0;
        for (double t : times) mean += t;
        mean /= static_cast<double>(times.size());
        double var = 0.0;
        for (double t : times) var += (t - mean) * (t - mean);
        var /= static_cast<double>(times.size());
        csv << mean << ',' << std::sqrt(var) << ',';
      } else {
        csv << ",,";
      }
      if (!errors.empty()) {
        double mean = 0.0;
        for (double e : errors) mean += e;
        csv << mean / static_cast<double>(errors.size());
      }
      csv << '\n';
    }
  }

  if (a.out_path.empty()) std::cout << csv.str();
  else write_file(a.out_path, csv.str());
  return 0;
}

// ---------------------------------------------------------------------------
// verify

json check(const std::string& name, bool pass, json detail = {}) {
  json c{{"name", name}, {"pass", pass}};
  if (!detail.is_null()) c["detail"] = std::move(detail);
  return c;
}

json verify_counterexample() {
  json checks = json::array();

  const double gap = magkit::counterexample_gap(500, 5.0);
  checks.push_back(check("gap_D500_t5_in_[7.16,7.20]", gap >= 7.16 && gap <= 7.20,
                         {{"value", gap}}));

  const double gap_cf = magkit::counterexample_gap_closed_form(500, 5.0);
  checks.push_back(check("gap_dense_vs_closed_form_1e-6", std::abs(gap - gap_cf) <= 1e-6,
                         {{"dense", gap}, {"closed_form", gap_cf}}));

  const auto vertices = magkit::cross_polytope(500, 5.0);
  const double dense_mag =
      magkit::magnitude_exact(magkit::similarity(vertices, 1.0)).estimate.value;
  const double cf_mag = magkit::magnitude_homogeneous_cross(500, 5.0);
  checks.push_back(check("homogeneous_closed_form_rel_1e-6",
                         std::abs(dense_mag - cf_mag) / cf_mag <= 1e-6,
                         {{"dense", dense_mag}, {"closed_form", cf_mag}}));

  const double lim1 = magkit::limit_gap(1.0);
  checks.push_back(check("limit_gap_t1_approx_0.594", std::abs(lim1 - 0.594033) <= 1e-3,
                         {{"value", lim1}}));
  bool positive = true;
  for (double t : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0})
    positive = positive && magkit::limit_gap(t) > 0.0;
  checks.push_back(check("limit_gap_positive_on_grid", positive));

  const auto witness = magkit::check_submodular_cross(14, 30, 3.0);
  checks.push_back(check("non_submodularity_witness_D14_in_D30", !witness.holds,
                         {{"slack", witness.slack}}));

  return checks;
}

json verify_submod_1d(long fuzz, std::uint64_t seed) {
  json checks = json::array();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> size_dist(1, 8);
  std::uniform_real_distribution<double> val(-10.0, 10.0);
  long violations = 0;
  for (long i = 0; i < fuzz; ++i) {
    const int n = size_dist(rng);
    Eigen::VectorXd xs(n);
    for (int k = 0; k < n; ++k) xs[k] = val(rng);
    const double x1 = val(rng), x2 = val(rng);
    std::vector<double> all(xs.data(), xs.data() + n);
    all.push_back(x1);
    all.push_back(x2);
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end()) continue;
    if (!magkit::check_submodular_1d(xs, x1, x2).holds) ++violations;
  }
  checks.push_back(check("fuzz_violations", violations == 0,
                         {{"instances", fuzz}, {"violations", violations}}));

  Eigen::VectorXd xs(3);
  xs << 0.0, 5.0, 10.0;
  const auto diff = magkit::check_submodular_1d(xs, 2.0, 7.0);
  checks.push_back(check("different_gap_slack_zero", std::abs(diff.slack) <= 1e-10,
                         {{"slack", diff.slack}}));
  return checks;
}

json verify_submod_3pt(long fuzz, std::uint64_t seed) {
  json checks = json::array();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-5.0, 5.0);
  long violations = 0;
  for (long i = 0; i < fuzz; ++i) {
    const double ax = coord(rng), ay = coord(rng), bx = coord(rng), by = coord(rng),
                 cx = coord(rng), cy = coord(rng);
    const double d1 = std::hypot(ax - bx, ay - by);
    const double d2 = std::hypot(ax - cx, ay - cy);
    const double d3 = std::hypot(bx - cx, by - cy);
    if (d1 == 0.0 || d2 == 0.0 || d3 == 0.0) continue;
    if (!magkit::check_submodular_3pt(d1, d2, d3).holds) ++violations;
  }
  checks.push_back(check("fuzz_violations", violations == 0,
                         {{"instances", fuzz}, {"violations", violations}}));
  checks.push_back(check("equilateral_holds", magkit::check_submodular_3pt(1, 1, 1).holds));
  checks.push_back(
      check("near_degenerate_holds", magkit::check_submodular_3pt(1.0, 1.0, 1.999).holds));
  return checks;
}

int run_verify(const std::string& suite, long fuzz, std::uint64_t seed) {
  json report{{"schema_version", 1}, {"suite", suite}, {"timestamp", magkit::utc_timestamp()}};
  json checks = json::array();
  if (suite == "counterexample" || suite == "all")
    for (auto& c : verify_counterexample()) checks.push_back(c);
  if (suite == "submod-1d" || suite == "all")
    for (auto& c : verify_submod_1d(fuzz, seed)) checks.push_back(c);
  if (suite == "submod-3pt" || suite == "all")
    for (auto& c : verify_submod_3pt(fuzz, seed)) checks.push_back(c);

  bool all_pass = true;
  for (const auto& c : checks) all_pass = all_pass && c.at("pass").get<bool>();
  report["checks"] = std::move(checks);
  report["all_pass"] = all_pass;
  std::cout << report.dump(2) << '\n';
  return all_pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"magkit: metric magnitude computation and approximation toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags like --threads may follow the subcommand

  int threads = 0;
  app.add_option("--threads", threads, "pin the worker thread count (default MAGKIT_THREADS or 1)");

  ComputeArgs compute_args;
  auto* compute = app.add_subcommand("compute", "magnitude of one space at one scale");
  add_input_flags(compute, compute_args.in);
  compute->add_option("--method", compute_args.method, "exact|iter-norm|gd|closed-1d")
      ->check(CLI::IsMember({"exact", "iter-norm", "gd", "closed-1d"}));
  compute->add_option("--scale", compute_args.scale, "similarity scale t (default 1)");
  compute->add_option("--tol", compute_args.tol, "solver convergence tolerance");
  compute->add_option("--max-iters", compute_args.max_iters, "solver iteration cap");
  compute->add_option("--lr", compute_args.lr, "gd learning rate");
  compute->add_option("--batch", compute_args.batch, "gd batch size or 'full'");
  compute->add_option("--seed", compute_args.seed, "rng seed");
  compute->add_option("--weights", compute_args.weights_path, "write the weighting CSV here");
  compute->add_option("--trace", compute_args.trace_path, "write the convergence trace CSV here");

  FunctionArgs function_args;
  auto* function = app.add_subcommand("function", "magnitude function over a scale grid");
  add_input_flags(function, function_args.in);
  function->add_option("--method", function_args.method, "exact|iter-norm|gd|hierarchy");
  function->add_option("--t-min", function_args.t_min, "smallest scale");
  function->add_option("--t-max", function_args.t_max, "largest scale");
  function->add_option("--t-steps", function_args.t_steps, "number of log-spaced scales");
  function->add_option("--preset", function_args.preset, "preset grid: sqrt-r");
  function->add_option("--preset-r", function_args.preset_r, "training-set size r for sqrt-r");
  function->add_option("--budget", function_args.budget, "hierarchy prefix size");
  function->add_option("-o,--output", function_args.out_path, "sweep CSV path")->required();
  function->add_option("--dimension", function_args.dim_window,
                       "LO:HI window (grid indices) for the dimension slope");

  SubsetArgs subset_args;
  auto* subset = app.add_subcommand("subset", "subset-selection magnitude curves");
  add_input_flags(subset, subset_args.in);
  subset->add_option("--method", subset_args.method, "greedy|hierarchy|random")
      ->check(CLI::IsMember({"greedy", "hierarchy", "random"}));
  subset->add_option("--scale", subset_args.scale, "similarity scale t (default 1)");
  subset->add_option("--budget", subset_args.budget, "maximum subset size");
  subset->add_option("--tolerance", subset_args.tolerance, "greedy relative-increase stop");
  subset->add_option("--sizes", subset_args.sizes, "comma-separated sizes (random method)");
  subset->add_option("--seed", subset_args.seed, "rng seed");
  subset->add_option("-o,--output", subset_args.out_path, "curve CSV path")->required();
  subset->add_option("--dump-hierarchy", subset_args.dump_hierarchy,
                     "write the hierarchy JSON here (hierarchy method)");

  ClusterArgs cluster_args;
  auto* cluster_cmd = app.add_subcommand("cluster", "magnitude clustering");
  add_input_flags(cluster_cmd, cluster_args.in);
  cluster_cmd->add_option("--theta", cluster_args.theta, "merge threshold");
  cluster_cmd->add_flag("--sweep", cluster_args.sweep, "persistence sweep over a theta grid");
  cluster_cmd->add_option("--theta-min", cluster_args.theta_min, "sweep grid start");
  cluster_cmd->add_option("--theta-max", cluster_args.theta_max, "sweep grid end");
  cluster_cmd->add_option("--theta-steps", cluster_args.theta_steps, "sweep grid size");
  cluster_cmd->add_option("--seed", cluster_args.seed, "rng seed");
  cluster_cmd->add_option("--assign", cluster_args.assign_path, "assignment CSV path");
  cluster_cmd->add_option("--trace", cluster_args.trace_path, "trace JSON path");
  cluster_cmd->add_option("--profile", cluster_args.profile_path, "persistence CSV path");

  InputFlags hierarchy_in;
  std::string hierarchy_out;
  auto* hierarchy = app.add_subcommand("hierarchy", "build and dump the discrete center hierarchy");
  add_input_flags(hierarchy, hierarchy_in);
  hierarchy->add_option("-o,--output", hierarchy_out, "JSON path (default stdout)");

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "timing/accuracy table on seeded normal clouds");
  bench->add_option("--sizes", bench_args.sizes, "comma-separated cloud sizes");
  bench->add_option("--methods", bench_args.methods, "comma-separated methods");
  bench->add_option("--repeats", bench_args.repeats, "repeats per cell");
  bench->add_option("--seed", bench_args.seed, "rng seed");
  bench->add_option("--tol", bench_args.tol, "iterative solver tolerance");
  bench->add_option("--max-iters", bench_args.max_iters, "iterative solver cap");
  bench->add_option("--exact-cap", bench_args.exact_cap, "largest n for the exact reference");
  bench->add_option("-o,--output", bench_args.out_path, "table CSV path (default stdout)");

  std::string verify_suite = "all";
  long verify_fuzz = 10000;
  std::uint64_t verify_seed = 0;
  auto* verify = app.add_subcommand("verify", "numerical verification of the library's structural guarantees");
  verify->add_option("suite", verify_suite, "counterexample|submod-1d|submod-3pt|all")
      ->check(CLI::IsMember({"counterexample", "submod-1d", "submod-3pt", "all"}));
  verify->add_option("--fuzz", verify_fuzz, "fuzz instances per suite");
  verify->add_option("--seed", verify_seed, "fuzz seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << json{{"code", "Usage"}, {"message", e.what()}}.dump() << '\n';
    return 1;
  }

  if (threads == 0) {
    if (const char* env = std::getenv("MAGKIT_THREADS")) threads = std::atoi(env);
  }
  Eigen::setNbThreads(threads > 0 ? threads : 1);

  try {
    if (compute->parsed()) return run_compute(compute_args);
    if (function->parsed()) return run_function(function_args);
    if (subset->parsed()) return run_subset(subset_args);
    if (cluster_cmd->parsed()) return run_cluster(cluster_args);
    if (hierarchy->parsed()) return run_hierarchy(hierarchy_in, hierarchy_out);
    if (bench->parsed()) {
      if (threads <= 0)
        magkit::throw_input("InvalidConfig",
                            "bench requires --threads (or MAGKIT_THREADS) for reproducibility");
      return run_bench(bench_args);
    }
    if (verify->parsed()) return run_verify(verify_suite, verify_fuzz, verify_seed);
  } catch (const magkit::Error& e) {
    std::cerr << json{{"code", e.code()}, {"message", e.what()}}.dump() << '\n';
    return e.kind() == magkit::ErrorKind::input ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << json{{"code", "Internal"}, {"message", e.what()}}.dump() << '\n';
    return 2;
  }
  return 0;
}
