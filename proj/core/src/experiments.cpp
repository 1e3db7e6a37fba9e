#include "tvgsr/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <utility>

#include <json.hpp>

#include "text_util.hpp"
#include "tvgsr/errors.hpp"
#include "tvgsr/rng.hpp"
#include "tvgsr/synthetic.hpp"

namespace tvgsr {

namespace {

using nlohmann::json;

/// Runs fn(0..n_tasks) on a small worker pool. Tasks must write to disjoint
/// slots; the pool only affects scheduling, never results.
void parallel_for(int n_tasks, int n_threads, const std::function<void(int)>& fn) {
  if (n_threads <= 0)
    n_threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  n_threads = std::min(n_threads, n_tasks);
  if (n_threads <= 1) {
    for (int i = 0; i < n_tasks; ++i) fn(i);
    return;
  }

  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (int w = 0; w < n_threads; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n_tasks) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

void validate_config(const ExperimentConfig& config) {
  if (config.lambda_grid.empty()) throw InvalidParameter("config: lambda_grid is empty");
  if (config.epsilon_grid.empty()) throw InvalidParameter("config: epsilon_grid is empty");
  if (config.densities.empty()) throw InvalidParameter("config: densities is empty");
  for (double d : config.densities)
    if (!(d > 0.0) || d > 1.0)
      throw InvalidParameter("config: densities must lie in (0, 1]");
  if (config.trials_search < 1) throw InvalidParameter("config: trials_search must be >= 1");
  if (config.trials_final < 1) throw InvalidParameter("config: trials_final must be >= 1");
  if (config.k < 1) throw InvalidParameter("config: k must be >= 1");
  if (!(config.tol > 0.0)) throw InvalidParameter("config: tol must be > 0");
  if (config.max_iters < 0) throw InvalidParameter("config: max_iters must be >= 0");
}

struct GridPoint {
  double lambda = 0.0;
  double epsilon = 0.0;
};

std::vector<GridPoint> grid_points(const ExperimentConfig& config, Method method) {
  std::vector<GridPoint> points;
  switch (method) {
    case Method::Qiu:
      for (double l : config.lambda_grid) points.push_back({l, 0.0});
      break;
    case Method::Sobolev:
      for (double l : config.lambda_grid)
        for (double e : config.epsilon_grid) points.push_back({l, e});
      break;
    case Method::IdwBaseline:
      points.push_back({0.0, 0.0});
      break;
  }
  return points;
}

/// One reconstruction (or baseline interpolation) against the true signal.
TrialResult evaluate_trial(const ExperimentContext& ctx, const ExperimentConfig& config,
                           Method method, double density, GridPoint point, int trial,
                           const Eigen::MatrixXd& mask_matrix) {
  TrialResult result;
  result.method = method;
  result.density = density;
  result.lambda = point.lambda;
  result.epsilon = point.epsilon;
  result.trial = trial;

  const SamplingMask mask = observe(mask_matrix, ctx.dataset.signal);
  const auto started = std::chrono::steady_clock::now();
  TvSignal x_hat;
  if (method == Method::IdwBaseline) {
    x_hat = idw_baseline(ctx.dataset.nodes, mask, config.k, 2.0, config.metric);
    result.converged = true;
  } else {
    ReconProblem::Options opts;
    opts.lambda = point.lambda;
    opts.epsilon = point.epsilon;
    opts.beta = config.beta;
    opts.tol = config.tol;
    opts.max_iters = config.max_iters;
    opts.variant = method == Method::Qiu ? Variant::Qiu : Variant::Sobolev;
    const ReconProblem problem(ctx.graph.laplacian, mask, opts);
    const SolveReport report = solve(problem);
    x_hat = report.x_hat;
    result.iterations = report.iterations;
    result.converged = report.converged;
  }
  const auto finished = std::chrono::steady_clock::now();
  result.wall_ms =
      std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(finished - started)
          .count();
  result.mse = mse(x_hat, ctx.dataset.signal, config.scope,
                   config.scope == MseScope::UnsampledOnly ? &mask : nullptr);
  return result;
}

const BestParams& best_for_density(const std::vector<BestParams>& best, double density) {
  for (const auto& b : best)
    if (b.density == density) return b;
  throw InvalidParameter("no best parameters recorded for density " + detail::fmt_short(density));
}

bool parse_bool(const std::string& field, std::size_t line, std::size_t column) {
  if (field == "true") return true;
  if (field == "false") return false;
  throw ParseError("expected true/false, got '" + field + "'", line, column);
}

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::Qiu: return "qiu";
    case Method::Sobolev: return "sobolev";
    case Method::IdwBaseline: return "idw-baseline";
  }
  throw InvalidParameter("method_name: unknown method");
}

Method method_from_name(const std::string& name) {
  if (name == "qiu") return Method::Qiu;
  if (name == "sobolev") return Method::Sobolev;
  if (name == "idw-baseline") return Method::IdwBaseline;
  throw InvalidParameter("unknown method '" + name + "' (qiu, sobolev, idw-baseline)");
}

std::vector<double> covid_lambda_grid() {
  return {1e-3, 1e-2, 2e-2, 5e-2, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 1e2, 2e2, 5e2};
}

std::vector<double> covid_densities() { return {0.5, 0.6, 0.7, 0.8, 0.9, 0.995}; }

std::vector<double> dense_grid_densities() {
  return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
}

ExperimentConfig default_config() {
  ExperimentConfig config;
  config.lambda_grid = covid_lambda_grid();
  config.epsilon_grid = covid_lambda_grid();
  config.densities = covid_densities();
  if (const char* dir = std::getenv("TVGSR_OUTPUT_DIR"); dir != nullptr && dir[0] != '\0')
    config.output_dir = dir;
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  auto in = detail::open_input(path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what(), 1);
  }

  ExperimentConfig config = default_config();
  try {
    if (doc.contains("dataset")) {
      const json& ds = doc["dataset"];
      DatasetSpec& spec = config.dataset;
      spec.type = ds.value("type", spec.type);
      spec.path = ds.value("path", spec.path);
      spec.values_path = ds.value("values_path", spec.values_path);
      spec.coords_path = ds.value("coords_path", spec.coords_path);
      if (ds.contains("first_date")) spec.first_date = ds["first_date"].get<std::string>();
      if (ds.contains("last_date")) spec.last_date = ds["last_date"].get<std::string>();
      spec.clamp_negative = ds.value("clamp_negative", spec.clamp_negative);
      spec.n_nodes = ds.value("n_nodes", spec.n_nodes);
      spec.n_steps = ds.value("n_steps", spec.n_steps);
      spec.seed = ds.value("seed", spec.seed);
    }
    config.k = doc.value("k", config.k);
    if (doc.contains("metric")) {
      const std::string metric = doc["metric"].get<std::string>();
      if (metric == "euclidean-degrees") config.metric = DistanceMetric::EuclideanDegrees;
      else if (metric == "haversine-km") config.metric = DistanceMetric::HaversineKm;
      else throw InvalidParameter("config: unknown metric '" + metric + "'");
    }
    if (doc.contains("lambda_grid"))
      config.lambda_grid = doc["lambda_grid"].get<std::vector<double>>();
    if (doc.contains("epsilon_grid"))
      config.epsilon_grid = doc["epsilon_grid"].get<std::vector<double>>();
    config.beta = doc.value("beta", config.beta);
    if (doc.contains("densities")) config.densities = doc["densities"].get<std::vector<double>>();
    config.trials_search = doc.value("trials_search", config.trials_search);
    config.trials_final = doc.value("trials_final", config.trials_final);
    config.master_seed = doc.value("master_seed", config.master_seed);
    if (doc.contains("scope")) {
      const std::string scope = doc["scope"].get<std::string>();
      if (scope == "all") config.scope = MseScope::All;
      else if (scope == "unsampled-only") config.scope = MseScope::UnsampledOnly;
      else throw InvalidParameter("config: unknown scope '" + scope + "'");
    }
    config.tol = doc.value("tol", config.tol);
    config.max_iters = doc.value("max_iters", config.max_iters);
    config.threads = doc.value("threads", config.threads);
    config.output_dir = doc.value("output_dir", config.output_dir);
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what(), 1);
  }
  validate_config(config);
  return config;
}

ExperimentContext make_context(const ExperimentConfig& config) {
  validate_config(config);
  const DatasetSpec& spec = config.dataset;

  ExperimentContext ctx;
  if (spec.type == "jhu-global" || spec.type == "jhu-usa") {
    if (spec.path.empty()) throw InvalidParameter("dataset: jhu types need a path");
    const JhuLayout layout = spec.type == "jhu-global" ? JhuLayout::Global : JhuLayout::Usa;
    const RawCaseTable table = parse_jhu(spec.path, layout, spec.first_date, spec.last_date);
    ctx.dataset = cumulative_to_new(table, spec.clamp_negative);
    ctx.dataset.provenance.source = spec.path;
  } else if (spec.type == "matrix") {
    if (spec.values_path.empty() || spec.coords_path.empty())
      throw InvalidParameter("dataset: matrix type needs values_path and coords_path");
    ctx.dataset = load_matrix_dataset(spec.values_path, spec.coords_path);
  } else if (spec.type == "synthetic") {
    ctx.dataset = make_synthetic_dataset(spec.n_nodes, spec.n_steps, spec.seed, config.k);
  } else {
    throw InvalidParameter("dataset: unknown type '" + spec.type + "'");
  }

  ctx.graph = build_geo_graph(ctx.dataset.nodes, config.k, config.metric);
  return ctx;
}

GridSearchResult grid_search(const ExperimentContext& ctx, const ExperimentConfig& config,
                             Method method) {
  validate_config(config);
  const int n = ctx.graph.n_nodes();
  const int m = static_cast<int>(ctx.dataset.signal.cols());
  const auto points = grid_points(config, method);
  const int n_densities = static_cast<int>(config.densities.size());
  const int n_points = static_cast<int>(points.size());
  const int n_trials = config.trials_search;

  // Masks are shared across grid points: one per (density, trial).
  std::vector<std::vector<Eigen::MatrixXd>> masks(n_densities);
  for (int di = 0; di < n_densities; ++di) {
    masks[di].reserve(n_trials);
    for (int s = 0; s < n_trials; ++s) {
      const SamplingPlan plan{config.densities[di],
                              sub_seed(config.master_seed, seed_stream::kGridSearch,
                                       static_cast<std::uint64_t>(di) * n_trials + s)};
      masks[di].push_back(draw_mask(plan, n, m));
    }
  }

  GridSearchResult result;
  result.table.resize(static_cast<std::size_t>(n_densities) * n_points * n_trials);
  parallel_for(static_cast<int>(result.table.size()), config.threads, [&](int task) {
    const int di = task / (n_points * n_trials);
    const int pi = (task / n_trials) % n_points;
    const int s = task % n_trials;
    result.table[task] = evaluate_trial(ctx, config, method, config.densities[di], points[pi],
                                        s, masks[di][s]);
  });

  for (int di = 0; di < n_densities; ++di) {
    BestParams best;
    best.density = config.densities[di];
    bool have = false;
    for (int pi = 0; pi < n_points; ++pi) {
      double mean = 0.0;
      for (int s = 0; s < n_trials; ++s)
        mean += result.table[(static_cast<std::size_t>(di) * n_points + pi) * n_trials + s].mse;
      mean /= n_trials;
      const bool wins =
          !have || mean < best.mean_mse ||
          (mean == best.mean_mse &&
           (points[pi].lambda < best.lambda ||
            (points[pi].lambda == best.lambda && points[pi].epsilon < best.epsilon)));
      if (wins) {
        best.lambda = points[pi].lambda;
        best.epsilon = points[pi].epsilon;
        best.mean_mse = mean;
        have = true;
      }
    }
    result.best.push_back(best);
  }
  return result;
}

ResultTable run_final(const ExperimentContext& ctx, const ExperimentConfig& config,
                      Method method, const std::vector<BestParams>& best) {
  validate_config(config);
  const int n = ctx.graph.n_nodes();
  const int m = static_cast<int>(ctx.dataset.signal.cols());
  const int n_densities = static_cast<int>(config.densities.size());
  const int n_trials = config.trials_final;

  ResultTable table(static_cast<std::size_t>(n_densities) * n_trials);
  parallel_for(static_cast<int>(table.size()), config.threads, [&](int task) {
    const int di = task / n_trials;
    const int trial = task % n_trials;
    const double density = config.densities[di];
    const BestParams& params = best_for_density(best, density);
    const SamplingPlan plan{density,
                            sub_seed(config.master_seed, seed_stream::kFinalRuns,
                                     static_cast<std::uint64_t>(di) * n_trials + trial)};
    const Eigen::MatrixXd mask_matrix = draw_mask(plan, n, m);
    table[task] = evaluate_trial(ctx, config, method, density,
                                 {params.lambda, params.epsilon}, trial, mask_matrix);
  });
  return table;
}

std::vector<IterationPair> iteration_experiment(const ExperimentContext& ctx,
                                                const ExperimentConfig& config,
                                                const std::vector<BestParams>& sobolev_best) {
  validate_config(config);
  const int n = ctx.graph.n_nodes();
  const int m = static_cast<int>(ctx.dataset.signal.cols());
  const int n_densities = static_cast<int>(config.densities.size());
  const int n_trials = config.trials_final;

  std::vector<IterationPair> pairs(static_cast<std::size_t>(n_densities) * n_trials);
  parallel_for(static_cast<int>(pairs.size()), config.threads, [&](int task) {
    const int di = task / n_trials;
    const int trial = task % n_trials;
    const double density = config.densities[di];
    const BestParams& params = best_for_density(sobolev_best, density);

    const SamplingPlan plan{density,
                            sub_seed(config.master_seed, seed_stream::kIterations,
                                     static_cast<std::uint64_t>(di) * n_trials + trial)};
    const SamplingMask mask = observe(draw_mask(plan, n, m), ctx.dataset.signal);

    ReconProblem::Options opts;
    opts.lambda = params.lambda;
    opts.tol = config.tol;
    opts.max_iters = config.max_iters;

    opts.variant = Variant::Qiu;
    const SolveReport qiu = solve(ReconProblem(ctx.graph.laplacian, mask, opts));

    opts.variant = Variant::Sobolev;
    opts.epsilon = params.epsilon;
    opts.beta = config.beta;
    const SolveReport sobolev = solve(ReconProblem(ctx.graph.laplacian, mask, opts));

    IterationPair& pair = pairs[task];
    pair.density = density;
    pair.lambda = params.lambda;
    pair.epsilon = params.epsilon;
    pair.trial = trial;
    pair.iters_qiu = qiu.iterations;
    pair.iters_sobolev = sobolev.iterations;
    pair.converged_qiu = qiu.converged;
    pair.converged_sobolev = sobolev.converged;
  });
  return pairs;
}

std::vector<SummaryRow> summarize(const ResultTable& table) {
  if (table.empty()) throw InvalidParameter("summarize: empty table");

  std::vector<SummaryRow> rows;
  std::vector<std::vector<const TrialResult*>> groups;
  for (const auto& r : table) {
    std::size_t g = 0;
    for (; g < rows.size(); ++g) {
      if (rows[g].method == r.method && rows[g].density == r.density &&
          rows[g].lambda == r.lambda && rows[g].epsilon == r.epsilon)
        break;
    }
    if (g == rows.size()) {
      SummaryRow row;
      row.method = r.method;
      row.density = r.density;
      row.lambda = r.lambda;
      row.epsilon = r.epsilon;
      rows.push_back(row);
      groups.emplace_back();
    }
    groups[g].push_back(&r);
  }

  for (std::size_t g = 0; g < rows.size(); ++g) {
    SummaryRow& row = rows[g];
    row.trials = static_cast<int>(groups[g].size());
    double mse_sum = 0.0;
    double iter_sum = 0.0;
    std::vector<int> iters;
    iters.reserve(groups[g].size());
    for (const TrialResult* r : groups[g]) {
      mse_sum += r->mse;
      iter_sum += r->iterations;
      iters.push_back(r->iterations);
    }
    row.mse_mean = mse_sum / row.trials;
    row.iter_mean = iter_sum / row.trials;
    row.iter_median = median_int(std::move(iters));
    if (row.trials > 1) {
      double ss = 0.0;
      for (const TrialResult* r : groups[g]) {
        const double d = r->mse - row.mse_mean;
        ss += d * d;
      }
      row.mse_std = std::sqrt(ss / (row.trials - 1));
    }
  }
  return rows;
}

void write_result_csv(const ResultTable& table, const std::string& path) {
  auto out = detail::open_output(path);
  out << "method,density,lambda,epsilon,trial,mse,iterations,converged\n";
  for (const auto& r : table)
    out << method_name(r.method) << ',' << detail::fmt17(r.density) << ','
        << detail::fmt17(r.lambda) << ',' << detail::fmt17(r.epsilon) << ',' << r.trial << ','
        << detail::fmt17(r.mse) << ',' << r.iterations << ','
        << (r.converged ? "true" : "false") << '\n';
}

void write_timing_csv(const ResultTable& table, const std::string& path) {
  auto out = detail::open_output(path);
  out << "method,density,lambda,epsilon,trial,wall_ms\n";
  for (const auto& r : table)
    out << method_name(r.method) << ',' << detail::fmt17(r.density) << ','
        << detail::fmt17(r.lambda) << ',' << detail::fmt17(r.epsilon) << ',' << r.trial << ','
        << detail::fmt_short(r.wall_ms) << '\n';
}

void write_best_csv(const std::vector<BestParams>& best, const std::string& path) {
  auto out = detail::open_output(path);
  out << "density,lambda,epsilon,mean_mse\n";
  for (const auto& b : best)
    out << detail::fmt17(b.density) << ',' << detail::fmt17(b.lambda) << ','
        << detail::fmt17(b.epsilon) << ',' << detail::fmt17(b.mean_mse) << '\n';
}

void write_summary_csv(const std::vector<SummaryRow>& rows, const std::string& path) {
  auto out = detail::open_output(path);
  out << "method,density,lambda,epsilon,trials,mse_mean,mse_std,iter_mean,iter_median\n";
  for (const auto& r : rows)
    out << method_name(r.method) << ',' << detail::fmt17(r.density) << ','
        << detail::fmt17(r.lambda) << ',' << detail::fmt17(r.epsilon) << ',' << r.trials << ','
        << detail::fmt17(r.mse_mean) << ',' << detail::fmt17(r.mse_std) << ','
        << detail::fmt17(r.iter_mean) << ',' << detail::fmt17(r.iter_median) << '\n';
}

void write_iteration_csv(const std::vector<IterationPair>& pairs, const std::string& path) {
  auto out = detail::open_output(path);
  out << "density,lambda,epsilon,trial,iters_qiu,iters_sobolev,converged_qiu,converged_sobolev\n";
  for (const auto& p : pairs)
    out << detail::fmt17(p.density) << ',' << detail::fmt17(p.lambda) << ','
        << detail::fmt17(p.epsilon) << ',' << p.trial << ',' << p.iters_qiu << ','
        << p.iters_sobolev << ',' << (p.converged_qiu ? "true" : "false") << ','
        << (p.converged_sobolev ? "true" : "false") << '\n';
}

ResultTable read_result_csv(const std::string& path) {
  auto in = detail::open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty result CSV", 1);

  ResultTable table;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = detail::split_csv(line, line_no);
    if (f.size() != 8) throw ParseError("expected 8 fields", line_no);
    TrialResult r;
    r.method = method_from_name(f[0]);
    r.density = detail::parse_double(f[1], line_no, 2);
    r.lambda = detail::parse_double(f[2], line_no, 3);
    r.epsilon = detail::parse_double(f[3], line_no, 4);
    r.trial = static_cast<int>(detail::parse_long(f[4], line_no, 5));
    r.mse = detail::parse_double(f[5], line_no, 6);
    r.iterations = static_cast<int>(detail::parse_long(f[6], line_no, 7));
    r.converged = parse_bool(f[7], line_no, 8);
    table.push_back(r);
  }
  return table;
}

std::vector<IterationPair> read_iteration_csv(const std::string& path) {
  auto in = detail::open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty iteration CSV", 1);

  std::vector<IterationPair> pairs;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = detail::split_csv(line, line_no);
    if (f.size() != 8) throw ParseError("expected 8 fields", line_no);
    IterationPair p;
    p.density = detail::parse_double(f[0], line_no, 1);
    p.lambda = detail::parse_double(f[1], line_no, 2);
    p.epsilon = detail::parse_double(f[2], line_no, 3);
    p.trial = static_cast<int>(detail::parse_long(f[3], line_no, 4));
    p.iters_qiu = static_cast<int>(detail::parse_long(f[4], line_no, 5));
    p.iters_sobolev = static_cast<int>(detail::parse_long(f[5], line_no, 6));
    p.converged_qiu = parse_bool(f[6], line_no, 7);
    p.converged_sobolev = parse_bool(f[7], line_no, 8);
    pairs.push_back(p);
  }
  return pairs;
}

std::vector<BestParams> read_best_csv(const std::string& path) {
  auto in = detail::open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty best-params CSV", 1);

  std::vector<BestParams> best;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = detail::split_csv(line, line_no);
    if (f.size() != 4) throw ParseError("expected 4 fields", line_no);
    BestParams b;
    b.density = detail::parse_double(f[0], line_no, 1);
    b.lambda = detail::parse_double(f[1], line_no, 2);
    b.epsilon = detail::parse_double(f[2], line_no, 3);
    b.mean_mse = detail::parse_double(f[3], line_no, 4);
    best.push_back(b);
  }
  return best;
}

double median_int(std::vector<int> values) {
  if (values.empty()) throw InvalidParameter("median_int: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace tvgsr
