// Command-line driver: graph construction, single reconstructions, the grid
// search / final-run / iteration experiments, conditioning reports and plot
// regeneration, all against one JSON config with flag overrides.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tvgsr/errors.hpp"
#include "tvgsr/experiments.hpp"
#include "tvgsr/plot.hpp"
#include "tvgsr/rng.hpp"
#include "tvgsr/sampling.hpp"
#include "tvgsr/spectral.hpp"

namespace {

namespace fs = std::filesystem;
using namespace tvgsr;

std::string join_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

struct CommonFlags {
  std::string config_path;
  std::optional<std::string> output_dir;
  std::optional<std::uint64_t> master_seed;
  std::optional<int> threads;
  std::optional<int> k;
  std::optional<std::string> metric;
  std::optional<double> tol;
  std::optional<int> max_iters;
  std::optional<double> beta;
  std::vector<double> lambda_grid;
  std::vector<double> epsilon_grid;
  std::vector<double> densities;
  std::optional<int> trials_search;
  std::optional<int> trials_final;
  std::optional<std::string> scope;

  std::optional<std::string> dataset_type;
  std::optional<std::string> dataset_path;
  std::optional<std::string> values_path;
  std::optional<std::string> coords_path;
  std::optional<std::string> first_date;
  std::optional<std::string> last_date;
  std::optional<int> n_nodes;
  std::optional<int> n_steps;
  std::optional<std::uint64_t> dataset_seed;
};

void register_common(CLI::App& app, CommonFlags& flags) {
  app.add_option("--config", flags.config_path, "JSON config file");
  app.add_option("--output-dir", flags.output_dir,
                 "output directory (overrides config and TVGSR_OUTPUT_DIR)");
  app.add_option("--master-seed", flags.master_seed, "master seed for all sub-seeds");
  app.add_option("--threads", flags.threads, "worker threads, 0 = hardware");
  app.add_option("--k", flags.k, "kNN neighbour count");
  app.add_option("--metric", flags.metric, "euclidean-degrees | haversine-km");
  app.add_option("--tol", flags.tol, "CG relative residual tolerance");
  app.add_option("--max-iters", flags.max_iters, "CG iteration cap (0 = 20*N*M)");
  app.add_option("--beta", flags.beta, "Sobolev exponent beta");
  app.add_option("--lambda-grid", flags.lambda_grid, "grid of lambda values")->delimiter(',');
  app.add_option("--epsilon-grid", flags.epsilon_grid, "grid of epsilon values")->delimiter(',');
  app.add_option("--densities", flags.densities, "sampling densities")->delimiter(',');
  app.add_option("--trials-search", flags.trials_search, "trials per grid point");
  app.add_option("--trials-final", flags.trials_final, "trials per density in final runs");
  app.add_option("--scope", flags.scope, "MSE scope: all | unsampled-only");

  app.add_option("--dataset-type", flags.dataset_type,
                 "jhu-global | jhu-usa | matrix | synthetic");
  app.add_option("--dataset-path", flags.dataset_path, "JHU CSV path");
  app.add_option("--values-path", flags.values_path, "matrix dataset values CSV");
  app.add_option("--coords-path", flags.coords_path, "matrix dataset coordinates CSV");
  app.add_option("--first-date", flags.first_date, "inclusive first date column (m/d/yy)");
  app.add_option("--last-date", flags.last_date, "inclusive last date column (m/d/yy)");
  app.add_option("--n-nodes", flags.n_nodes, "synthetic dataset node count");
  app.add_option("--n-steps", flags.n_steps, "synthetic dataset step count");
  app.add_option("--dataset-seed", flags.dataset_seed, "synthetic dataset seed");
}

ExperimentConfig resolve_config(const CommonFlags& flags) {
  ExperimentConfig config =
      flags.config_path.empty() ? default_config() : load_config(flags.config_path);

  if (flags.output_dir) config.output_dir = *flags.output_dir;
  if (flags.master_seed) config.master_seed = *flags.master_seed;
  if (flags.threads) config.threads = *flags.threads;
  if (flags.k) config.k = *flags.k;
  if (flags.metric) {
    if (*flags.metric == "euclidean-degrees") config.metric = DistanceMetric::EuclideanDegrees;
    else if (*flags.metric == "haversine-km") config.metric = DistanceMetric::HaversineKm;
    else throw InvalidParameter("unknown metric '" + *flags.metric + "'");
  }
  if (flags.tol) config.tol = *flags.tol;
  if (flags.max_iters) config.max_iters = *flags.max_iters;
  if (flags.beta) config.beta = *flags.beta;
  if (!flags.lambda_grid.empty()) config.lambda_grid = flags.lambda_grid;
  if (!flags.epsilon_grid.empty()) config.epsilon_grid = flags.epsilon_grid;
  if (!flags.densities.empty()) config.densities = flags.densities;
  if (flags.trials_search) config.trials_search = *flags.trials_search;
  if (flags.trials_final) config.trials_final = *flags.trials_final;
  if (flags.scope) {
    if (*flags.scope == "all") config.scope = MseScope::All;
    else if (*flags.scope == "unsampled-only") config.scope = MseScope::UnsampledOnly;
    else throw InvalidParameter("unknown scope '" + *flags.scope + "'");
  }

  if (flags.dataset_type) config.dataset.type = *flags.dataset_type;
  if (flags.dataset_path) config.dataset.path = *flags.dataset_path;
  if (flags.values_path) config.dataset.values_path = *flags.values_path;
  if (flags.coords_path) config.dataset.coords_path = *flags.coords_path;
  if (flags.first_date) config.dataset.first_date = *flags.first_date;
  if (flags.last_date) config.dataset.last_date = *flags.last_date;
  if (flags.n_nodes) config.dataset.n_nodes = *flags.n_nodes;
  if (flags.n_steps) config.dataset.n_steps = *flags.n_steps;
  if (flags.dataset_seed) config.dataset.seed = *flags.dataset_seed;

  fs::create_directories(config.output_dir);
  return config;
}

std::vector<BestParams> best_params_or_search(const ExperimentContext& ctx,
                                              const ExperimentConfig& config, Method method,
                                              const std::string& best_path) {
  const std::string path =
      best_path.empty() ? join_path(config.output_dir, "best_" + method_name(method) + ".csv")
                        : best_path;
  if (fs::exists(path)) {
    std::cout << "using best parameters from " << path << "\n";
    return read_best_csv(path);
  }
  std::cout << "no best-parameter file at " << path << "; running grid search\n";
  const GridSearchResult search = grid_search(ctx, config, method);
  write_best_csv(search.best, path);
  write_result_csv(search.table,
                   join_path(config.output_dir, "search_results_" + method_name(method) + ".csv"));
  write_timing_csv(search.table,
                   join_path(config.output_dir, "search_timings_" + method_name(method) + ".csv"));
  return search.best;
}

int cmd_build_graph(const ExperimentConfig& config, const std::string& out_path) {
  const ExperimentContext ctx = make_context(config);
  const std::string graph_path =
      out_path.empty() ? join_path(config.output_dir, "graph.txt") : out_path;
  write_graph_file(ctx.graph, graph_path);
  write_coords_csv(ctx.dataset.nodes, join_path(config.output_dir, "coords.csv"));
  std::cout << "nodes = " << ctx.graph.n_nodes()
            << "\nedges = " << ctx.graph.adjacency.nonZeros() / 2
            << "\nsigma = " << ctx.graph.sigma << "\nwrote " << graph_path << "\n";
  return 0;
}

int cmd_reconstruct(const ExperimentConfig& config, const std::string& method_str,
                    double lambda, double epsilon, double density, int trial) {
  const ExperimentContext ctx = make_context(config);
  const Method method = method_from_name(method_str);
  const int n = ctx.graph.n_nodes();
  const int m = static_cast<int>(ctx.dataset.signal.cols());

  const SamplingPlan plan{density, sub_seed(config.master_seed, seed_stream::kFinalRuns,
                                            static_cast<std::uint64_t>(trial))};
  const SamplingMask mask = observe(draw_mask(plan, n, m), ctx.dataset.signal);
  write_mask_coords(mask.mask, join_path(config.output_dir, "mask.txt"));

  TvSignal x_hat;
  if (method == Method::IdwBaseline) {
    x_hat = idw_baseline(ctx.dataset.nodes, mask, config.k, 2.0, config.metric);
    std::cout << "method = idw-baseline\n";
  } else {
    ReconProblem::Options opts;
    opts.lambda = lambda;
    opts.epsilon = epsilon;
    opts.beta = config.beta;
    opts.tol = config.tol;
    opts.max_iters = config.max_iters;
    opts.variant = method == Method::Qiu ? Variant::Qiu : Variant::Sobolev;
    const ReconProblem problem(ctx.graph.laplacian, mask, opts);
    const SolveReport report = solve(problem);
    x_hat = report.x_hat;
    write_solve_report(report, join_path(config.output_dir, "residuals.csv"),
                       join_path(config.output_dir, "solve_summary.txt"));
    std::cout << "method = " << method_str << "\niterations = " << report.iterations
              << "\nconverged = " << (report.converged ? "true" : "false") << "\n";
  }

  write_signal_csv(x_hat, ctx.dataset.nodes.labels, ctx.dataset.time_labels,
                   join_path(config.output_dir, "reconstruction.csv"));
  const double err = mse(x_hat, ctx.dataset.signal, config.scope,
                         config.scope == MseScope::UnsampledOnly ? &mask : nullptr);
  std::cout << "mse = " << err << "\nwrote " << join_path(config.output_dir, "reconstruction.csv")
            << "\n";
  return 0;
}

int cmd_grid_search(const ExperimentConfig& config, const std::string& method_str) {
  const ExperimentContext ctx = make_context(config);
  const Method method = method_from_name(method_str);
  const GridSearchResult search = grid_search(ctx, config, method);

  const std::string tag = method_name(method);
  write_best_csv(search.best, join_path(config.output_dir, "best_" + tag + ".csv"));
  write_result_csv(search.table, join_path(config.output_dir, "search_results_" + tag + ".csv"));
  write_timing_csv(search.table, join_path(config.output_dir, "search_timings_" + tag + ".csv"));
  for (const auto& b : search.best)
    std::cout << "density " << b.density << ": lambda = " << b.lambda
              << ", epsilon = " << b.epsilon << ", mean mse = " << b.mean_mse << "\n";
  return 0;
}

int cmd_run_final(const ExperimentConfig& config, const std::string& method_str,
                  const std::string& best_path) {
  const ExperimentContext ctx = make_context(config);
  const Method method = method_from_name(method_str);
  const auto best = best_params_or_search(ctx, config, method, best_path);

  const ResultTable table = run_final(ctx, config, method, best);
  const std::string tag = method_name(method);
  write_result_csv(table, join_path(config.output_dir, "final_results_" + tag + ".csv"));
  write_timing_csv(table, join_path(config.output_dir, "final_timings_" + tag + ".csv"));
  const auto rows = summarize(table);
  write_summary_csv(rows, join_path(config.output_dir, "summary_" + tag + ".csv"));
  write_text_file(svg_mse_plot(table),
                  join_path(config.output_dir, "mse_vs_density_" + tag + ".svg"));
  for (const auto& r : rows)
    std::cout << "density " << r.density << ": mean mse = " << r.mse_mean << " (std "
              << r.mse_std << ", " << r.trials << " trials)\n";
  return 0;
}

int cmd_iterations(const ExperimentConfig& config, const std::string& best_path) {
  const ExperimentContext ctx = make_context(config);
  const auto best = best_params_or_search(ctx, config, Method::Sobolev, best_path);

  const auto pairs = iteration_experiment(ctx, config, best);
  write_iteration_csv(pairs, join_path(config.output_dir, "iterations.csv"));
  write_text_file(svg_iteration_plot(pairs), join_path(config.output_dir, "iterations.svg"));

  for (double density : config.densities) {
    std::vector<int> qiu;
    std::vector<int> sobolev;
    for (const auto& p : pairs) {
      if (p.density != density) continue;
      qiu.push_back(p.iters_qiu);
      sobolev.push_back(p.iters_sobolev);
    }
    if (qiu.empty()) continue;
    std::cout << "density " << density << ": median qiu = " << median_int(qiu)
              << ", median sobolev = " << median_int(sobolev) << "\n";
  }
  return 0;
}

int cmd_conditioning(const ExperimentConfig& config, double epsilon, double lambda,
                     std::optional<int> steps) {
  const ExperimentContext ctx = make_context(config);
  const PerturbationReport report = condition_number_shifted(ctx.graph.laplacian, epsilon);
  std::string text = format_report(report);

  const int m = steps ? *steps : static_cast<int>(ctx.dataset.signal.cols());
  const HessianConditionReport hess =
      hessian_condition_compare(ctx.graph.laplacian, m, lambda, epsilon);
  text += "kappa_temporal = " + std::to_string(hess.kappa_temporal) + "\n";
  text += "kappa_qiu = inf\n";
  text += "kappa_sobolev = " + std::to_string(hess.kappa_sobolev) + "\n";

  write_text_file(text, join_path(config.output_dir, "conditioning.txt"));
  std::cout << text;
  return 0;
}

int cmd_plot(const ExperimentConfig& config, const std::string& results_path,
             const std::string& iterations_path) {
  if (results_path.empty() && iterations_path.empty())
    throw InvalidParameter("plot: pass --results and/or --iterations");
  if (!results_path.empty()) {
    const ResultTable table = read_result_csv(results_path);
    const std::string out = join_path(config.output_dir, "mse_vs_density.svg");
    write_text_file(svg_mse_plot(table), out);
    std::cout << "wrote " << out << "\n";
  }
  if (!iterations_path.empty()) {
    const auto pairs = read_iteration_csv(iterations_path);
    const std::string out = join_path(config.output_dir, "iterations.svg");
    write_text_file(svg_iteration_plot(pairs), out);
    std::cout << "wrote " << out << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"time-varying graph signal reconstruction"};
  app.require_subcommand(1);
  app.fallthrough();

  CommonFlags flags;
  register_common(app, flags);

  auto* build_graph = app.add_subcommand("build-graph", "build the kNN graph and save it");
  std::string graph_out;
  build_graph->add_option("--out", graph_out, "graph file path");

  auto* reconstruct = app.add_subcommand("reconstruct", "run one reconstruction");
  std::string rec_method = "sobolev";
  double rec_lambda = 1.0;
  double rec_epsilon = 1.0;
  double rec_density = 0.7;
  int rec_trial = 0;
  reconstruct->add_option("--method", rec_method, "qiu | sobolev | idw-baseline");
  reconstruct->add_option("--lambda", rec_lambda, "regularization weight");
  reconstruct->add_option("--epsilon", rec_epsilon, "Sobolev shift");
  reconstruct->add_option("--density", rec_density, "sampling density");
  reconstruct->add_option("--trial", rec_trial, "trial index selecting the mask sub-seed");

  auto* grid = app.add_subcommand("grid-search", "search the parameter grid per density");
  std::string grid_method = "sobolev";
  grid->add_option("--method", grid_method, "qiu | sobolev | idw-baseline");

  auto* final_cmd = app.add_subcommand("run-final", "final trials at the best parameters");
  std::string final_method = "sobolev";
  std::string final_best;
  final_cmd->add_option("--method", final_method, "qiu | sobolev | idw-baseline");
  final_cmd->add_option("--best", final_best, "best-parameter CSV (grid search output)");

  auto* iters = app.add_subcommand("iterations", "paired CG iteration comparison");
  std::string iters_best;
  iters->add_option("--best", iters_best, "Sobolev best-parameter CSV");

  auto* cond = app.add_subcommand("conditioning", "condition numbers and the shift bounds");
  double cond_epsilon = 1.0;
  double cond_lambda = 1.0;
  std::optional<int> cond_steps;
  cond->add_option("--epsilon", cond_epsilon, "shift to analyse");
  cond->add_option("--lambda", cond_lambda, "regularization weight");
  cond->add_option("--steps", cond_steps, "temporal factor size (defaults to dataset steps)");

  auto* plot = app.add_subcommand("plot", "regenerate SVG plots from result CSVs");
  std::string plot_results;
  std::string plot_iterations;
  plot->add_option("--results", plot_results, "result CSV for the MSE plot");
  plot->add_option("--iterations", plot_iterations, "iteration CSV for the iteration plot");

  CLI11_PARSE(app, argc, argv);

  try {
    const ExperimentConfig config = resolve_config(flags);
    if (build_graph->parsed()) return cmd_build_graph(config, graph_out);
    if (reconstruct->parsed())
      return cmd_reconstruct(config, rec_method, rec_lambda, rec_epsilon, rec_density, rec_trial);
    if (grid->parsed()) return cmd_grid_search(config, grid_method);
    if (final_cmd->parsed()) return cmd_run_final(config, final_method, final_best);
    if (iters->parsed()) return cmd_iterations(config, iters_best);
    if (cond->parsed()) return cmd_conditioning(config, cond_epsilon, cond_lambda, cond_steps);
    if (plot->parsed()) return cmd_plot(config, plot_results, plot_iterations);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
