#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tvgsr/geo_graph.hpp"
#include "tvgsr/ingest.hpp"
#include "tvgsr/reconstruction.hpp"
#include "tvgsr/sampling.hpp"

namespace tvgsr {

enum class Method { Qiu, Sobolev, IdwBaseline };

std::string method_name(Method m);           // "qiu", "sobolev", "idw-baseline"
Method method_from_name(const std::string& name);

/// Where the signal comes from. "synthetic" needs no external files.
struct DatasetSpec {
  std::string type = "synthetic";  // jhu-global | jhu-usa | matrix | synthetic
  std::string path;                // JHU CSV for the jhu-* types
  std::string values_path;         // matrix type
  std::string coords_path;         // matrix type
  std::optional<std::string> first_date;  // inclusive window for jhu-* types
  std::optional<std::string> last_date;
  bool clamp_negative = true;
  int n_nodes = 100;  // synthetic type
  int n_steps = 30;
  std::uint64_t seed = 7;
};

/// Full experiment description. Defaults mirror the reference protocol:
/// the 16-point lambda grid, the cartesian lambda x epsilon search for the
/// Sobolev arm, 5 search trials and 100 final trials per density.
struct ExperimentConfig {
  DatasetSpec dataset;
  int k = 10;
  DistanceMetric metric = DistanceMetric::EuclideanDegrees;
  std::vector<double> lambda_grid;   // defaults to covid_lambda_grid()
  std::vector<double> epsilon_grid;  // defaults to covid_lambda_grid()
  double beta = 1.0;
  std::vector<double> densities;     // defaults to covid_densities()
  int trials_search = 5;
  int trials_final = 100;
  std::uint64_t master_seed = 42;
  MseScope scope = MseScope::All;
  double tol = 1e-7;
  int max_iters = 2000;
  int threads = 0;  // 0 = hardware concurrency
  std::string output_dir = "out";
};

/// The reference parameter set
/// {1e-3, 1e-2, 2e-2, 5e-2, 0.1, 0.2, 0.5, 1, 2, 5, 10, 20, 50, 1e2, 2e2, 5e2}.
std::vector<double> covid_lambda_grid();

/// {0.5, 0.6, 0.7, 0.8, 0.9, 0.995} as used for the COVID datasets.
std::vector<double> covid_densities();

/// {0.1, ..., 0.9} as used for the temperature and PM 2.5 datasets.
std::vector<double> dense_grid_densities();

/// Parses a JSON config file. Missing keys keep their defaults; when
/// output_dir is absent the TVGSR_OUTPUT_DIR environment variable (and then
/// "out") supplies it.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig default_config();

/// Loads the dataset named by the config and builds its graph.
struct ExperimentContext {
  Dataset dataset;
  GeoGraph graph;
};

ExperimentContext make_context(const ExperimentConfig& config);

/// One reconstruction outcome. wall_ms is informational only and is excluded
/// from the deterministic result files.
struct TrialResult {
  Method method = Method::Sobolev;
  double density = 0.0;
  double lambda = 0.0;
  double epsilon = 0.0;
  int trial = 0;
  double mse = 0.0;
  int iterations = 0;
  bool converged = false;
  double wall_ms = 0.0;
};

using ResultTable = std::vector<TrialResult>;

struct BestParams {
  double density = 0.0;
  double lambda = 0.0;
  double epsilon = 0.0;
  double mean_mse = 0.0;
};

struct GridSearchResult {
  std::vector<BestParams> best;  // one entry per density, config order
  ResultTable table;             // every (grid point, trial) outcome
};

/// Grid search per density: qiu sweeps lambda over lambda_grid; sobolev
/// sweeps the cartesian product lambda_grid x epsilon_grid. Each grid point
/// is evaluated on trials_search shared masks and the argmin of mean MSE
/// wins, ties broken toward smaller lambda then smaller epsilon.
/// Non-converged solves keep their achieved MSE and are flagged.
GridSearchResult grid_search(const ExperimentContext& ctx, const ExperimentConfig& config,
                             Method method);

/// trials_final independent masks per density at fixed best parameters.
/// Masks come from a seed stream disjoint from the grid-search stream.
ResultTable run_final(const ExperimentContext& ctx, const ExperimentConfig& config,
                      Method method, const std::vector<BestParams>& best);

/// Paired iteration counts: for each density and trial, both variants solve
/// with identical J, lambda, tolerance and initialization; the Sobolev arm
/// additionally uses its best epsilon.
struct IterationPair {
  double density = 0.0;
  double lambda = 0.0;
  double epsilon = 0.0;
  int trial = 0;
  int iters_qiu = 0;
  int iters_sobolev = 0;
  bool converged_qiu = false;
  bool converged_sobolev = false;
};

std::vector<IterationPair> iteration_experiment(const ExperimentContext& ctx,
                                                const ExperimentConfig& config,
                                                const std::vector<BestParams>& sobolev_best);

struct SummaryRow {
  Method method;
  double density = 0.0;
  double lambda = 0.0;
  double epsilon = 0.0;
  int trials = 0;
  double mse_mean = 0.0;
  double mse_std = 0.0;
  double iter_mean = 0.0;
  double iter_median = 0.0;
};

std::vector<SummaryRow> summarize(const ResultTable& table);

/// CSV emission. All files have a documented header row and fixed 17
/// significant digit formatting so identical tables produce identical bytes.
void write_result_csv(const ResultTable& table, const std::string& path);
void write_timing_csv(const ResultTable& table, const std::string& path);
void write_best_csv(const std::vector<BestParams>& best, const std::string& path);
void write_summary_csv(const std::vector<SummaryRow>& rows, const std::string& path);
void write_iteration_csv(const std::vector<IterationPair>& pairs, const std::string& path);

ResultTable read_result_csv(const std::string& path);
std::vector<IterationPair> read_iteration_csv(const std::string& path);
std::vector<BestParams> read_best_csv(const std::string& path);

double median_int(std::vector<int> values);

}  // namespace tvgsr
