#pragma once

// Shared test helpers: scratch directories, random geometries, dense oracles
// built independently of the library code paths they check, and synthetic
// JHU-layout CSV fixtures.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <string>
#include <vector>

#include "tvgsr/geo_graph.hpp"
#include "tvgsr/sampling.hpp"
#include "tvgsr/tv_signal.hpp"

namespace tvgsr::testing {

/// Fresh scratch directory under the system temp root.
std::string scratch_dir();

NodeTable random_node_table(int n, std::uint64_t seed);

/// Laplacian of a random geometric graph, built through the library graph
/// path (the instances under test are "random PSD Laplacians from the graph
/// builder").
Eigen::SparseMatrix<double> random_laplacian(int n, std::uint64_t seed, int k = 4);

/// Brute-force symmetrized kNN edge oracle, quadratic and independent of the
/// library implementation.
std::vector<std::pair<int, int>> dense_knn_oracle(const NodeTable& nodes, int k,
                                                  DistanceMetric metric);

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// Dense stationarity operator diag(vec(J)) + lambda * (D_h D_h^T) (x) B for
/// column-major vec ordering, with B = (L + eps*I)^beta built spectrally.
Eigen::MatrixXd dense_hessian(const Eigen::MatrixXd& laplacian, const Eigen::MatrixXd& mask,
                              double lambda, double epsilon, double beta);

/// Minimum-norm dense solve of the stationarity system, the oracle for the
/// CG path (the min-norm solution matches CG started from Y because Y lies
/// in the operator's range space).
Eigen::MatrixXd dense_solve_oracle(const Eigen::MatrixXd& laplacian, const SamplingMask& mask,
                                   double lambda, double epsilon, double beta);

/// Random signal and mask helpers.
Eigen::MatrixXd random_matrix(int rows, int cols, std::uint64_t seed);
Eigen::MatrixXd random_mask_matrix(int rows, int cols, double density, std::uint64_t seed);

/// Date labels in the JHU m/d/yy form starting January 22, 2020.
std::vector<std::string> jhu_dates(int n_days);

/// Writes a JHU global-layout fixture: `n_valid` usable rows with epidemic
/// style cumulative counts plus `n_dropped` rows with missing or (0, 0)
/// coordinates. Deterministic in `seed`.
void write_jhu_global_fixture(const std::string& path, int n_valid, int n_days, int n_dropped,
                              std::uint64_t seed);

/// Same for the USA layout (administrative columns and Combined_Key).
void write_jhu_usa_fixture(const std::string& path, int n_valid, int n_days, int n_dropped,
                           std::uint64_t seed);

}  // namespace tvgsr::testing
