#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <string>
#include <vector>

namespace tvgsr {

/// A time-varying graph signal: column t is the graph signal snapshot at
/// time step t, so the matrix is N x M for N nodes and M uniform steps.
using TvSignal = Eigen::MatrixXd;

/// Binary sampling matrix J plus the observed values Y = J .* X_true.
/// Y(i,t) = 0 wherever J(i,t) = 0 by construction.
struct SamplingMask {
  Eigen::MatrixXd mask;      // entries in {0,1}
  Eigen::MatrixXd observed;  // Y
};

/// X * D_h: column t equals x_{t+1} - x_t. Requires M >= 2.
Eigen::MatrixXd temporal_diff(const TvSignal& x);

/// Z * D_h^T for an N x (M-1) matrix Z (the adjoint of temporal_diff).
Eigen::MatrixXd temporal_diff_adjoint(const Eigen::MatrixXd& z, int n_steps);

/// X * (D_h D_h^T) applied as a three-point stencil over columns; the
/// M x M product D_h D_h^T is tridiagonal with diagonal [1,2,...,2,1] and
/// off-diagonal -1, and is never materialized here.
Eigen::MatrixXd temporal_second_diff(const TvSignal& x);

/// Dense M x (M-1) temporal difference operator. Kept for test oracles and
/// for small-M dense constructions; the solvers use the stencil forms above.
Eigen::MatrixXd dense_temporal_diff(int n_steps);

/// Smoothness of a time-varying signal: tr(X^T L X).
double smoothness_s2(const TvSignal& x, const Eigen::SparseMatrix<double>& laplacian);

/// tr(X^T (L+eps*I)^beta X). beta = 1 runs sparsely as tr(X^T L X) +
/// eps*||X||_F^2; other beta route through the spectral matrix function.
double sobolev_seminorm_tv(const TvSignal& x, const Eigen::SparseMatrix<double>& laplacian,
                           double epsilon, double beta);

enum class MseScope { All, UnsampledOnly };

/// Mean squared entrywise error over the chosen entry set. `mask` is required
/// for UnsampledOnly and the entry set must be nonempty.
double mse(const TvSignal& x_hat, const TvSignal& x_true, MseScope scope = MseScope::All,
           const SamplingMask* mask = nullptr);

/// CSV layout: first row = time labels, first column = node labels, cell
/// (i,t) = value at 17 significant digits so round-trips are bit-exact.
/// Labels containing commas or quotes are quoted.
void write_signal_csv(const TvSignal& x, const std::vector<std::string>& node_labels,
                      const std::vector<std::string>& time_labels, const std::string& path);

struct SignalCsv {
  TvSignal values;
  std::vector<std::string> node_labels;
  std::vector<std::string> time_labels;
};

SignalCsv read_signal_csv(const std::string& path);

/// Default labels when a signal has no provenance: "0","1",... for nodes and
/// time steps alike.
std::vector<std::string> index_labels(int count);

}  // namespace tvgsr
