#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <memory>
#include <string>
#include <vector>

#include "tvgsr/geo_graph.hpp"
#include "tvgsr/spectral.hpp"
#include "tvgsr/tv_signal.hpp"

namespace tvgsr {

enum class Variant {
  Qiu,      // Laplacian quadratic-form regularizer (eps = 0, beta = 1)
  Sobolev,  // shifted regularizer (L + eps*I)^beta
};

/// One reconstruction instance: minimize
///   1/2 ||J .* X - Y||_F^2 + lambda/2 tr((X D_h)^T (L+eps*I)^beta (X D_h)).
/// The Qiu variant is the eps = 0, beta = 1 special case and shares the same
/// operator path, so its applications are bit-identical to a Sobolev problem
/// configured with eps = 0, beta = 1.
class ReconProblem {
 public:
  struct Options {
    double lambda = 1.0;
    double epsilon = 0.0;
    double beta = 1.0;
    double tol = 1e-7;   // relative residual ||H X - Y||_F / ||Y||_F
    int max_iters = 0;   // 0 means the 20*N*M default cap
    Variant variant = Variant::Sobolev;
    int dense_cap = kDenseEigCap;
  };

  ReconProblem(const Eigen::SparseMatrix<double>& laplacian, SamplingMask mask,
               const Options& opts);

  double lambda() const { return lambda_; }
  double epsilon() const { return shifted_.epsilon(); }
  double beta() const { return shifted_.beta(); }
  double tol() const { return tol_; }
  int max_iters() const { return max_iters_; }
  Variant variant() const { return variant_; }
  int n_nodes() const { return static_cast<int>(mask_.mask.rows()); }
  int n_steps() const { return static_cast<int>(mask_.mask.cols()); }
  const SamplingMask& mask() const { return mask_; }
  const ShiftedOperator& shifted() const { return shifted_; }

  /// True when eps = 0 and some node is never sampled, in which case the
  /// stationarity system is singular along that node's temporally constant
  /// direction.
  bool possibly_singular() const;

 private:
  Eigen::SparseMatrix<double> laplacian_;
  SamplingMask mask_;
  double lambda_;
  double tol_;
  int max_iters_;
  Variant variant_;
  ShiftedOperator shifted_;
};

/// Objective value at X.
double objective(const ReconProblem& problem, const TvSignal& x);

/// Gradient J .* X - Y + lambda (L+eps*I)^beta X (D_h D_h^T).
Eigen::MatrixXd gradient(const ReconProblem& problem, const TvSignal& x);

/// Hessian action J .* V + lambda (L+eps*I)^beta V (D_h D_h^T).
Eigen::MatrixXd hessian_apply(const ReconProblem& problem, const Eigen::MatrixXd& v);

struct SolveReport {
  TvSignal x_hat;
  int iterations = 0;
  std::vector<double> residual_history;  // relative residual after each iteration
  double objective_value = 0.0;
  bool converged = false;
  bool possibly_singular = false;
};

/// Conjugate gradient on the stationarity system H X = Y starting from
/// X0 = Y. Stops at relative residual <= tol or max_iters; running out of
/// iterations yields a non-converged report, not an exception. A NaN
/// residual throws NumericalFailure.
SolveReport solve(const ReconProblem& problem);

/// Distance-weighted k-nearest-sampled-neighbour interpolation, the
/// clearly-labeled stand-in for a Voronoi-based natural-neighbour baseline.
/// Each unsampled entry (i,t) takes the 1/d^power weighted mean of the k
/// nearest nodes sampled at time t; a zero-distance sampled neighbour wins
/// outright. Sampled entries keep their observed value.
TvSignal idw_baseline(const NodeTable& nodes, const SamplingMask& mask, int k = 10,
                      double power = 2.0,
                      DistanceMetric metric = DistanceMetric::EuclideanDegrees);

/// Writes "iteration,residual" CSV plus a short summary text block.
void write_solve_report(const SolveReport& report, const std::string& csv_path,
                        const std::string& summary_path);

}  // namespace tvgsr
