#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <memory>
#include <string>

namespace tvgsr {

/// Default size cap for dense eigendecompositions.
inline constexpr int kDenseEigCap = 2000;

/// Full spectrum, eigenvalues ascending, eigenvectors orthonormal columns.
struct SpectralDecomp {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
};

SpectralDecomp dense_eig(const Eigen::MatrixXd& sym, int cap = kDenseEigCap);
SpectralDecomp dense_eig(const Eigen::SparseMatrix<double>& sym, int cap = kDenseEigCap);

/// (L + eps*I)^beta as an operator on N x m matrices.
///
/// beta = 1 applies one sparse matvec per column; integer beta >= 0 repeats
/// it; fractional (or negative) beta goes through the dense spectral
/// decomposition, which requires N <= cap. eps = 0 with beta < 0 is singular.
class ShiftedOperator {
 public:
  ShiftedOperator(const Eigen::SparseMatrix<double>& laplacian, double epsilon,
                  double beta, int dense_cap = kDenseEigCap);

  Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;

  double epsilon() const { return epsilon_; }
  double beta() const { return beta_; }
  int size() const { return static_cast<int>(shifted_.rows()); }

  enum class Strategy { SparseBeta1, RepeatedSparse, DenseSpectral };
  Strategy strategy() const { return strategy_; }

 private:
  Eigen::SparseMatrix<double> shifted_;  // L + eps*I
  double epsilon_;
  double beta_;
  Strategy strategy_;
  std::shared_ptr<const SpectralDecomp> decomp_;  // only for DenseSpectral
};

/// Largest (or smallest) eigenvalue of a symmetric PSD operator to relative
/// accuracy tol. Largest runs power iteration; smallest runs power iteration
/// on lmax*I - A, falling back to a dense solve below the cap. Throws
/// EstimationFailed (with the best estimate attached) past the iteration cap.
double largest_eigenvalue(const Eigen::SparseMatrix<double>& sym, double tol = 1e-8);
double smallest_eigenvalue(const Eigen::SparseMatrix<double>& sym, double tol = 1e-8,
                           int dense_cap = kDenseEigCap);

/// Conditioning of L + eps*I against the perturbation bounds.
/// With Psi = eps*I the bounds are lower = lmax(L+eps*I)/eps and
/// upper = (lmax(L)+eps)/lmin(L+eps*I); the report asserts
/// lower <= kappa <= upper. kappa_laplacian is +inf because the first
/// Laplacian eigenvalue is zero.
struct PerturbationReport {
  double epsilon = 0.0;
  double lambda_min = 0.0;       // smallest eigenvalue of L
  double lambda_max = 0.0;       // largest eigenvalue of L
  double kappa_laplacian = 0.0;  // +inf when lambda_min = 0
  double kappa_shifted = 0.0;    // (lambda_max+eps)/(lambda_min+eps)
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  bool weyl_ok = false;
};

PerturbationReport condition_number_shifted(const Eigen::SparseMatrix<double>& laplacian,
                                            double epsilon, int dense_cap = kDenseEigCap);

/// Flat "key = value" text block for the conditioning CLI subcommand.
std::string format_report(const PerturbationReport& report);

/// Eigenvalue interlacing check for a Hermitian sum: with eigenvalues
/// lambda_i of L, psi_i of Psi and nu_i of L+Psi (all ascending),
/// lambda_i + psi_1 <= nu_i <= lambda_i + psi_N must hold for every i.
struct WeylReport {
  bool ok = true;
  int violating_index = -1;       // first index breaking an inequality
  double min_lower_margin = 0.0;  // min_i (nu_i - lambda_i - psi_1)
  double min_upper_margin = 0.0;  // min_i (lambda_i + psi_N - nu_i)
};

WeylReport weyl_check(const Eigen::MatrixXd& l, const Eigen::MatrixXd& psi,
                      double slack = 1e-9);

/// Condition numbers of the two Hessian regularizer terms,
/// kappa(T (x) L) vs kappa(T (x) (L+eps*I)) with T the temporal
/// second-difference factor. The M x M product D_h D_h^T is singular (its
/// rows sum to zero), so the temporal factor's kappa is taken over the
/// nonzero spectrum, i.e. the spectrum of the invertible (M-1) x (M-1) Gram
/// matrix D_h^T D_h. kappa_qiu is +inf because lambda_1(L) = 0.
struct HessianConditionReport {
  double kappa_temporal = 0.0;  // ratio of extreme nonzero eigenvalues of D_h D_h^T
  double kappa_laplacian = 0.0;
  double kappa_shifted = 0.0;
  double kappa_qiu = 0.0;      // kappa_temporal * kappa_laplacian (inf)
  double kappa_sobolev = 0.0;  // kappa_temporal * kappa_shifted
};

HessianConditionReport hessian_condition_compare(const Eigen::SparseMatrix<double>& laplacian,
                                                 int n_steps, double lambda, double epsilon,
                                                 int dense_cap = kDenseEigCap);

/// Dense (M-1) x (M-1) Gram matrix D_h^T D_h (tridiagonal [-1, 2, -1]).
/// Invertible for every M >= 2; its spectrum equals the nonzero spectrum of
/// D_h D_h^T.
Eigen::MatrixXd dense_temporal_gram(int n_steps);

}  // namespace tvgsr
