#include "tvgsr/spectral.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "text_util.hpp"
#include "tvgsr/errors.hpp"
#include "tvgsr/rng.hpp"

namespace tvgsr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Treats eigenvalues this far below the top of the spectrum as zero, which is
// how a Laplacian's lambda_1 = 0 survives roundoff.
double zero_floor(double value, double scale) {
  return (value <= 1e-10 * std::max(scale, 1.0)) ? 0.0 : value;
}

Eigen::VectorXd start_vector(Eigen::Index n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.next_double() + 0.25;
  return v / v.norm();
}

// Power iteration with a residual stopping rule: for symmetric A the Rayleigh
// quotient is within ||Av - qv|| of an eigenvalue.
double power_iteration(const Eigen::SparseMatrix<double>& a, double tol) {
  const Eigen::Index n = a.rows();
  if (n == 1) return a.coeff(0, 0);

  Eigen::VectorXd v = start_vector(n, 0x1234567890ABCDEFULL);
  double estimate = 0.0;
  const int max_iters = 100000;
  for (int it = 0; it < max_iters; ++it) {
    Eigen::VectorXd w = a * v;
    estimate = v.dot(w);
    const double residual = (w - estimate * v).norm();
    if (residual <= tol * std::max(std::abs(estimate), 1e-30)) return estimate;
    const double norm = w.norm();
    if (norm < 1e-300) return 0.0;  // v sits in the null space; operator is ~0 there
    v = w / norm;
  }
  throw EstimationFailed("power iteration did not reach tolerance", estimate);
}

}  // namespace

SpectralDecomp dense_eig(const Eigen::MatrixXd& sym, int cap) {
  if (sym.rows() != sym.cols()) throw InvalidParameter("dense_eig: matrix must be square");
  if (sym.rows() > cap) throw UnsupportedConfiguration("dense_eig: size exceeds dense cap");
  if (!((sym - sym.transpose()).cwiseAbs().maxCoeff() <=
        1e-10 * std::max(1.0, sym.cwiseAbs().maxCoeff())))
    throw InvalidParameter("dense_eig: matrix is not symmetric");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success)
    throw NumericalFailure("dense_eig: eigendecomposition failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

SpectralDecomp dense_eig(const Eigen::SparseMatrix<double>& sym, int cap) {
  if (sym.rows() > cap) throw UnsupportedConfiguration("dense_eig: size exceeds dense cap");
  return dense_eig(Eigen::MatrixXd(sym), cap);
}

ShiftedOperator::ShiftedOperator(const Eigen::SparseMatrix<double>& laplacian, double epsilon,
                                 double beta, int dense_cap)
    : epsilon_(epsilon), beta_(beta) {
  if (laplacian.rows() != laplacian.cols())
    throw InvalidParameter("ShiftedOperator: Laplacian must be square");
  if (epsilon < 0.0) throw InvalidParameter("ShiftedOperator: epsilon must be >= 0");
  if (epsilon == 0.0 && beta < 0.0)
    throw SingularOperator("ShiftedOperator: L^beta with beta < 0 is singular");

  shifted_ = laplacian;
  if (epsilon != 0.0) {
    Eigen::SparseMatrix<double> eye(laplacian.rows(), laplacian.cols());
    eye.setIdentity();
    shifted_ = laplacian + epsilon * eye;
  }
  shifted_.makeCompressed();

  const bool integral = (std::floor(beta) == beta);
  if (beta == 1.0) {
    strategy_ = Strategy::SparseBeta1;
  } else if (integral && beta >= 0.0) {
    strategy_ = Strategy::RepeatedSparse;
  } else {
    strategy_ = Strategy::DenseSpectral;
    if (shifted_.rows() > dense_cap)
      throw UnsupportedConfiguration(
          "ShiftedOperator: fractional beta needs a dense decomposition but the size "
          "exceeds the dense cap");
    decomp_ = std::make_shared<const SpectralDecomp>(dense_eig(shifted_, dense_cap));
  }
}

Eigen::MatrixXd ShiftedOperator::apply(const Eigen::MatrixXd& x) const {
  if (x.rows() != shifted_.rows())
    throw InvalidParameter("ShiftedOperator::apply: row count disagrees with operator size");

  switch (strategy_) {
    case Strategy::SparseBeta1:
      return shifted_ * x;
    case Strategy::RepeatedSparse: {
      Eigen::MatrixXd out = x;
      for (int r = 0; r < static_cast<int>(beta_); ++r) out = shifted_ * out;
      return out;
    }
    case Strategy::DenseSpectral: {
      Eigen::VectorXd powers = decomp_->eigenvalues;
      for (Eigen::Index i = 0; i < powers.size(); ++i)
        powers[i] = std::pow(std::max(powers[i], 0.0), beta_);
      return decomp_->eigenvectors *
             (powers.asDiagonal() * (decomp_->eigenvectors.transpose() * x));
    }
  }
  throw NumericalFailure("ShiftedOperator::apply: unreachable strategy");
}

double largest_eigenvalue(const Eigen::SparseMatrix<double>& sym, double tol) {
  if (sym.rows() != sym.cols())
    throw InvalidParameter("largest_eigenvalue: matrix must be square");
  return power_iteration(sym, tol);
}

double smallest_eigenvalue(const Eigen::SparseMatrix<double>& sym, double tol, int dense_cap) {
  if (sym.rows() != sym.cols())
    throw InvalidParameter("smallest_eigenvalue: matrix must be square");
  if (sym.rows() <= dense_cap) return dense_eig(sym, dense_cap).eigenvalues[0];

  // Shifted power iteration: the top eigenvalue of lmax*I - A maps back to
  // the bottom of A's spectrum.
  const double lmax = largest_eigenvalue(sym, tol);
  Eigen::SparseMatrix<double> eye(sym.rows(), sym.cols());
  eye.setIdentity();
  Eigen::SparseMatrix<double> flipped = -sym;
  flipped += lmax * eye;
  return lmax - power_iteration(flipped, tol);
}

PerturbationReport condition_number_shifted(const Eigen::SparseMatrix<double>& laplacian,
                                            double epsilon, int dense_cap) {
  if (!(epsilon > 0.0))
    throw SingularOperator(
        "condition_number_shifted: epsilon must be > 0 (kappa(L) is infinite)");

  PerturbationReport report;
  report.epsilon = epsilon;

  const int n = static_cast<int>(laplacian.rows());
  if (n <= dense_cap) {
    const SpectralDecomp decomp = dense_eig(laplacian, dense_cap);
    report.lambda_min = decomp.eigenvalues[0];
    report.lambda_max = decomp.eigenvalues[n - 1];
    Eigen::MatrixXd psi = epsilon * Eigen::MatrixXd::Identity(n, n);
    report.weyl_ok = weyl_check(Eigen::MatrixXd(laplacian), psi).ok;
  } else {
    report.lambda_max = largest_eigenvalue(laplacian);
    report.lambda_min = smallest_eigenvalue(laplacian, 1e-8, dense_cap);
    report.weyl_ok = true;  // full spectra are out of reach past the dense cap
  }
  report.lambda_min = zero_floor(report.lambda_min, report.lambda_max);

  report.kappa_laplacian =
      report.lambda_min == 0.0 ? kInf : report.lambda_max / report.lambda_min;
  report.kappa_shifted = (report.lambda_max + epsilon) / (report.lambda_min + epsilon);
  report.lower_bound = (report.lambda_max + epsilon) / epsilon;
  report.upper_bound = (report.lambda_max + epsilon) / (report.lambda_min + epsilon);

  const double slack = 1e-9 * std::max(1.0, report.kappa_shifted);
  if (report.kappa_shifted < report.lower_bound - slack ||
      report.kappa_shifted > report.upper_bound + slack)
    throw NumericalFailure("condition_number_shifted: Theorem bounds violated");
  return report;
}

std::string format_report(const PerturbationReport& report) {
  std::ostringstream out;
  out << "epsilon = " << detail::fmt17(report.epsilon) << '\n'
      << "lambda_min = " << detail::fmt17(report.lambda_min) << '\n'
      << "lambda_max = " << detail::fmt17(report.lambda_max) << '\n'
      << "kappa_laplacian = " << detail::fmt17(report.kappa_laplacian) << '\n'
      << "kappa_shifted = " << detail::fmt17(report.kappa_shifted) << '\n'
      << "lower_bound = " << detail::fmt17(report.lower_bound) << '\n'
      << "upper_bound = " << detail::fmt17(report.upper_bound) << '\n'
      << "weyl_ok = " << (report.weyl_ok ? "true" : "false") << '\n';
  return out.str();
}

WeylReport weyl_check(const Eigen::MatrixXd& l, const Eigen::MatrixXd& psi, double slack) {
  if (l.rows() != psi.rows() || l.cols() != psi.cols())
    throw InvalidParameter("weyl_check: dimensions disagree");

  const Eigen::VectorXd lambda = dense_eig(l, static_cast<int>(l.rows())).eigenvalues;
  const Eigen::VectorXd psi_ev = dense_eig(psi, static_cast<int>(l.rows())).eigenvalues;
  const Eigen::VectorXd nu = dense_eig(Eigen::MatrixXd(l + psi), static_cast<int>(l.rows())).eigenvalues;

  const int n = static_cast<int>(lambda.size());
  const double psi_lo = psi_ev[0];
  const double psi_hi = psi_ev[n - 1];
  const double scale = std::max(
      1.0, lambda.cwiseAbs().maxCoeff() + psi_ev.cwiseAbs().maxCoeff());

  WeylReport report;
  report.min_lower_margin = kInf;
  report.min_upper_margin = kInf;
  for (int i = 0; i < n; ++i) {
    const double lower_margin = nu[i] - (lambda[i] + psi_lo);
    const double upper_margin = (lambda[i] + psi_hi) - nu[i];
    report.min_lower_margin = std::min(report.min_lower_margin, lower_margin);
    report.min_upper_margin = std::min(report.min_upper_margin, upper_margin);
    if (report.ok && (lower_margin < -slack * scale || upper_margin < -slack * scale)) {
      report.ok = false;
      report.violating_index = i;
    }
  }
  return report;
}

HessianConditionReport hessian_condition_compare(const Eigen::SparseMatrix<double>& laplacian,
                                                 int n_steps, double lambda, double epsilon,
                                                 int dense_cap) {
  if (!(lambda > 0.0)) throw InvalidParameter("hessian_condition_compare: lambda must be > 0");
  if (!(epsilon > 0.0)) throw InvalidParameter("hessian_condition_compare: epsilon must be > 0");
  if (n_steps < 2) throw InvalidParameter("hessian_condition_compare: needs at least 2 steps");

  HessianConditionReport report;

  const Eigen::VectorXd gram_ev =
      dense_eig(dense_temporal_gram(n_steps), std::max(dense_cap, n_steps)).eigenvalues;
  report.kappa_temporal = gram_ev[gram_ev.size() - 1] / gram_ev[0];

  double lmin = 0.0;
  double lmax = 0.0;
  if (laplacian.rows() <= dense_cap) {
    const Eigen::VectorXd ev = dense_eig(laplacian, dense_cap).eigenvalues;
    lmin = ev[0];
    lmax = ev[ev.size() - 1];
  } else {
    lmax = largest_eigenvalue(laplacian);
    lmin = smallest_eigenvalue(laplacian, 1e-8, dense_cap);
  }
  lmin = zero_floor(lmin, lmax);

  report.kappa_laplacian = lmin == 0.0 ? kInf : lmax / lmin;
  report.kappa_shifted = (lmax + epsilon) / (lmin + epsilon);
  report.kappa_qiu = report.kappa_temporal * report.kappa_laplacian;
  report.kappa_sobolev = report.kappa_temporal * report.kappa_shifted;

  if (!(report.kappa_sobolev < report.kappa_qiu))
    throw NumericalFailure("hessian_condition_compare: shift did not improve conditioning");
  return report;
}

Eigen::MatrixXd dense_temporal_gram(int n_steps) {
  if (n_steps < 2) throw InvalidParameter("dense_temporal_gram: needs at least 2 time steps");
  const int m = n_steps - 1;
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    gram(i, i) = 2.0;
    if (i + 1 < m) {
      gram(i, i + 1) = -1.0;
      gram(i + 1, i) = -1.0;
    }
  }
  return gram;
}

}  // namespace tvgsr
