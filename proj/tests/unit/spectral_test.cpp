#include <doctest.h>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cmath>
#include <string>

#include "support/fixtures.hpp"
#include "tvgsr/errors.hpp"
#include "tvgsr/geo_graph.hpp"
#include "tvgsr/spectral.hpp"
#include "tvgsr/tv_signal.hpp"

using namespace tvgsr;
namespace tt = tvgsr::testing;

namespace {

Eigen::MatrixXd random_symmetric(int n, std::uint64_t seed) {
  const Eigen::MatrixXd a = tt::random_matrix(n, n, seed);
  return 0.5 * (a + a.transpose());
}

double extreme_ratio(const Eigen::VectorXd& ascending) {
  return ascending[ascending.size() - 1] / ascending[0];
}

}  // namespace

TEST_CASE("dense_eig recovers known graph spectra") {
  Eigen::MatrixXd path2(2, 2);
  path2 << 1, -1, -1, 1;
  const SpectralDecomp d2 = dense_eig(path2);
  CHECK(d2.eigenvalues[0] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(d2.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-12));

  Eigen::MatrixXd k3(3, 3);
  k3 << 2, -1, -1, -1, 2, -1, -1, -1, 2;
  const SpectralDecomp d3 = dense_eig(k3);
  CHECK(d3.eigenvalues[0] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(d3.eigenvalues[1] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(d3.eigenvalues[2] == doctest::Approx(3.0).epsilon(1e-12));

  // Orthonormal eigenvectors, and A v = lambda v columnwise.
  const Eigen::MatrixXd gram = d3.eigenvectors.transpose() * d3.eigenvectors;
  CHECK((gram - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
  const Eigen::MatrixXd resid =
      k3 * d3.eigenvectors - d3.eigenvectors * d3.eigenvalues.asDiagonal();
  CHECK(resid.cwiseAbs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(dense_eig(Eigen::MatrixXd::Zero(2, 3)), InvalidParameter);
  CHECK_THROWS_AS(dense_eig(Eigen::MatrixXd::Zero(5, 5), 4), UnsupportedConfiguration);
  Eigen::MatrixXd asym(2, 2);
  asym << 0, 1, 0, 0;
  CHECK_THROWS_AS(dense_eig(asym), InvalidParameter);
}

TEST_CASE("ShiftedOperator strategies agree with the dense spectral oracle") {
  const Eigen::SparseMatrix<double> l = tt::random_laplacian(14, 41);
  const Eigen::MatrixXd ld(l);
  const Eigen::MatrixXd x = tt::random_matrix(14, 6, 42);
  const double eps = 0.8;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
      ld + eps * Eigen::MatrixXd::Identity(14, 14));

  auto oracle = [&](double beta) {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(14, 14);
    for (int q = 0; q < 14; ++q)
      b += std::pow(eig.eigenvalues()[q], beta) * eig.eigenvectors().col(q) *
           eig.eigenvectors().col(q).transpose();
    return (b * x).eval();
  };

  for (const double beta : {0.0, 1.0, 2.0, 3.0, 0.5, 1.5, -1.0}) {
    ShiftedOperator op(l, eps, beta);
    const Eigen::MatrixXd got = op.apply(x);
    const Eigen::MatrixXd want = oracle(beta);
    CHECK((got - want).norm() / want.norm() < 1e-9);
  }

  CHECK(ShiftedOperator(l, eps, 1.0).strategy() == ShiftedOperator::Strategy::SparseBeta1);
  CHECK(ShiftedOperator(l, eps, 0.0).strategy() == ShiftedOperator::Strategy::RepeatedSparse);
  CHECK(ShiftedOperator(l, eps, 3.0).strategy() == ShiftedOperator::Strategy::RepeatedSparse);
  CHECK(ShiftedOperator(l, eps, 0.5).strategy() == ShiftedOperator::Strategy::DenseSpectral);
  CHECK(ShiftedOperator(l, eps, -1.0).strategy() == ShiftedOperator::Strategy::DenseSpectral);

  CHECK_THROWS_AS(ShiftedOperator(l, -0.1, 1.0), InvalidParameter);
  CHECK_THROWS_AS(ShiftedOperator(l, 0.0, -1.0), SingularOperator);
  CHECK_THROWS_AS(ShiftedOperator(l, eps, 0.5, 8), UnsupportedConfiguration);
  CHECK_THROWS_AS(ShiftedOperator(l, eps, 1.0).apply(tt::random_matrix(13, 2, 1)),
                  InvalidParameter);

  // eps = 0 with nonnegative integer beta stays sparse and equals L^beta.
  ShiftedOperator squared(l, 0.0, 2.0);
  CHECK((squared.apply(x) - ld * (ld * x)).norm() / x.norm() < 1e-10);
}

TEST_CASE("iterative extremes match dense eigenvalues") {
  const Eigen::SparseMatrix<double> l = tt::random_laplacian(40, 43);
  const SpectralDecomp full = dense_eig(l);
  const double lmax = full.eigenvalues[39];

  CHECK(std::abs(largest_eigenvalue(l, 1e-10) - lmax) / lmax < 1e-6);

  // Smallest eigenvalue of a Laplacian is 0; of the shifted operator, eps.
  CHECK(std::abs(smallest_eigenvalue(l)) < 1e-7 * lmax);
  Eigen::SparseMatrix<double> shifted = l;
  Eigen::SparseMatrix<double> identity(40, 40);
  identity.setIdentity();
  shifted += 0.3 * identity;
  CHECK(smallest_eigenvalue(shifted) == doctest::Approx(0.3).epsilon(1e-6));

  // Force the iterative path past the dense fallback cap.
  CHECK(std::abs(smallest_eigenvalue(shifted, 1e-10, 8) - 0.3) < 1e-5);

  // An impossible tolerance exhausts the iteration budget but still carries
  // the best estimate out.
  try {
    largest_eigenvalue(l, 0.0);
    FAIL("expected EstimationFailed");
  } catch (const EstimationFailed& e) {
    CHECK(std::abs(e.best_estimate - lmax) / lmax < 1e-6);
  }
}

TEST_CASE("condition_number_shifted hits the Theorem bounds with equality") {
  const Eigen::SparseMatrix<double> l = tt::random_laplacian(20, 44);
  const SpectralDecomp full = dense_eig(l);
  const double lmax = full.eigenvalues[19];

  const PerturbationReport r = condition_number_shifted(l, 1.5);
  CHECK(r.epsilon == 1.5);
  CHECK(r.lambda_min == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
  CHECK(r.lambda_max == doctest::Approx(lmax).epsilon(1e-9));
  CHECK(std::isinf(r.kappa_laplacian));
  // For a Laplacian lambda_1 = 0, so lower = kappa = upper.
  CHECK(r.kappa_shifted == doctest::Approx((lmax + 1.5) / 1.5).epsilon(1e-9));
  CHECK(r.lower_bound == doctest::Approx(r.kappa_shifted).epsilon(1e-9));
  CHECK(r.upper_bound == doctest::Approx(r.kappa_shifted).epsilon(1e-9));
  CHECK(r.weyl_ok);

  // kappa strictly decreases as the shift grows.
  double prev = r.kappa_shifted;
  for (const double eps : {2.0, 5.0, 10.0, 50.0}) {
    const double next = condition_number_shifted(l, eps).kappa_shifted;
    CHECK(next < prev);
    prev = next;
  }

  CHECK_THROWS_AS(condition_number_shifted(l, 0.0), SingularOperator);
  CHECK_THROWS_AS(condition_number_shifted(l, -1.0), SingularOperator);

  const std::string text = format_report(r);
  CHECK(text.find("kappa_shifted = ") != std::string::npos);
  CHECK(text.find("weyl_ok = true") != std::string::npos);
  CHECK(text.find("kappa_laplacian = inf") != std::string::npos);
}

TEST_CASE("weyl_check holds on identity shifts and random Hermitian pairs") {
  const Eigen::MatrixXd l(tt::random_laplacian(12, 45));
  const Eigen::MatrixXd psi = 0.7 * Eigen::MatrixXd::Identity(12, 12);
  const WeylReport tight = weyl_check(l, psi);
  CHECK(tight.ok);
  // With Psi = c*I both inequalities are equalities.
  CHECK(std::abs(tight.min_lower_margin) < 1e-9);
  CHECK(std::abs(tight.min_upper_margin) < 1e-9);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int n = 5 + static_cast<int>(seed % 8);
    const Eigen::MatrixXd a = random_symmetric(n, 2 * seed + 1);
    const Eigen::MatrixXd b = random_symmetric(n, 3 * seed + 2);
    const WeylReport r = weyl_check(a, b);
    CHECK(r.ok);
    CHECK(r.violating_index == -1);
    CHECK(r.min_lower_margin > -1e-9);
    CHECK(r.min_upper_margin > -1e-9);
  }

  CHECK_THROWS_AS(weyl_check(l, Eigen::MatrixXd::Identity(3, 3)), InvalidParameter);
}

TEST_CASE("temporal Gram spectrum and the shifted Kronecker condition numbers") {
  // Gram eigenvalues are 2 - 2cos(k*pi/M); their extreme ratio is
  // cot^2(pi/(2M)).
  for (const int m : {3, 7, 12}) {
    const SpectralDecomp g = dense_eig(dense_temporal_gram(m));
    for (int k = 1; k < m; ++k) {
      const double want = 2.0 - 2.0 * std::cos(k * 3.14159265358979323846 / m);
      CHECK(g.eigenvalues[k - 1] == doctest::Approx(want).epsilon(1e-10));
    }
    const double cot = 1.0 / std::tan(3.14159265358979323846 / (2.0 * m));
    CHECK(extreme_ratio(g.eigenvalues) == doctest::Approx(cot * cot).epsilon(1e-9));
  }

  // The Gram spectrum is exactly the nonzero spectrum of D_h D_h^T.
  const int m = 9;
  const Eigen::MatrixXd d = dense_temporal_diff(m);
  const SpectralDecomp outer = dense_eig((d * d.transpose()).eval());
  const SpectralDecomp gram = dense_eig(dense_temporal_gram(m));
  CHECK(std::abs(outer.eigenvalues[0]) < 1e-12);
  for (int k = 1; k < m; ++k)
    CHECK(outer.eigenvalues[k] == doctest::Approx(gram.eigenvalues[k - 1]).epsilon(1e-9));

  // kappa(A (x) B) = kappa(A) * kappa(B) on the explicit Kronecker product.
  const Eigen::MatrixXd a = dense_temporal_gram(5);
  Eigen::MatrixXd b(tt::random_laplacian(10, 46));
  b += 0.6 * Eigen::MatrixXd::Identity(10, 10);
  const double ka = extreme_ratio(dense_eig(a).eigenvalues);
  const double kb = extreme_ratio(dense_eig(b).eigenvalues);
  const double kab = extreme_ratio(dense_eig(tt::kron(a, b)).eigenvalues);
  CHECK(std::abs(kab - ka * kb) / (ka * kb) < 1e-8);
}

TEST_CASE("hessian_condition_compare quantifies the shift's conditioning win") {
  const Eigen::SparseMatrix<double> l = tt::random_laplacian(16, 47);
  const SpectralDecomp full = dense_eig(l);
  const double lmax = full.eigenvalues[15];

  const HessianConditionReport r = hessian_condition_compare(l, 3, 1.0, 2.0);
  CHECK(r.kappa_temporal == doctest::Approx(3.0).epsilon(1e-9));  // cot^2(pi/6)
  CHECK(std::isinf(r.kappa_laplacian));
  CHECK(std::isinf(r.kappa_qiu));
  CHECK(r.kappa_shifted == doctest::Approx((lmax + 2.0) / 2.0).epsilon(1e-8));
  CHECK(r.kappa_sobolev == doctest::Approx(3.0 * (lmax + 2.0) / 2.0).epsilon(1e-8));
  CHECK(r.kappa_sobolev < r.kappa_qiu);

  const HessianConditionReport r12 = hessian_condition_compare(l, 12, 1.0, 2.0);
  const double cot = 1.0 / std::tan(3.14159265358979323846 / 24.0);
  CHECK(r12.kappa_temporal == doctest::Approx(cot * cot).epsilon(1e-9));

  CHECK_THROWS_AS(hessian_condition_compare(l, 3, 0.0, 2.0), InvalidParameter);
  CHECK_THROWS_AS(hessian_condition_compare(l, 3, 1.0, 0.0), InvalidParameter);
  CHECK_THROWS_AS(hessian_condition_compare(l, 1, 1.0, 2.0), InvalidParameter);
}
