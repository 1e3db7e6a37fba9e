#include "tvgsr/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "text_util.hpp"
#include "tvgsr/errors.hpp"

namespace tvgsr {

namespace {

ShiftedOperator make_operator(const Eigen::SparseMatrix<double>& laplacian,
                              const ReconProblem::Options& opts) {
  // The qiu variant is pinned to eps = 0, beta = 1 so both variants share one
  // operator path and their applications stay bit-identical at those values.
  const double eps = opts.variant == Variant::Qiu ? 0.0 : opts.epsilon;
  const double beta = opts.variant == Variant::Qiu ? 1.0 : opts.beta;
  return ShiftedOperator(laplacian, eps, beta, opts.dense_cap);
}

}  // namespace

ReconProblem::ReconProblem(const Eigen::SparseMatrix<double>& laplacian, SamplingMask mask,
                           const Options& opts)
    : laplacian_(laplacian),
      mask_(std::move(mask)),
      lambda_(opts.lambda),
      tol_(opts.tol),
      max_iters_(opts.max_iters),
      variant_(opts.variant),
      shifted_(make_operator(laplacian, opts)) {
  if (laplacian_.rows() != laplacian_.cols())
    throw InvalidParameter("ReconProblem: Laplacian must be square");
  if (mask_.mask.rows() != laplacian_.rows())
    throw InvalidParameter("ReconProblem: mask row count disagrees with graph size");
  if (mask_.mask.rows() != mask_.observed.rows() || mask_.mask.cols() != mask_.observed.cols())
    throw InvalidParameter("ReconProblem: mask and observations disagree in shape");
  if (mask_.mask.cols() < 2)
    throw InvalidParameter("ReconProblem: needs at least 2 time steps");
  if (lambda_ < 0.0) throw InvalidParameter("ReconProblem: lambda must be >= 0");
  if (lambda_ == 0.0 && (mask_.mask.array() == 0.0).any())
    throw InvalidParameter("ReconProblem: lambda = 0 with partial sampling is underdetermined");
  if (!(tol_ > 0.0)) throw InvalidParameter("ReconProblem: tol must be > 0");
  if (max_iters_ < 0) throw InvalidParameter("ReconProblem: max_iters must be >= 0");
  if (max_iters_ == 0) max_iters_ = 20 * n_nodes() * n_steps();
}

bool ReconProblem::possibly_singular() const {
  if (shifted_.epsilon() != 0.0) return false;
  for (Eigen::Index i = 0; i < mask_.mask.rows(); ++i)
    if ((mask_.mask.row(i).array() == 0.0).all()) return true;
  return false;
}

double objective(const ReconProblem& problem, const TvSignal& x) {
  if (x.rows() != problem.mask().mask.rows() || x.cols() != problem.mask().mask.cols())
    throw InvalidParameter("objective: signal shape disagrees with problem");
  const double fidelity =
      (problem.mask().mask.cwiseProduct(x) - problem.mask().observed).squaredNorm();
  const Eigen::MatrixXd diff = temporal_diff(x);
  const double smooth = (diff.cwiseProduct(problem.shifted().apply(diff))).sum();
  const double value = 0.5 * fidelity + 0.5 * problem.lambda() * smooth;
  if (!std::isfinite(value)) throw NumericalFailure("objective: non-finite value");
  return value;
}

Eigen::MatrixXd gradient(const ReconProblem& problem, const TvSignal& x) {
  if (x.rows() != problem.mask().mask.rows() || x.cols() != problem.mask().mask.cols())
    throw InvalidParameter("gradient: signal shape disagrees with problem");
  Eigen::MatrixXd grad = problem.mask().mask.cwiseProduct(x) - problem.mask().observed;
  grad += problem.lambda() *
          temporal_diff_adjoint(problem.shifted().apply(temporal_diff(x)), problem.n_steps());
  return grad;
}

Eigen::MatrixXd hessian_apply(const ReconProblem& problem, const Eigen::MatrixXd& v) {
  if (v.rows() != problem.mask().mask.rows() || v.cols() != problem.mask().mask.cols())
    throw InvalidParameter("hessian_apply: shape disagrees with problem");
  Eigen::MatrixXd out = problem.mask().mask.cwiseProduct(v);
  out += problem.lambda() *
         temporal_diff_adjoint(problem.shifted().apply(temporal_diff(v)), problem.n_steps());
  return out;
}

SolveReport solve(const ReconProblem& problem) {
  const Eigen::MatrixXd& y = problem.mask().observed;
  const double y_norm = y.norm();

  SolveReport report;
  report.possibly_singular = problem.possibly_singular();
  report.x_hat = y;

  if (y_norm == 0.0) {
    // H * 0 = 0 solves the system exactly.
    report.x_hat.setZero();
    report.residual_history.push_back(0.0);
    report.converged = true;
    report.objective_value = objective(problem, report.x_hat);
    return report;
  }

  Eigen::MatrixXd r = y - hessian_apply(problem, report.x_hat);
  double rr = r.squaredNorm();
  double rel = std::sqrt(rr) / y_norm;
  if (!std::isfinite(rel)) throw NumericalFailure("solve: non-finite residual");
  report.residual_history.push_back(rel);

  Eigen::MatrixXd p = r;
  while (rel > problem.tol() && report.iterations < problem.max_iters()) {
    const Eigen::MatrixXd hp = hessian_apply(problem, p);
    const double php = (p.cwiseProduct(hp)).sum();
    if (php <= 0.0) break;  // numerically lost positive definiteness along p
    const double alpha = rr / php;
    report.x_hat += alpha * p;
    r -= alpha * hp;
    const double rr_next = r.squaredNorm();
    rel = std::sqrt(rr_next) / y_norm;
    ++report.iterations;
    if (!std::isfinite(rel)) throw NumericalFailure("solve: non-finite residual");
    report.residual_history.push_back(rel);
    p = r + (rr_next / rr) * p;
    rr = rr_next;
  }

  report.converged = rel <= problem.tol();
  report.objective_value = objective(problem, report.x_hat);
  return report;
}

TvSignal idw_baseline(const NodeTable& nodes, const SamplingMask& mask, int k, double power,
                      DistanceMetric metric) {
  validate_node_table(nodes);
  const int n = nodes.size();
  const int m = static_cast<int>(mask.mask.cols());
  if (mask.mask.rows() != n)
    throw InvalidParameter("idw_baseline: mask row count disagrees with node table");
  if (k < 1) throw InvalidParameter("idw_baseline: k must be >= 1");

  TvSignal out = mask.observed;
  std::vector<int> sampled;
  std::vector<std::pair<double, int>> near;
  for (int t = 0; t < m; ++t) {
    sampled.clear();
    for (int i = 0; i < n; ++i)
      if (mask.mask(i, t) != 0.0) sampled.push_back(i);
    if (sampled.empty())
      throw InvalidParameter("idw_baseline: a time step has no sampled nodes");

    for (int i = 0; i < n; ++i) {
      if (mask.mask(i, t) != 0.0) continue;
      near.clear();
      near.reserve(sampled.size());
      for (int j : sampled)
        near.emplace_back(node_distance(nodes.coords[i], nodes.coords[j], metric), j);
      const auto take = std::min<std::size_t>(k, near.size());
      std::partial_sort(near.begin(), near.begin() + take, near.end());

      double wsum = 0.0;
      double vsum = 0.0;
      bool exact = false;
      for (std::size_t q = 0; q < take; ++q) {
        const auto& [d, j] = near[q];
        if (d == 0.0) {
          out(i, t) = mask.observed(j, t);
          exact = true;
          break;
        }
        const double w = 1.0 / std::pow(d, power);
        wsum += w;
        vsum += w * mask.observed(j, t);
      }
      if (!exact) out(i, t) = vsum / wsum;
    }
  }
  return out;
}

void write_solve_report(const SolveReport& report, const std::string& csv_path,
                        const std::string& summary_path) {
  auto csv = detail::open_output(csv_path);
  csv << "iteration,residual\n";
  for (std::size_t i = 0; i < report.residual_history.size(); ++i)
    csv << i << ',' << detail::fmt17(report.residual_history[i]) << '\n';

  auto summary = detail::open_output(summary_path);
  summary << "iterations = " << report.iterations << '\n'
          << "converged = " << (report.converged ? "true" : "false") << '\n'
          << "objective = " << detail::fmt17(report.objective_value) << '\n'
          << "possibly_singular = " << (report.possibly_singular ? "true" : "false") << '\n';
  if (!report.residual_history.empty())
    summary << "final_residual = " << detail::fmt17(report.residual_history.back()) << '\n';
}

}  // namespace tvgsr
