#include "tvgsr/tv_signal.hpp"

#include <cmath>

#include "text_util.hpp"
#include "tvgsr/errors.hpp"
#include "tvgsr/spectral.hpp"

namespace tvgsr {

Eigen::MatrixXd temporal_diff(const TvSignal& x) {
  const Eigen::Index m = x.cols();
  if (m < 2) throw InvalidParameter("temporal_diff: needs at least 2 time steps");
  return x.rightCols(m - 1) - x.leftCols(m - 1);
}

Eigen::MatrixXd temporal_diff_adjoint(const Eigen::MatrixXd& z, int n_steps) {
  if (z.cols() != n_steps - 1)
    throw InvalidParameter("temporal_diff_adjoint: expected M-1 columns");
  Eigen::MatrixXd out(z.rows(), n_steps);
  out.col(0) = -z.col(0);
  for (int t = 1; t < n_steps - 1; ++t) out.col(t) = z.col(t - 1) - z.col(t);
  out.col(n_steps - 1) = z.col(n_steps - 2);
  return out;
}

Eigen::MatrixXd temporal_second_diff(const TvSignal& x) {
  const int m = static_cast<int>(x.cols());
  if (m < 2) throw InvalidParameter("temporal_second_diff: needs at least 2 time steps");
  Eigen::MatrixXd out(x.rows(), m);
  out.col(0) = x.col(0) - x.col(1);
  for (int t = 1; t < m - 1; ++t)
    out.col(t) = 2.0 * x.col(t) - x.col(t - 1) - x.col(t + 1);
  out.col(m - 1) = x.col(m - 1) - x.col(m - 2);
  return out;
}

Eigen::MatrixXd dense_temporal_diff(int n_steps) {
  if (n_steps < 2) throw InvalidParameter("dense_temporal_diff: needs at least 2 time steps");
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n_steps, n_steps - 1);
  for (int t = 0; t < n_steps - 1; ++t) {
    d(t, t) = -1.0;
    d(t + 1, t) = 1.0;
  }
  return d;
}

double smoothness_s2(const TvSignal& x, const Eigen::SparseMatrix<double>& laplacian) {
  if (x.rows() != laplacian.rows())
    throw InvalidParameter("smoothness_s2: signal and Laplacian dimensions disagree");
  return (x.cwiseProduct(laplacian * x)).sum();
}

double sobolev_seminorm_tv(const TvSignal& x, const Eigen::SparseMatrix<double>& laplacian,
                           double epsilon, double beta) {
  if (x.rows() != laplacian.rows())
    throw InvalidParameter("sobolev_seminorm_tv: signal and Laplacian dimensions disagree");
  if (epsilon < 0.0) throw InvalidParameter("sobolev_seminorm_tv: epsilon must be >= 0");
  if (epsilon == 0.0 && beta < 0.0)
    throw SingularOperator("sobolev_seminorm_tv: (L)^beta with beta < 0 is singular");

  double value = 0.0;
  if (beta == 0.0) {
    value = x.squaredNorm();
  } else if (beta == 1.0) {
    value = smoothness_s2(x, laplacian) + epsilon * x.squaredNorm();
  } else {
    const ShiftedOperator op(laplacian, epsilon, beta);
    value = (x.cwiseProduct(op.apply(x))).sum();
  }
  if (!std::isfinite(value)) throw NumericalFailure("sobolev_seminorm_tv: non-finite result");
  return value;
}

double mse(const TvSignal& x_hat, const TvSignal& x_true, MseScope scope,
           const SamplingMask* mask) {
  if (x_hat.rows() != x_true.rows() || x_hat.cols() != x_true.cols())
    throw InvalidParameter("mse: shapes disagree");
  if (scope == MseScope::All)
    return (x_hat - x_true).squaredNorm() / static_cast<double>(x_hat.size());

  if (mask == nullptr) throw InvalidParameter("mse: unsampled-only scope needs a mask");
  if (mask->mask.rows() != x_hat.rows() || mask->mask.cols() != x_hat.cols())
    throw InvalidParameter("mse: mask shape disagrees");
  double sum = 0.0;
  long count = 0;
  for (Eigen::Index t = 0; t < x_hat.cols(); ++t) {
    for (Eigen::Index i = 0; i < x_hat.rows(); ++i) {
      if (mask->mask(i, t) == 0.0) {
        const double d = x_hat(i, t) - x_true(i, t);
        sum += d * d;
        ++count;
      }
    }
  }
  if (count == 0)
    throw InvalidParameter("mse: no unsampled entries (density 1.0 with unsampled-only scope)");
  return sum / static_cast<double>(count);
}

void write_signal_csv(const TvSignal& x, const std::vector<std::string>& node_labels,
                      const std::vector<std::string>& time_labels, const std::string& path) {
  if (static_cast<Eigen::Index>(node_labels.size()) != x.rows())
    throw InvalidParameter("write_signal_csv: node label count mismatch");
  if (static_cast<Eigen::Index>(time_labels.size()) != x.cols())
    throw InvalidParameter("write_signal_csv: time label count mismatch");

  auto out = detail::open_output(path);
  out << "node";
  for (const auto& t : time_labels) out << ',' << detail::csv_quote(t);
  out << '\n';
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    out << detail::csv_quote(node_labels[i]);
    for (Eigen::Index t = 0; t < x.cols(); ++t) out << ',' << detail::fmt17(x(i, t));
    out << '\n';
  }
}

SignalCsv read_signal_csv(const std::string& path) {
  auto in = detail::open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty signal CSV", 1);
  const auto header = detail::split_csv(line, 1);
  if (header.size() < 2) throw ParseError("signal CSV header needs at least one time column", 1);

  SignalCsv result;
  result.time_labels.assign(header.begin() + 1, header.end());
  const std::size_t m = result.time_labels.size();

  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = detail::split_csv(line, line_no);
    if (fields.size() != m + 1)
      throw ParseError("expected " + std::to_string(m + 1) + " fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    result.node_labels.push_back(fields[0]);
    std::vector<double> row(m);
    for (std::size_t t = 0; t < m; ++t) row[t] = detail::parse_double(fields[t + 1], line_no, t + 2);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("signal CSV has no data rows", line_no);

  result.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t t = 0; t < m; ++t)
      result.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) = rows[i][t];
  return result;
}

std::vector<std::string> index_labels(int count) {
  std::vector<std::string> labels;
  labels.reserve(count);
  for (int i = 0; i < count; ++i) labels.push_back(std::to_string(i));
  return labels;
}

}  // namespace tvgsr
