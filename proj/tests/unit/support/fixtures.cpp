#include "support/fixtures.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <unistd.h>
#include <utility>

#include "tvgsr/rng.hpp"
#include "tvgsr/spectral.hpp"

namespace tvgsr::testing {

namespace fs = std::filesystem;

std::string scratch_dir() {
  static std::atomic<int> counter{0};
  const fs::path dir = fs::temp_directory_path() /
                       ("tvgsr-tests-" + std::to_string(::getpid()) + "-" +
                        std::to_string(counter.fetch_add(1)));
  fs::create_directories(dir);
  return dir.string();
}

NodeTable random_node_table(int n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  NodeTable nodes;
  nodes.coords.reserve(n);
  nodes.labels.reserve(n);
  for (int i = 0; i < n; ++i) {
    nodes.coords.push_back({-50.0 + 110.0 * rng.next_double(),
                            -150.0 + 300.0 * rng.next_double()});
    nodes.labels.push_back("node-" + std::to_string(i));
  }
  return nodes;
}

Eigen::SparseMatrix<double> random_laplacian(int n, std::uint64_t seed, int k) {
  const NodeTable nodes = random_node_table(n, seed);
  return build_geo_graph(nodes, std::min(k, n - 1)).laplacian;
}

std::vector<std::pair<int, int>> dense_knn_oracle(const NodeTable& nodes, int k,
                                                  DistanceMetric metric) {
  const int n = nodes.size();
  std::vector<std::pair<int, int>> directed;
  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<double, int>> cand;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      cand.emplace_back(node_distance(nodes.coords[i], nodes.coords[j], metric), j);
    }
    std::sort(cand.begin(), cand.end());
    for (int q = 0; q < k && q < static_cast<int>(cand.size()); ++q) {
      const int j = cand[q].second;
      directed.emplace_back(std::min(i, j), std::max(i, j));
    }
  }
  std::sort(directed.begin(), directed.end());
  directed.erase(std::unique(directed.begin(), directed.end()), directed.end());
  return directed;
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

namespace {

Eigen::MatrixXd shifted_power_dense(const Eigen::MatrixXd& laplacian, double epsilon,
                                    double beta) {
  const Eigen::Index n = laplacian.rows();
  if (beta == 0.0) return Eigen::MatrixXd::Identity(n, n);
  if (beta == 1.0) return laplacian + epsilon * Eigen::MatrixXd::Identity(n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(laplacian);
  Eigen::VectorXd powers = eig.eigenvalues();
  for (Eigen::Index i = 0; i < n; ++i)
    powers[i] = std::pow(std::max(powers[i] + epsilon, 0.0), beta);
  return eig.eigenvectors() * powers.asDiagonal() * eig.eigenvectors().transpose();
}

Eigen::MatrixXd temporal_product_dense(int m) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m, m - 1);
  for (int t = 0; t < m - 1; ++t) {
    d(t, t) = -1.0;
    d(t + 1, t) = 1.0;
  }
  return d * d.transpose();
}

}  // namespace

Eigen::MatrixXd dense_hessian(const Eigen::MatrixXd& laplacian, const Eigen::MatrixXd& mask,
                              double lambda, double epsilon, double beta) {
  const int n = static_cast<int>(mask.rows());
  const int m = static_cast<int>(mask.cols());
  Eigen::MatrixXd h = lambda * kron(temporal_product_dense(m),
                                    shifted_power_dense(laplacian, epsilon, beta));
  for (int t = 0; t < m; ++t)
    for (int i = 0; i < n; ++i) h(t * n + i, t * n + i) += mask(i, t);
  return h;
}

Eigen::MatrixXd dense_solve_oracle(const Eigen::MatrixXd& laplacian, const SamplingMask& mask,
                                   double lambda, double epsilon, double beta) {
  const int n = static_cast<int>(mask.mask.rows());
  const int m = static_cast<int>(mask.mask.cols());
  const Eigen::MatrixXd h = dense_hessian(laplacian, mask.mask, lambda, epsilon, beta);
  const Eigen::VectorXd rhs =
      Eigen::Map<const Eigen::VectorXd>(mask.observed.data(), mask.observed.size());
  const Eigen::VectorXd z = h.completeOrthogonalDecomposition().solve(rhs);
  return Eigen::Map<const Eigen::MatrixXd>(z.data(), n, m);
}

Eigen::MatrixXd random_matrix(int rows, int cols, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Eigen::MatrixXd out(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) out(r, c) = rng.next_gaussian();
  return out;
}

Eigen::MatrixXd random_mask_matrix(int rows, int cols, double density, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Eigen::MatrixXd mask = Eigen::MatrixXd::Zero(rows, cols);
  for (int c = 0; c < cols; ++c) {
    int count = 0;
    for (int r = 0; r < rows; ++r) {
      if (rng.next_double() < density) {
        mask(r, c) = 1.0;
        ++count;
      }
    }
    if (count == 0) mask(static_cast<int>(rng.next_below(rows)), c) = 1.0;
  }
  return mask;
}

std::vector<std::string> jhu_dates(int n_days) {
  // 2020 calendar, starting January 22.
  const int month_days[] = {31, 29, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  int month = 1;
  int day = 22;
  std::vector<std::string> dates;
  dates.reserve(n_days);
  for (int i = 0; i < n_days; ++i) {
    dates.push_back(std::to_string(month) + "/" + std::to_string(day) + "/20");
    if (++day > month_days[month - 1]) {
      day = 1;
      if (++month > 12) throw std::runtime_error("jhu_dates: ran past 2020");
    }
  }
  return dates;
}

namespace {

std::vector<long long> epidemic_cumulative(int n_days, SplitMix64& rng) {
  const double peak = n_days * (0.3 + 0.6 * rng.next_double());
  const double width = 5.0 + 12.0 * rng.next_double();
  const double amp = 10.0 + 1500.0 * rng.next_double();
  std::vector<long long> cum(n_days);
  long long total = 0;
  for (int t = 0; t < n_days; ++t) {
    const double x = (t - peak) / width;
    total += static_cast<long long>(std::llround(amp * std::exp(-x * x)));
    cum[t] = total;
  }
  return cum;
}

void append_counts(std::ofstream& out, const std::vector<long long>& cum) {
  for (long long v : cum) out << ',' << v;
  out << '\n';
}

}  // namespace

void write_jhu_global_fixture(const std::string& path, int n_valid, int n_days, int n_dropped,
                              std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write fixture " + path);

  out << "Province/State,Country/Region,Lat,Long";
  for (const auto& d : jhu_dates(n_days)) out << ',' << d;
  out << '\n';

  const int stride = n_dropped > 0 ? std::max(1, n_valid / (n_dropped + 1)) : 0;
  int dropped_written = 0;
  for (int i = 0; i < n_valid; ++i) {
    std::string province;
    if (i % 3 == 1) province = "Province-" + std::to_string(i);
    if (i % 17 == 5) province = "\"Isla, Norte " + std::to_string(i) + "\"";
    const std::string country = "Country-" + std::to_string(i % 40);
    const double lat = -50.0 + 110.0 * rng.next_double();
    const double lon = -160.0 + 320.0 * rng.next_double();

    out << province << ',' << country << ',' << lat << ',' << lon;
    append_counts(out, epidemic_cumulative(n_days, rng));

    if (n_dropped > 0 && dropped_written < n_dropped && (i + 1) % stride == 0) {
      if (dropped_written % 2 == 0) {
        out << ",Cruise-" << dropped_written << ",,";
      } else {
        out << ",Unassigned-" << dropped_written << ",0,0";
      }
      append_counts(out, epidemic_cumulative(n_days, rng));
      ++dropped_written;
    }
  }
  while (dropped_written < n_dropped) {
    out << ",Overflow-" << dropped_written << ",,";
    append_counts(out, epidemic_cumulative(n_days, rng));
    ++dropped_written;
  }
}

void write_jhu_usa_fixture(const std::string& path, int n_valid, int n_days, int n_dropped,
                           std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write fixture " + path);

  out << "UID,iso2,iso3,code3,FIPS,Admin2,Province_State,Country_Region,Lat,Long_,Combined_Key";
  for (const auto& d : jhu_dates(n_days)) out << ',' << d;
  out << '\n';

  const int stride = n_dropped > 0 ? std::max(1, n_valid / (n_dropped + 1)) : 0;
  int dropped_written = 0;
  for (int i = 0; i < n_valid; ++i) {
    const int state = i % 50;
    const double lat = 25.0 + 24.0 * rng.next_double();
    const double lon = -124.0 + 57.0 * rng.next_double();
    out << 84000000 + i << ",US,USA,840," << 1000 + i << ",County-" << i << ",State-" << state
        << ",US," << lat << ',' << lon << ",\"County-" << i << ", State-" << state << ", US\"";
    append_counts(out, epidemic_cumulative(n_days, rng));

    if (n_dropped > 0 && dropped_written < n_dropped && (i + 1) % stride == 0) {
      out << 84090000 + dropped_written << ",US,USA,840,,Unassigned-" << dropped_written
          << ",State-0,US,,,\"Unassigned-" << dropped_written << ", US\"";
      append_counts(out, epidemic_cumulative(n_days, rng));
      ++dropped_written;
    }
  }
  while (dropped_written < n_dropped) {
    out << 84099000 + dropped_written << ",US,USA,840,,Out-of-" << dropped_written
        << ",State-0,US,0,0,\"Out-of-" << dropped_written << ", US\"";
    append_counts(out, epidemic_cumulative(n_days, rng));
    ++dropped_written;
  }
}

}  // namespace tvgsr::testing
