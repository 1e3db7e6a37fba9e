#include "tvgsr/geo_graph.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "text_util.hpp"
#include "tvgsr/errors.hpp"

namespace tvgsr {

namespace {
constexpr double kEarthRadiusKm = 6371.0;
constexpr double kDegToRad = 0.01745329251994329577;  // pi / 180
}  // namespace

void validate_node_table(const NodeTable& nodes) {
  const int n = nodes.size();
  if (n < 2) throw InvalidParameter("node table needs at least 2 nodes, got " + std::to_string(n));
  if (!nodes.labels.empty() && static_cast<int>(nodes.labels.size()) != n)
    throw InvalidParameter("label count does not match node count");
  for (int i = 0; i < n; ++i) {
    const GeoPoint& p = nodes.coords[i];
    if (!std::isfinite(p.lat) || !std::isfinite(p.lon))
      throw InvalidParameter("non-finite coordinates at node " + std::to_string(i));
    if (p.lat < -90.0 || p.lat > 90.0)
      throw InvalidParameter("latitude out of [-90, 90] at node " + std::to_string(i));
    if (p.lon < -180.0 || p.lon > 180.0)
      throw InvalidParameter("longitude out of [-180, 180] at node " + std::to_string(i));
  }
}

double node_distance(const GeoPoint& a, const GeoPoint& b, DistanceMetric metric) {
  if (metric == DistanceMetric::EuclideanDegrees) {
    const double dlat = a.lat - b.lat;
    const double dlon = a.lon - b.lon;
    return std::sqrt(dlat * dlat + dlon * dlon);
  }
  // Haversine. The squared half-chord terms make the result exactly symmetric
  // in (a, b).
  const double sin_dlat = std::sin((a.lat - b.lat) * 0.5 * kDegToRad);
  const double sin_dlon = std::sin((a.lon - b.lon) * 0.5 * kDegToRad);
  const double h = sin_dlat * sin_dlat +
                   std::cos(a.lat * kDegToRad) * std::cos(b.lat * kDegToRad) * sin_dlon * sin_dlon;
  return kEarthRadiusKm * 2.0 * std::atan2(std::sqrt(h), std::sqrt(std::max(0.0, 1.0 - h)));
}

EdgeSet knn_edges(const NodeTable& nodes, int k, DistanceMetric metric) {
  validate_node_table(nodes);
  const int n = nodes.size();
  if (k < 1 || k >= n)
    throw InvalidParameter("k must satisfy 1 <= k < N, got k=" + std::to_string(k) +
                           " with N=" + std::to_string(n));

  // Directed selection first: for each node the k nearest others, ties in the
  // k-th distance broken by lower node index via (distance, index) ordering.
  std::vector<std::pair<int, int>> directed;
  directed.reserve(static_cast<std::size_t>(n) * k);
  std::vector<std::pair<double, int>> cand;
  cand.reserve(n - 1);
  for (int i = 0; i < n; ++i) {
    cand.clear();
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      cand.emplace_back(node_distance(nodes.coords[i], nodes.coords[j], metric), j);
    }
    std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
    for (int s = 0; s < k; ++s) {
      const int j = cand[s].second;
      directed.emplace_back(std::min(i, j), std::max(i, j));
    }
  }

  std::sort(directed.begin(), directed.end());
  directed.erase(std::unique(directed.begin(), directed.end()), directed.end());

  EdgeSet result;
  result.edges.reserve(directed.size());
  for (const auto& [i, j] : directed)
    result.edges.push_back({i, j, node_distance(nodes.coords[i], nodes.coords[j], metric)});
  return result;
}

double kernel_sigma(const EdgeSet& edges, int n_nodes) {
  if (edges.edges.empty()) throw InvalidParameter("kernel_sigma: empty edge set");
  if (n_nodes < 1) throw InvalidParameter("kernel_sigma: n_nodes must be positive");
  double sum = 0.0;
  for (const Edge& e : edges.edges) sum += e.dist;
  const double sigma = sum / (static_cast<double>(edges.edges.size()) + n_nodes);
  if (sigma == 0.0)
    throw DegenerateKernel("all edge distances are zero; Gaussian bandwidth degenerates");
  return sigma;
}

Eigen::SparseMatrix<double> gaussian_weights(const EdgeSet& edges, int n_nodes, double sigma) {
  if (!(sigma > 0.0)) throw InvalidParameter("gaussian_weights: sigma must be positive");
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(2 * edges.edges.size());
  for (const Edge& e : edges.edges) {
    if (e.i == e.j) throw InvalidParameter("gaussian_weights: self-loop in edge set");
    const double w = std::exp(-(e.dist * e.dist) / (sigma * sigma));
    triplets.emplace_back(e.i, e.j, w);
    triplets.emplace_back(e.j, e.i, w);
  }
  Eigen::SparseMatrix<double> w(n_nodes, n_nodes);
  w.setFromTriplets(triplets.begin(), triplets.end());
  w.makeCompressed();
  return w;
}

Eigen::SparseMatrix<double> build_laplacian(const Eigen::SparseMatrix<double>& weights) {
  if (weights.rows() != weights.cols())
    throw InvalidParameter("build_laplacian: matrix must be square");
  const int n = static_cast<int>(weights.rows());

  // Symmetry must be exact: graph construction mirrors every entry.
  Eigen::SparseMatrix<double> wt = weights.transpose();
  for (int c = 0; c < weights.outerSize(); ++c) {
    Eigen::SparseMatrix<double>::InnerIterator a(weights, c), b(wt, c);
    for (; a && b; ++a, ++b) {
      if (a.row() != b.row() || a.value() != b.value())
        throw InvalidParameter("build_laplacian: weight matrix is not symmetric");
    }
    if (a || b) throw InvalidParameter("build_laplacian: weight matrix is not symmetric");
  }

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(weights.nonZeros() + n);
  Eigen::VectorXd degree = Eigen::VectorXd::Zero(n);
  for (int c = 0; c < weights.outerSize(); ++c) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(weights, c); it; ++it) {
      if (it.row() == it.col()) {
        if (it.value() != 0.0)
          throw InvalidParameter("build_laplacian: nonzero diagonal in weight matrix");
        continue;
      }
      if (it.value() < 0.0) throw InvalidParameter("build_laplacian: negative weight");
      degree(it.row()) += it.value();
      triplets.emplace_back(it.row(), it.col(), -it.value());
    }
  }
  for (int i = 0; i < n; ++i) triplets.emplace_back(i, i, degree(i));

  Eigen::SparseMatrix<double> lap(n, n);
  lap.setFromTriplets(triplets.begin(), triplets.end());
  lap.makeCompressed();
  return lap;
}

GeoGraph build_geo_graph(const NodeTable& nodes, int k, DistanceMetric metric) {
  GeoGraph graph;
  const EdgeSet edges = knn_edges(nodes, k, metric);
  graph.sigma = kernel_sigma(edges, nodes.size());
  graph.adjacency = gaussian_weights(edges, nodes.size(), graph.sigma);
  graph.laplacian = build_laplacian(graph.adjacency);
  graph.degree = graph.adjacency * Eigen::VectorXd::Ones(nodes.size());
  graph.k = k;
  return graph;
}

void write_graph_file(const GeoGraph& graph, const std::string& path) {
  auto out = detail::open_output(path);
  out << graph.n_nodes() << ' ' << graph.k << ' ' << detail::fmt17e(graph.sigma) << '\n';
  for (int c = 0; c < graph.adjacency.outerSize(); ++c) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(graph.adjacency, c); it; ++it) {
      if (it.row() < it.col())
        out << it.row() << ' ' << it.col() << ' ' << detail::fmt17e(it.value()) << '\n';
    }
  }
}

GeoGraph read_graph_file(const std::string& path) {
  auto in = detail::open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty graph file", 1);
  std::istringstream header(line);
  int n = 0, k = 0;
  double sigma = 0.0;
  if (!(header >> n >> k >> sigma) || n < 1)
    throw ParseError("graph header must be 'N k sigma'", 1);

  std::vector<Eigen::Triplet<double>> triplets;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    int i = 0, j = 0;
    double w = 0.0;
    if (!(row >> i >> j >> w)) throw ParseError("edge line must be 'i j weight'", line_no);
    if (i < 0 || j < 0 || i >= n || j >= n || i == j)
      throw ParseError("edge endpoints out of range", line_no);
    triplets.emplace_back(i, j, w);
    triplets.emplace_back(j, i, w);
  }

  GeoGraph graph;
  graph.adjacency.resize(n, n);
  graph.adjacency.setFromTriplets(triplets.begin(), triplets.end());
  graph.adjacency.makeCompressed();
  graph.laplacian = build_laplacian(graph.adjacency);
  graph.degree = graph.adjacency * Eigen::VectorXd::Ones(n);
  graph.sigma = sigma;
  graph.k = k;
  return graph;
}

}  // namespace tvgsr
