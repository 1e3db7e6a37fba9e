#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <string>
#include <vector>

namespace tvgsr {

struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;
};

/// Node locations plus display names. Indices into `coords` are the node ids
/// used everywhere else; input order is preserved so ids are stable.
struct NodeTable {
  std::vector<GeoPoint> coords;
  std::vector<std::string> labels;

  int size() const { return static_cast<int>(coords.size()); }
};

/// Validates coordinate ranges and N >= 2. Throws InvalidParameter.
void validate_node_table(const NodeTable& nodes);

enum class DistanceMetric {
  EuclideanDegrees,  // ||m_i - m_j||_2 on raw (lat, lon) pairs, the default
  HaversineKm,       // great-circle distance in kilometres
};

struct Edge {
  int i = 0;  // always i < j
  int j = 0;
  double dist = 0.0;
};

struct EdgeSet {
  std::vector<Edge> edges;
};

/// Undirected weighted graph over geolocated nodes with its combinatorial
/// Laplacian L = D - W. Immutable after construction and safe to share
/// across threads for read-only use.
struct GeoGraph {
  Eigen::SparseMatrix<double> adjacency;  // W, symmetric, zero diagonal
  Eigen::VectorXd degree;                 // row sums of W
  Eigen::SparseMatrix<double> laplacian;  // L = D - W
  double sigma = 0.0;                     // Gaussian kernel bandwidth
  int k = 0;                              // neighbour count used to build

  int n_nodes() const { return static_cast<int>(adjacency.rows()); }
};

double node_distance(const GeoPoint& a, const GeoPoint& b, DistanceMetric metric);

/// Symmetrized kNN edge set: (i,j) is kept iff j is among the k nearest of i
/// or i among the k nearest of j. Ties in the k-th distance break toward the
/// lower node index. Requires 1 <= k < N.
EdgeSet knn_edges(const NodeTable& nodes, int k,
                  DistanceMetric metric = DistanceMetric::EuclideanDegrees);

/// Kernel bandwidth sigma = sum of edge distances / (|E| + N), with |E| the
/// undirected edge count and each undirected edge summed once.
double kernel_sigma(const EdgeSet& edges, int n_nodes);

/// W(i,j) = W(j,i) = exp(-d(i,j)^2 / sigma^2) over the given edges.
Eigen::SparseMatrix<double> gaussian_weights(const EdgeSet& edges, int n_nodes,
                                             double sigma);

/// L = D - W for symmetric nonnegative W with zero diagonal.
Eigen::SparseMatrix<double> build_laplacian(const Eigen::SparseMatrix<double>& weights);

/// knn_edges + kernel_sigma + gaussian_weights + build_laplacian in one go.
GeoGraph build_geo_graph(const NodeTable& nodes, int k = 10,
                         DistanceMetric metric = DistanceMetric::EuclideanDegrees);

/// Plain-text edge list: header "N k sigma", then one "i j weight" line per
/// undirected edge with 0-based i < j and weights at 17 significant digits.
void write_graph_file(const GeoGraph& graph, const std::string& path);
GeoGraph read_graph_file(const std::string& path);

}  // namespace tvgsr
