#include "tvgsr/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tvgsr/errors.hpp"
#include "tvgsr/geo_graph.hpp"
#include "tvgsr/rng.hpp"
#include "tvgsr/spectral.hpp"

namespace tvgsr {

Dataset make_synthetic_dataset(int n_nodes, int n_steps, std::uint64_t seed, int k,
                               int n_modes, double noise) {
  if (n_nodes < 2) throw InvalidParameter("make_synthetic_dataset: needs at least 2 nodes");
  if (n_steps < 2) throw InvalidParameter("make_synthetic_dataset: needs at least 2 steps");
  if (n_modes < 1) throw InvalidParameter("make_synthetic_dataset: needs at least 1 mode");
  if (noise < 0.0) throw InvalidParameter("make_synthetic_dataset: noise must be >= 0");

  Dataset out;
  SplitMix64 rng(sub_seed(seed, seed_stream::kSynthetic, 0));

  out.nodes.coords.reserve(n_nodes);
  out.nodes.labels.reserve(n_nodes);
  for (int i = 0; i < n_nodes; ++i) {
    const double lat = -30.0 + 60.0 * rng.next_double();
    const double lon = -60.0 + 120.0 * rng.next_double();
    out.nodes.coords.push_back({lat, lon});
    out.nodes.labels.push_back("node-" + std::to_string(i));
  }

  const GeoGraph graph = build_geo_graph(out.nodes, std::min(k, n_nodes - 1));
  const SpectralDecomp decomp = dense_eig(graph.laplacian, n_nodes);
  const int modes = std::min(n_modes, n_nodes);

  // Each retained eigenvector gets a slowly oscillating amplitude, giving a
  // signal that is bandlimited on the graph and smooth along time.
  Eigen::MatrixXd amplitude(modes, n_steps);
  for (int q = 0; q < modes; ++q) {
    const double base = 1.0 + rng.next_double();
    const double rate = 0.5 + 2.5 * rng.next_double();
    const double phase = 6.283185307179586476925287 * rng.next_double();
    const double scale = base / (1.0 + decomp.eigenvalues[q]);
    for (int t = 0; t < n_steps; ++t) {
      const double u = static_cast<double>(t) / static_cast<double>(n_steps - 1);
      amplitude(q, t) = scale * std::sin(rate * u + phase);
    }
  }
  out.signal = decomp.eigenvectors.leftCols(modes) * amplitude;

  if (noise > 0.0) {
    for (int t = 0; t < n_steps; ++t)
      for (int i = 0; i < n_nodes; ++i) out.signal(i, t) += noise * rng.next_gaussian();
  }

  out.time_labels = index_labels(n_steps);
  out.provenance.source = "synthetic";
  out.provenance.rows_total = n_nodes;
  return out;
}

}  // namespace tvgsr
