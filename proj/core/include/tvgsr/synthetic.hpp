#pragma once

#include <cstdint>

#include "tvgsr/ingest.hpp"

namespace tvgsr {

/// Deterministic synthetic dataset for experiments without external files:
/// nodes scattered uniformly in a coordinate box, and a signal assembled from
/// the first few Laplacian eigenvectors with slowly drifting amplitudes plus
/// a small noise floor, so it is smooth both on the graph and in time.
Dataset make_synthetic_dataset(int n_nodes, int n_steps, std::uint64_t seed,
                               int k = 10, int n_modes = 8, double noise = 0.02);

}  // namespace tvgsr
