#pragma once

#include <cstdint>
#include <string>

#include "tvgsr/tv_signal.hpp"

namespace tvgsr {

/// Random sampling protocol: every time step observes exactly
/// round(density * N) distinct nodes, drawn uniformly without replacement and
/// independently per column.
struct SamplingPlan {
  double density = 1.0;       // in (0, 1]
  std::uint64_t seed = 0;
};

/// round-half-away-from-zero of density * N. Throws InvalidParameter when the
/// result leaves [1, N].
int per_step_count(double density, int n_nodes);

/// Draws the binary N x M sampling matrix J. Column t gets exactly
/// per_step_count(density, N) ones, chosen by a partial Fisher-Yates shuffle
/// driven by SplitMix64, so identical (plan, N, M) inputs reproduce J
/// bit-exactly on every platform.
Eigen::MatrixXd draw_mask(const SamplingPlan& plan, int n_nodes, int n_steps);

/// Y = J .* X_true.
SamplingMask observe(const Eigen::MatrixXd& mask, const TvSignal& x_true);

/// Audit export: one "t i" line per sampled entry, column-major order.
void write_mask_coords(const Eigen::MatrixXd& mask, const std::string& path);

}  // namespace tvgsr
