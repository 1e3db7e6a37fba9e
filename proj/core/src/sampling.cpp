#include "tvgsr/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "text_util.hpp"
#include "tvgsr/errors.hpp"
#include "tvgsr/rng.hpp"

namespace tvgsr {

int per_step_count(double density, int n_nodes) {
  if (!(density > 0.0) || density > 1.0)
    throw InvalidParameter("per_step_count: density must lie in (0, 1]");
  if (n_nodes < 1) throw InvalidParameter("per_step_count: need at least one node");
  const int s = static_cast<int>(std::llround(density * static_cast<double>(n_nodes)));
  if (s < 1 || s > n_nodes)
    throw InvalidParameter("per_step_count: rounded count leaves [1, N]");
  return s;
}

Eigen::MatrixXd draw_mask(const SamplingPlan& plan, int n_nodes, int n_steps) {
  if (n_steps < 1) throw InvalidParameter("draw_mask: need at least one time step");
  const int s = per_step_count(plan.density, n_nodes);

  Eigen::MatrixXd mask = Eigen::MatrixXd::Zero(n_nodes, n_steps);
  SplitMix64 rng(plan.seed);
  std::vector<int> pool(n_nodes);
  for (int t = 0; t < n_steps; ++t) {
    std::iota(pool.begin(), pool.end(), 0);
    // Partial Fisher-Yates: after j swaps, pool[0..j) is a uniform draw
    // without replacement.
    for (int j = 0; j < s; ++j) {
      const auto pick = j + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n_nodes - j)));
      std::swap(pool[j], pool[pick]);
      mask(pool[j], t) = 1.0;
    }
  }
  return mask;
}

SamplingMask observe(const Eigen::MatrixXd& mask, const TvSignal& x_true) {
  if (mask.rows() != x_true.rows() || mask.cols() != x_true.cols())
    throw InvalidParameter("observe: mask and signal shapes disagree");
  SamplingMask out;
  out.mask = mask;
  out.observed = mask.cwiseProduct(x_true);
  return out;
}

void write_mask_coords(const Eigen::MatrixXd& mask, const std::string& path) {
  auto out = detail::open_output(path);
  for (Eigen::Index t = 0; t < mask.cols(); ++t)
    for (Eigen::Index i = 0; i < mask.rows(); ++i)
      if (mask(i, t) != 0.0) out << t << ' ' << i << '\n';
}

}  // namespace tvgsr
