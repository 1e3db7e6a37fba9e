#pragma once

#include <string>
#include <vector>

#include "tvgsr/experiments.hpp"

namespace tvgsr {

/// Self-contained SVG line charts with fixed float formatting, so a plot
/// regenerated from an identical table is byte-identical. Both throw
/// InvalidParameter on an empty table.

/// Mean MSE versus sampling density, one series per method, linear axes.
std::string svg_mse_plot(const ResultTable& table);

/// Mean iterations versus sampling density for the paired experiment,
/// logarithmic y-axis.
std::string svg_iteration_plot(const std::vector<IterationPair>& pairs);

void write_text_file(const std::string& content, const std::string& path);

}  // namespace tvgsr
