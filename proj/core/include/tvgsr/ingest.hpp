#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tvgsr/geo_graph.hpp"
#include "tvgsr/tv_signal.hpp"

namespace tvgsr {

enum class JhuLayout {
  Global,  // Province/State, Country/Region, Lat, Long, then date columns
  Usa,     // UID..Combined_Key administrative columns, Lat/Long_, then dates
};

/// Cumulative case counts straight from a JHU-style time-series CSV.
struct RawCaseTable {
  std::vector<std::string> labels;
  std::vector<GeoPoint> coords;
  Eigen::MatrixXd cumulative;           // N x M, one column per day
  std::vector<std::string> dates;       // header date labels, m/d/yy
  int rows_dropped = 0;                 // missing or (0,0) coordinates
};

struct Provenance {
  std::string source;
  int rows_total = 0;
  int rows_dropped = 0;
  int negatives_clamped = 0;
  bool clamped = false;
};

/// A loaded dataset: nodes, the N x M signal (daily new cases for COVID
/// sources, raw values for matrix sources) and how it was produced.
struct Dataset {
  NodeTable nodes;
  TvSignal signal;
  std::vector<std::string> time_labels;
  Provenance provenance;
};

/// Parses a JHU time-series CSV. Rows with missing or (0,0) coordinates are
/// dropped and counted. An optional inclusive date window selects a
/// contiguous range of date columns by their header labels.
RawCaseTable parse_jhu(const std::string& path, JhuLayout layout,
                       const std::optional<std::string>& first_date = std::nullopt,
                       const std::optional<std::string>& last_date = std::nullopt);

/// First differences along time: new(:,0) = cum(:,0) and
/// new(:,t) = cum(:,t) - cum(:,t-1). With clamp_negative (the default),
/// negative differences -- reporting corrections -- are set to 0 and counted.
Dataset cumulative_to_new(const RawCaseTable& table, bool clamp_negative = true);

/// Generic node x time dataset: values in the signal CSV layout plus a
/// coordinate CSV with header "label,latitude,longitude". The signal is taken
/// as-is (no differencing).
Dataset load_matrix_dataset(const std::string& values_path, const std::string& coords_path);

void write_coords_csv(const NodeTable& nodes, const std::string& path);

}  // namespace tvgsr
