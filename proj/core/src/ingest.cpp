#include "tvgsr/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "text_util.hpp"
#include "tvgsr/errors.hpp"

namespace tvgsr {

namespace {

bool iequals(const std::string& a, const std::string& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  return true;
}

bool looks_like_date(const std::string& cell) {
  int part = 0;
  int digits = 0;
  for (char c : cell) {
    if (c == '/') {
      if (digits == 0 || part >= 2) return false;
      ++part;
      digits = 0;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      if (++digits > 4) return false;
    } else {
      return false;
    }
  }
  return part == 2 && digits > 0;
}

int find_column(const std::vector<std::string>& header, std::size_t limit,
                std::initializer_list<const char*> names) {
  for (std::size_t c = 0; c < std::min(limit, header.size()); ++c)
    for (const char* name : names)
      if (iequals(header[c], name)) return static_cast<int>(c);
  return -1;
}

}  // namespace

RawCaseTable parse_jhu(const std::string& path, JhuLayout layout,
                       const std::optional<std::string>& first_date,
                       const std::optional<std::string>& last_date) {
  auto in = detail::open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty file", 1);
  const auto header = detail::split_csv(line, 1);

  std::size_t date_start = header.size();
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (looks_like_date(header[c])) {
      date_start = c;
      break;
    }
  }
  if (date_start == header.size()) throw ParseError("header has no date columns", 1);
  for (std::size_t c = date_start; c < header.size(); ++c)
    if (!looks_like_date(header[c]))
      throw ParseError("non-date column '" + header[c] + "' after the date columns begin", 1,
                       c + 1);

  const int lat_col = find_column(header, date_start, {"Lat", "Latitude"});
  const int lon_col = find_column(header, date_start, {"Long", "Long_", "Longitude"});
  if (lat_col < 0 || lon_col < 0)
    throw ParseError("header is missing Lat/Long columns", 1);

  int label_a = -1;
  int label_b = -1;
  if (layout == JhuLayout::Global) {
    label_a = find_column(header, date_start, {"Province/State"});
    label_b = find_column(header, date_start, {"Country/Region"});
    if (label_a < 0 || label_b < 0)
      throw ParseError("global layout needs Province/State and Country/Region columns", 1);
  } else {
    label_a = find_column(header, date_start, {"Combined_Key"});
    if (label_a < 0) throw ParseError("usa layout needs a Combined_Key column", 1);
  }

  // Resolve the optional inclusive date window against the header labels.
  std::size_t win_lo = date_start;
  std::size_t win_hi = header.size() - 1;
  if (first_date) {
    const auto it = std::find(header.begin() + date_start, header.end(), *first_date);
    if (it == header.end())
      throw InvalidParameter("parse_jhu: first date '" + *first_date + "' not in the file");
    win_lo = static_cast<std::size_t>(it - header.begin());
  }
  if (last_date) {
    const auto it = std::find(header.begin() + date_start, header.end(), *last_date);
    if (it == header.end())
      throw InvalidParameter("parse_jhu: last date '" + *last_date + "' not in the file");
    win_hi = static_cast<std::size_t>(it - header.begin());
  }
  if (win_hi < win_lo) throw InvalidParameter("parse_jhu: date window is empty");
  const std::size_t n_dates = win_hi - win_lo + 1;

  RawCaseTable table;
  table.dates.assign(header.begin() + win_lo, header.begin() + win_hi + 1);

  std::vector<std::vector<double>> counts;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = detail::split_csv(line, line_no);
    if (fields.size() != header.size())
      throw ParseError("expected " + std::to_string(header.size()) + " fields, got " +
                           std::to_string(fields.size()),
                       line_no);

    const std::string& lat_cell = fields[lat_col];
    const std::string& lon_cell = fields[lon_col];
    if (lat_cell.empty() || lon_cell.empty()) {
      ++table.rows_dropped;
      continue;
    }
    const double lat = detail::parse_double(lat_cell, line_no, lat_col + 1);
    const double lon = detail::parse_double(lon_cell, line_no, lon_col + 1);
    if (lat == 0.0 && lon == 0.0) {
      ++table.rows_dropped;
      continue;
    }

    std::string label;
    if (layout == JhuLayout::Global) {
      const std::string& prov = fields[label_a];
      const std::string& country = fields[label_b];
      label = prov.empty() ? country : prov + ", " + country;
    } else {
      label = fields[label_a];
    }

    std::vector<double> row(n_dates);
    for (std::size_t c = 0; c < n_dates; ++c) {
      const double v = detail::parse_double(fields[win_lo + c], line_no, win_lo + c + 1);
      if (!std::isfinite(v)) throw ParseError("non-finite count", line_no, win_lo + c + 1);
      row[c] = v;
    }

    table.labels.push_back(std::move(label));
    table.coords.push_back({lat, lon});
    counts.push_back(std::move(row));
  }
  if (counts.empty()) throw ParseError("no usable rows", line_no);

  table.cumulative.resize(static_cast<Eigen::Index>(counts.size()),
                          static_cast<Eigen::Index>(n_dates));
  for (std::size_t i = 0; i < counts.size(); ++i)
    for (std::size_t c = 0; c < n_dates; ++c)
      table.cumulative(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
          counts[i][c];
  return table;
}

Dataset cumulative_to_new(const RawCaseTable& table, bool clamp_negative) {
  if (table.cumulative.cols() < 2)
    throw InvalidParameter("cumulative_to_new: needs at least 2 date columns");
  if (table.cumulative.rows() != static_cast<Eigen::Index>(table.labels.size()) ||
      table.labels.size() != table.coords.size())
    throw InvalidParameter("cumulative_to_new: table fields disagree in length");

  Dataset out;
  out.nodes.coords = table.coords;
  out.nodes.labels = table.labels;
  out.time_labels = table.dates;
  out.provenance.rows_total = static_cast<int>(table.labels.size()) + table.rows_dropped;
  out.provenance.rows_dropped = table.rows_dropped;
  out.provenance.clamped = clamp_negative;

  const Eigen::Index n = table.cumulative.rows();
  const Eigen::Index m = table.cumulative.cols();
  out.signal.resize(n, m);
  out.signal.col(0) = table.cumulative.col(0);
  for (Eigen::Index t = 1; t < m; ++t)
    out.signal.col(t) = table.cumulative.col(t) - table.cumulative.col(t - 1);

  if (clamp_negative) {
    for (Eigen::Index t = 1; t < m; ++t) {
      for (Eigen::Index i = 0; i < n; ++i) {
        if (out.signal(i, t) < 0.0) {
          out.signal(i, t) = 0.0;
          ++out.provenance.negatives_clamped;
        }
      }
    }
  }
  if (!out.signal.allFinite())
    throw NumericalFailure("cumulative_to_new: non-finite signal value");
  return out;
}

Dataset load_matrix_dataset(const std::string& values_path, const std::string& coords_path) {
  const SignalCsv values = read_signal_csv(values_path);

  auto in = detail::open_input(coords_path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty coordinate file", 1);
  const auto header = detail::split_csv(line, 1);
  if (header.size() != 3 || !iequals(header[0], "label") || !iequals(header[1], "latitude") ||
      !iequals(header[2], "longitude"))
    throw ParseError("coordinate header must be label,latitude,longitude", 1);

  NodeTable nodes;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = detail::split_csv(line, line_no);
    if (fields.size() != 3) throw ParseError("expected 3 fields", line_no);
    nodes.labels.push_back(fields[0]);
    nodes.coords.push_back({detail::parse_double(fields[1], line_no, 2),
                            detail::parse_double(fields[2], line_no, 3)});
  }

  if (nodes.size() != static_cast<int>(values.node_labels.size()))
    throw InvalidParameter("load_matrix_dataset: node counts disagree between files (" +
                           std::to_string(nodes.size()) + " coordinates vs " +
                           std::to_string(values.node_labels.size()) + " signal rows)");
  for (std::size_t i = 0; i < nodes.labels.size(); ++i)
    if (nodes.labels[i] != values.node_labels[i])
      throw InvalidParameter("load_matrix_dataset: node label mismatch at row " +
                             std::to_string(i) + " ('" + nodes.labels[i] + "' vs '" +
                             values.node_labels[i] + "')");

  Dataset out;
  out.nodes = std::move(nodes);
  out.signal = values.values;
  out.time_labels = values.time_labels;
  out.provenance.source = values_path;
  out.provenance.rows_total = out.nodes.size();
  if (!out.signal.allFinite())
    throw NumericalFailure("load_matrix_dataset: non-finite signal value");
  return out;
}

void write_coords_csv(const NodeTable& nodes, const std::string& path) {
  auto out = detail::open_output(path);
  out << "label,latitude,longitude\n";
  for (int i = 0; i < nodes.size(); ++i)
    out << detail::csv_quote(nodes.labels[i]) << ',' << detail::fmt17(nodes.coords[i].lat)
        << ',' << detail::fmt17(nodes.coords[i].lon) << '\n';
}

}  // namespace tvgsr
