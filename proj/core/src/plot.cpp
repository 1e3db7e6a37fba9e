#include "tvgsr/plot.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "text_util.hpp"
#include "tvgsr/errors.hpp"

namespace tvgsr {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 30.0;
constexpr double kMarginTop = 30.0;
constexpr double kMarginBottom = 50.0;

const char* kSeriesColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"};

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

std::string coord(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

/// Shared chart scaffolding: axes, tick labels, series polylines with point
/// markers, legend. log_y switches the y mapping (values must be positive).
std::string render_chart(const std::vector<Series>& series, const std::string& x_label,
                         const std::string& y_label, bool log_y) {
  double x_lo = 0.0, x_hi = 0.0, y_lo = 0.0, y_hi = 0.0;
  bool first = true;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double y = log_y ? std::log10(std::max(s.y[i], 1e-300)) : s.y[i];
      if (first) {
        x_lo = x_hi = s.x[i];
        y_lo = y_hi = y;
        first = false;
      } else {
        x_lo = std::min(x_lo, s.x[i]);
        x_hi = std::max(x_hi, s.x[i]);
        y_lo = std::min(y_lo, y);
        y_hi = std::max(y_hi, y);
      }
    }
  }
  if (first) throw InvalidParameter("plot: no data points");
  if (x_hi == x_lo) {
    x_lo -= 0.5;
    x_hi += 0.5;
  }
  if (y_hi == y_lo) {
    y_lo -= 0.5;
    y_hi += 0.5;
  }
  const double pad = 0.05 * (y_hi - y_lo);
  y_lo -= pad;
  y_hi += pad;

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  const auto sx = [&](double v) { return kMarginLeft + (v - x_lo) / (x_hi - x_lo) * plot_w; };
  const auto sy = [&](double v) {
    const double t = log_y ? std::log10(std::max(v, 1e-300)) : v;
    return kMarginTop + (y_hi - t) / (y_hi - y_lo) * plot_h;
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
      << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";

  // Axes.
  svg << "<line x1=\"" << coord(kMarginLeft) << "\" y1=\"" << coord(kMarginTop + plot_h)
      << "\" x2=\"" << coord(kMarginLeft + plot_w) << "\" y2=\"" << coord(kMarginTop + plot_h)
      << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << coord(kMarginLeft) << "\" y1=\"" << coord(kMarginTop) << "\" x2=\""
      << coord(kMarginLeft) << "\" y2=\"" << coord(kMarginTop + plot_h)
      << "\" stroke=\"black\"/>\n";

  // Ticks: 5 per axis, labels in short fixed form.
  for (int i = 0; i <= 4; ++i) {
    const double fx = x_lo + (x_hi - x_lo) * i / 4.0;
    const double px = sx(fx);
    svg << "<line x1=\"" << coord(px) << "\" y1=\"" << coord(kMarginTop + plot_h) << "\" x2=\""
        << coord(px) << "\" y2=\"" << coord(kMarginTop + plot_h + 5) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << coord(px) << "\" y=\"" << coord(kMarginTop + plot_h + 20)
        << "\" font-size=\"11\" text-anchor=\"middle\">" << detail::fmt_short(fx) << "</text>\n";

    const double fy = y_lo + (y_hi - y_lo) * i / 4.0;
    const double py = kMarginTop + plot_h - plot_h * i / 4.0;
    const double label = log_y ? std::pow(10.0, fy) : fy;
    svg << "<line x1=\"" << coord(kMarginLeft - 5) << "\" y1=\"" << coord(py) << "\" x2=\""
        << coord(kMarginLeft) << "\" y2=\"" << coord(py) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << coord(kMarginLeft - 8) << "\" y=\"" << coord(py + 4)
        << "\" font-size=\"11\" text-anchor=\"end\">" << detail::fmt_short(label) << "</text>\n";
  }

  svg << "<text x=\"" << coord(kMarginLeft + plot_w / 2) << "\" y=\"" << coord(kHeight - 12)
      << "\" font-size=\"13\" text-anchor=\"middle\">" << x_label << "</text>\n"
      << "<text x=\"16\" y=\"" << coord(kMarginTop + plot_h / 2)
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << coord(kMarginTop + plot_h / 2) << ")\">" << y_label << "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const char* color = kSeriesColors[si % 5];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < series[si].x.size(); ++i) {
      if (i) svg << ' ';
      svg << coord(sx(series[si].x[i])) << ',' << coord(sy(series[si].y[i]));
    }
    svg << "\"/>\n";
    for (std::size_t i = 0; i < series[si].x.size(); ++i)
      svg << "<circle cx=\"" << coord(sx(series[si].x[i])) << "\" cy=\""
          << coord(sy(series[si].y[i])) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
  }

  // Legend, top right inside the plot area.
  for (std::size_t si = 0; si < series.size(); ++si) {
    const double ly = kMarginTop + 14.0 + 18.0 * si;
    const char* color = kSeriesColors[si % 5];
    svg << "<line x1=\"" << coord(kMarginLeft + plot_w - 130) << "\" y1=\"" << coord(ly - 4)
        << "\" x2=\"" << coord(kMarginLeft + plot_w - 106) << "\" y2=\"" << coord(ly - 4)
        << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n"
        << "<text x=\"" << coord(kMarginLeft + plot_w - 100) << "\" y=\"" << coord(ly)
        << "\" font-size=\"12\">" << series[si].name << "</text>\n";
  }

  svg << "</svg>\n";
  return svg.str();
}

}  // namespace

std::string svg_mse_plot(const ResultTable& table) {
  if (table.empty()) throw InvalidParameter("svg_mse_plot: empty table");

  // Mean MSE per (method, density), methods and densities in first-appearance
  // order.
  std::vector<Series> series;
  std::vector<Method> methods;
  for (const auto& r : table)
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end())
      methods.push_back(r.method);

  for (Method m : methods) {
    Series s;
    s.name = method_name(m);
    std::vector<int> counts;
    for (const auto& r : table) {
      if (r.method != m) continue;
      const auto it = std::find(s.x.begin(), s.x.end(), r.density);
      if (it == s.x.end()) {
        s.x.push_back(r.density);
        s.y.push_back(r.mse);
        counts.push_back(1);
      } else {
        const std::size_t i = static_cast<std::size_t>(it - s.x.begin());
        s.y[i] += r.mse;
        ++counts[i];
      }
    }
    for (std::size_t i = 0; i < s.y.size(); ++i) s.y[i] /= counts[i];
    series.push_back(std::move(s));
  }
  return render_chart(series, "sampling density", "mean MSE", false);
}

std::string svg_iteration_plot(const std::vector<IterationPair>& pairs) {
  if (pairs.empty()) throw InvalidParameter("svg_iteration_plot: empty table");

  Series qiu;
  qiu.name = "qiu";
  Series sobolev;
  sobolev.name = "sobolev";
  std::vector<int> counts;
  for (const auto& p : pairs) {
    const auto it = std::find(qiu.x.begin(), qiu.x.end(), p.density);
    if (it == qiu.x.end()) {
      qiu.x.push_back(p.density);
      qiu.y.push_back(p.iters_qiu);
      sobolev.x.push_back(p.density);
      sobolev.y.push_back(p.iters_sobolev);
      counts.push_back(1);
    } else {
      const std::size_t i = static_cast<std::size_t>(it - qiu.x.begin());
      qiu.y[i] += p.iters_qiu;
      sobolev.y[i] += p.iters_sobolev;
      ++counts[i];
    }
  }
  for (std::size_t i = 0; i < counts.size(); ++i) {
    qiu.y[i] = std::max(qiu.y[i] / counts[i], 0.5);
    sobolev.y[i] = std::max(sobolev.y[i] / counts[i], 0.5);
  }
  return render_chart({qiu, sobolev}, "sampling density", "mean CG iterations", true);
}

void write_text_file(const std::string& content, const std::string& path) {
  auto out = detail::open_output(path);
  out << content;
}

}  // namespace tvgsr
