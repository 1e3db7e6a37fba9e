#include <doctest.h>

#include <fstream>
#include <iterator>
#include <string>

#include "support/fixtures.hpp"
#include "tvgsr/errors.hpp"
#include "tvgsr/plot.hpp"

using namespace tvgsr;
namespace tt = tvgsr::testing;

namespace {

int count_occurrences(const std::string& text, const std::string& needle) {
  int count = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size()))
    ++count;
  return count;
}

TrialResult make_result(Method method, double density, double mse) {
  TrialResult r;
  r.method = method;
  r.density = density;
  r.lambda = 1.0;
  r.epsilon = method == Method::Sobolev ? 0.5 : 0.0;
  r.mse = mse;
  r.converged = true;
  return r;
}

}  // namespace

TEST_CASE("svg_mse_plot draws one series per method") {
  ResultTable table;
  for (const double density : {0.5, 0.7, 0.9}) {
    table.push_back(make_result(Method::Qiu, density, 2.0 - density));
    table.push_back(make_result(Method::Sobolev, density, 1.5 - density));
  }

  const std::string svg = svg_mse_plot(table);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(count_occurrences(svg, "<polyline") == 2);
  CHECK(svg.find(">qiu<") != std::string::npos);
  CHECK(svg.find(">sobolev<") != std::string::npos);
  CHECK(svg.find("sampling density") != std::string::npos);
  CHECK(svg.find("mean MSE") != std::string::npos);
  // One marker per (method, density) pair.
  CHECK(count_occurrences(svg, "<circle") == 6);

  CHECK(svg_mse_plot(table) == svg);

  CHECK_THROWS_AS(svg_mse_plot(ResultTable{}), InvalidParameter);
}

TEST_CASE("svg_iteration_plot uses a log axis and both variant series") {
  std::vector<IterationPair> pairs;
  for (const double density : {0.5, 0.8}) {
    IterationPair p;
    p.density = density;
    p.lambda = 1.0;
    p.epsilon = 0.5;
    p.iters_qiu = density < 0.6 ? 900 : 300;
    p.iters_sobolev = density < 0.6 ? 200 : 90;
    p.converged_qiu = p.converged_sobolev = true;
    pairs.push_back(p);
    p.trial = 1;
    p.iters_qiu += 50;
    p.iters_sobolev += 10;
    pairs.push_back(p);
  }

  const std::string svg = svg_iteration_plot(pairs);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(count_occurrences(svg, "<polyline") == 2);
  CHECK(svg.find(">qiu<") != std::string::npos);
  CHECK(svg.find(">sobolev<") != std::string::npos);
  CHECK(svg.find("iterations") != std::string::npos);
  CHECK(svg_iteration_plot(pairs) == svg);
  CHECK_THROWS_AS(svg_iteration_plot({}), InvalidParameter);
}

TEST_CASE("write_text_file") {
  const std::string dir = tt::scratch_dir();
  const std::string path = dir + "/plot.svg";
  write_text_file("<svg></svg>\n", path);
  std::ifstream in(path, std::ios::binary);
  const std::string got((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
  CHECK(got == "<svg></svg>\n");
}
