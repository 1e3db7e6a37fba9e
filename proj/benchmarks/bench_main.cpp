#include <benchmark/benchmark.h>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "tvgsr/geo_graph.hpp"
#include "tvgsr/reconstruction.hpp"
#include "tvgsr/rng.hpp"
#include "tvgsr/sampling.hpp"
#include "tvgsr/synthetic.hpp"

namespace {

using namespace tvgsr;

Dataset bench_dataset(int n_nodes, int n_steps) {
  return make_synthetic_dataset(n_nodes, n_steps, 12345);
}

void BM_KnnGraphBuild(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Dataset data = bench_dataset(n, 4);
  for (auto _ : state) {
    GeoGraph graph = build_geo_graph(data.nodes, 10);
    benchmark::DoNotOptimize(graph.laplacian);
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_KnnGraphBuild)->Arg(64)->Arg(256)->Arg(1024)->Complexity();

void BM_DrawMask(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  SamplingPlan plan;
  plan.density = 0.7;
  plan.seed = 99;
  for (auto _ : state) {
    Eigen::MatrixXd mask = draw_mask(plan, n, 76);
    benchmark::DoNotOptimize(mask);
  }
}
BENCHMARK(BM_DrawMask)->Arg(256)->Arg(3149);

void BM_HessianApply(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int m = 76;
  const Dataset data = bench_dataset(n, m);
  const GeoGraph graph = build_geo_graph(data.nodes, 10);
  SamplingPlan plan;
  plan.density = 0.7;
  plan.seed = 5;
  const SamplingMask mask = observe(draw_mask(plan, n, m), data.signal);

  ReconProblem::Options opts;
  opts.lambda = 1.0;
  opts.epsilon = 1.0;
  const ReconProblem problem(graph.laplacian, mask, opts);
  const Eigen::MatrixXd v = data.signal;
  for (auto _ : state) {
    Eigen::MatrixXd hv = hessian_apply(problem, v);
    benchmark::DoNotOptimize(hv);
  }
}
BENCHMARK(BM_HessianApply)->Arg(128)->Arg(259)->Arg(1024);

void BM_SolveCg(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const double density = static_cast<double>(state.range(1)) / 10.0;
  const int m = 30;
  const Dataset data = bench_dataset(n, m);
  const GeoGraph graph = build_geo_graph(data.nodes, 10);
  SamplingPlan plan;
  plan.density = density;
  plan.seed = 5;
  const SamplingMask mask = observe(draw_mask(plan, n, m), data.signal);

  ReconProblem::Options opts;
  opts.lambda = 1.0;
  opts.epsilon = 1.0;
  opts.tol = 1e-7;
  opts.max_iters = 2000;
  const ReconProblem problem(graph.laplacian, mask, opts);
  for (auto _ : state) {
    SolveReport report = solve(problem);
    benchmark::DoNotOptimize(report.x_hat);
    state.counters["iterations"] = report.iterations;
  }
}
BENCHMARK(BM_SolveCg)->Args({128, 5})->Args({128, 9})->Args({259, 5})->Args({259, 9});

void BM_SolveCgQiu(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int m = 30;
  const Dataset data = bench_dataset(n, m);
  const GeoGraph graph = build_geo_graph(data.nodes, 10);
  SamplingPlan plan;
  plan.density = 0.5;
  plan.seed = 5;
  const SamplingMask mask = observe(draw_mask(plan, n, m), data.signal);

  ReconProblem::Options opts;
  opts.lambda = 1.0;
  opts.variant = Variant::Qiu;
  opts.tol = 1e-7;
  opts.max_iters = 5000;
  const ReconProblem problem(graph.laplacian, mask, opts);
  for (auto _ : state) {
    SolveReport report = solve(problem);
    benchmark::DoNotOptimize(report.x_hat);
    state.counters["iterations"] = report.iterations;
  }
}
BENCHMARK(BM_SolveCgQiu)->Arg(128)->Arg(259);

}  // namespace

BENCHMARK_MAIN();
