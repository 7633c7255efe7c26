#include <benchmark/benchmark.h>

#include "cvstop/catalog.hpp"
#include "cvstop/operators.hpp"

using namespace cvstop;

static void BM_JovanovicSweepEnv(benchmark::State& state) {
  CatalogModel cm = build_model("js_two_density");
  Grid grid = make_grid(cm.threshold->env.space, {static_cast<int>(state.range(0))});
  Integrator integ(cm.threshold->env, cm.integrator);
  GridFunction psi = GridFunction::constant(grid, 0.0);
  for (auto _ : state) {
    psi = apply_jovanovic(cm.threshold->env, psi, integ);
    benchmark::DoNotOptimize(psi);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_JovanovicSweepEnv)->RangeMultiplier(2)->Range(25, 400)->Complexity();

static void BM_BellmanSweepFull(benchmark::State& state) {
  CatalogModel cm = build_model("js_two_density");
  Grid grid = make_grid(cm.model.space, {static_cast<int>(state.range(0)), 50});
  Integrator integ(cm.model, cm.integrator);
  GridFunction v = GridFunction::constant(grid, 0.0);
  for (auto _ : state) {
    v = apply_bellman(cm.model, v, integ);
    benchmark::DoNotOptimize(v);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BellmanSweepFull)->RangeMultiplier(2)->Range(25, 200)->Complexity();

static void BM_GridEval2d(benchmark::State& state) {
  StateSpace sp({0.0, 0.0}, {1.0, 1.0});
  Grid grid = make_grid(sp, {100, 100});
  std::vector<double> vals(grid.size());
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = static_cast<double>(i % 97);
  GridFunction f(grid, vals);
  double x = 0.0;
  for (auto _ : state) {
    x += 1e-4;
    if (x > 1.0) x = 0.0;
    benchmark::DoNotOptimize(f(Point{x, 1.0 - x}));
  }
}
BENCHMARK(BM_GridEval2d);

static void BM_GaussHermiteExpectation(benchmark::State& state) {
  CatalogModel cm = build_model("js_markov_crra");
  IntegratorSpec spec{IntegratorKind::gauss_hermite, 1000, static_cast<int>(state.range(0)), 0};
  Integrator integ(cm.model, spec);
  Point z{0.3};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        integ.expect(z, [](const Point& zp) { return std::exp(0.5 * zp[0]); }));
  }
}
BENCHMARK(BM_GaussHermiteExpectation)->Arg(5)->Arg(20)->Arg(80);

BENCHMARK_MAIN();
