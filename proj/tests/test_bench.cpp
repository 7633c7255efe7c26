#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cvstop/bench.hpp"
#include "cvstop/io.hpp"
#include "cvstop/operators.hpp"

using namespace cvstop;

TEST_CASE("solution comparison on a common grid") {
  Grid g = make_grid(StateSpace({0.0}, {1.0}), {5});
  GridFunction a(g, {1.0, 2.0, 3.0, 4.0, 5.0});
  CHECK(compare_solutions(a, a, g) == 0.0);

  std::vector<double> shifted{1.0 + 1e-6, 2.0 + 1e-6, 3.0 + 1e-6, 4.0 + 1e-6, 5.0 + 1e-6};
  GridFunction b(g, shifted);
  CHECK(compare_solutions(a, b, g) == doctest::Approx(1e-6).epsilon(1e-9));
}

TEST_CASE("benchmark runs both methods at every precision and logs gaps") {
  BenchmarkConfig cfg;
  cfg.model_id = "js_two_density";
  cfg.counts = {30, 10};
  cfg.precisions = {1e-3, 1e-4};
  cfg.cvi_reps = 1;
  cfg.vfi_reps = 1;
  BenchmarkResult res = run_benchmark(cfg);

  REQUIRE(res.rows.size() == 4);  // 2 methods x 2 precisions
  REQUIRE(res.sup_gaps.size() == 2);
  for (const auto& row : res.rows) {
    CHECK(row.converged);
    CHECK(row.iterations > 0);
    CHECK(row.mean_time_s >= 0.0);
  }
  for (const auto& [prec, gap] : res.sup_gaps) {
    CHECK(gap >= 0.0);
    CHECK(gap < 1.0);
  }
  // tighter precision cannot take fewer iterations
  CHECK(res.rows[2].iterations >= res.rows[0].iterations);

  // iteration counts and solution gaps are reproducible
  BenchmarkResult res2 = run_benchmark(cfg);
  for (std::size_t i = 0; i < res.rows.size(); ++i)
    CHECK(res.rows[i].iterations == res2.rows[i].iterations);
  for (std::size_t i = 0; i < res.sup_gaps.size(); ++i)
    CHECK(res.sup_gaps[i].second == res2.sup_gaps[i].second);
  CHECK(benchmark_accuracy_csv(res) == benchmark_accuracy_csv(res2));
}

TEST_CASE("decreasing precisions are enforced") {
  BenchmarkConfig cfg;
  cfg.precisions = {1e-3, 1e-3};
  CHECK_THROWS_AS(run_benchmark(cfg), ConfigError);
}

TEST_CASE("value iteration cost grows with the grid while CVI shrugs it off") {
  BenchmarkConfig small;
  small.counts = {40, 10};
  small.precisions = {1e-4};
  small.cvi_reps = 1;
  small.vfi_reps = 1;
  BenchmarkResult rs = run_benchmark(small);

  BenchmarkConfig big = small;
  big.counts = {160, 10};  // 4x the w axis
  BenchmarkResult rb = run_benchmark(big);

  auto time_of = [](const BenchmarkResult& r, const std::string& method) {
    for (const auto& row : r.rows)
      if (row.method == method) return row.mean_time_s;
    return -1.0;
  };
  // quadrupling the threshold axis should cost VFI visibly more
  CHECK(time_of(rb, "vfi") > 2.0 * time_of(rs, "vfi"));
  // and the environment solve not at all (same grid; allow generous jitter)
  CHECK(time_of(rb, "cvi") < 10.0 * time_of(rs, "cvi") + 1e-3);
}

TEST_CASE("adding a frozen axis multiplies the full-grid sweep cost") {
  DimScalingReport rep = project_added_dimension_cost(
      {}, {30, 10}, 8, {100, 100}, 100, 1e-6);
  CHECK(rep.sweep_ratio_vfi > 3.0);
  CHECK(rep.sweep_ratio_vfi < 30.0);
  CHECK(rep.projected_iterations > 10.0);
  CHECK(rep.vfi_projected_total_s > rep.cvi_projected_total_s);
  CHECK(std::isfinite(rep.vfi_projected_total_s));
}

TEST_CASE("benchmark tables carry the layout the results need") {
  BenchmarkConfig cfg;
  cfg.counts = {20, 8};
  cfg.precisions = {1e-3, 1e-4};
  cfg.cvi_reps = 1;
  cfg.vfi_reps = 1;
  cfg.label = "t2";
  BenchmarkResult res = run_benchmark(cfg);

  std::string times = benchmark_times_csv(res);
  CHECK(times.find("label,method") == 0);
  CHECK(times.find("t2,vfi") != std::string::npos);
  CHECK(times.find("t2,cvi") != std::string::npos);

  std::string acc = benchmark_accuracy_csv(res);
  CHECK(acc.find("label,precision,method,iterations,converged,sup_gap") == 0);

  std::string env = benchmark_env_json(res);
  CHECK(env.find("threads") != std::string::npos);
  CHECK(env.find("build_type") != std::string::npos);
}
