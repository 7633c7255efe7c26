#ifndef CVSTOP_BENCH_HPP
#define CVSTOP_BENCH_HPP

#include <map>
#include <string>
#include <vector>

#include "cvstop/catalog.hpp"
#include "cvstop/grid.hpp"
#include "cvstop/integrate.hpp"

namespace cvstop {

struct BenchmarkConfig {
  std::string model_id = "js_two_density";
  std::map<std::string, double> params;
  std::vector<int> counts;              // full grid; empty = catalog default
  std::vector<double> precisions{1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
  int cvi_reps = 3;
  int vfi_reps = 1;
  bool run_vfi = true;
  IntegratorSpec integrator;            // seed/backend; kind from catalog if unset
  bool use_catalog_integrator = true;
  int max_iter = 200000;
  std::string label = "test";
};

struct BenchmarkRow {
  std::string label;
  std::string method;  // "cvi" or "vfi"
  double precision = 0.0;
  double mean_time_s = 0.0;
  int iterations = 0;
  bool converged = true;
};

struct BenchmarkResult {
  std::vector<BenchmarkRow> rows;
  // per precision: max-node |v_vfi - max(r, psi_cvi)| on the full grid
  std::vector<std::pair<double, double>> sup_gaps;
  std::vector<std::pair<double, double>> speedups;  // (precision, vfi/cvi time)
  int threads = 1;
  std::string build_type;
};

// Times continuation-value iteration against full-grid value function
// iteration at each precision level.  Each (method, precision) cell is a
// mean over repetitions with one discarded warm-up run; iteration counts and
// solution gaps are seed-deterministic, wall times are not.
BenchmarkResult run_benchmark(const BenchmarkConfig& cfg);

// Max-node absolute gap between two functions evaluated on a common grid.
double compare_solutions(const GridFunction& a, const GridFunction& b, const Grid& common_grid);

// Cost model for adding a parametric dimension: measures one operator sweep
// at desk scale for both methods, with and without the extra axis, and
// projects full-scale totals from the contraction modulus.
struct DimScalingReport {
  double vfi_sweep_base_s = 0.0;   // one sweep, 2-d grid
  double vfi_sweep_extra_s = 0.0;  // one sweep, 3-d grid
  double cvi_sweep_base_s = 0.0;   // one sweep, 1-d environment grid
  double cvi_sweep_extra_s = 0.0;  // one sweep, 2-d environment grid
  double sweep_ratio_vfi = 0.0;    // extra / base, ~ the added axis size
  double projected_iterations = 0.0;
  double vfi_projected_total_s = 0.0;  // full-scale extrapolation
  double cvi_projected_total_s = 0.0;
};

// Adds a flow-compensation axis with `extra_count` points to the two-density
// search model at desk-scale `counts`, and extrapolates to
// `full_scale_counts` grid points per axis at the given tolerance.
DimScalingReport project_added_dimension_cost(const std::map<std::string, double>& params,
                                              std::vector<int> counts, int extra_count,
                                              std::vector<int> full_scale_counts,
                                              int full_scale_extra, double tol);

}  // namespace cvstop

#endif
