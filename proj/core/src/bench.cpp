#include "cvstop/bench.hpp"

#include <chrono>
#include <cmath>

#include "cvstop/errors.hpp"
#include "cvstop/operators.hpp"
#include "cvstop/parallel.hpp"

namespace cvstop {

namespace {

double now_minus(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

double compare_solutions(const GridFunction& a, const GridFunction& b, const Grid& common_grid) {
  double gap = 0.0;
  for (std::size_t i = 0; i < common_grid.size(); ++i) {
    Point z = common_grid.node(i);
    gap = std::max(gap, std::abs(a(z) - b(z)));
  }
  return gap;
}

BenchmarkResult run_benchmark(const BenchmarkConfig& cfg) {
  for (std::size_t i = 1; i < cfg.precisions.size(); ++i) {
    if (!(cfg.precisions[i] < cfg.precisions[i - 1]))
      throw ConfigError("benchmark precisions must be strictly decreasing");
  }
  if (cfg.cvi_reps < 1 || cfg.vfi_reps < 1)
    throw ConfigError("benchmark repetitions must be >= 1");

  CatalogModel cm = build_model(cfg.model_id, cfg.params);
  IntegratorSpec spec = cfg.use_catalog_integrator ? cm.integrator : cfg.integrator;
  spec.seed = cfg.integrator.seed;

  std::vector<int> counts = cfg.counts.empty() ? cm.counts : cfg.counts;
  Grid full = make_grid(cm.model.space, counts, cm.scaling);

  const DecisionModel& cvi_model = cm.threshold ? cm.threshold->env : cm.model;
  Grid cvi_grid = full;
  if (cm.threshold) {
    // environment grid: drop the threshold axis from the full grid
    StateSpace env_sp = cm.threshold->env.space;
    std::vector<int> env_counts(counts.begin() + 1, counts.end());
    std::vector<GridScaling> env_sc =
        cm.scaling.empty() ? std::vector<GridScaling>{}
                           : std::vector<GridScaling>(cm.scaling.begin() + 1, cm.scaling.end());
    cvi_grid = make_grid(env_sp, env_counts, env_sc);
  }

  BenchmarkResult out;
  out.threads = thread_count();
#ifdef NDEBUG
  out.build_type = "release";
#else
  out.build_type = "debug";
#endif

  for (double prec : cfg.precisions) {
    GridFunction psi_star(cvi_grid, std::vector<double>(cvi_grid.size(), 0.0));
    BenchmarkRow cvi_row{cfg.label, "cvi", prec, 0.0, 0, true};
    double time_sum = 0.0;
    for (int rep = 0; rep <= cfg.cvi_reps; ++rep) {
      auto res = solve_cvi(cvi_model, cvi_grid, spec, prec, cfg.max_iter);
      if (rep > 0) time_sum += res.report.wall_time_s;  // first run is warm-up
      cvi_row.iterations = res.report.iterations;
      cvi_row.converged = res.report.converged;
      psi_star = std::move(res.value);
    }
    cvi_row.mean_time_s = time_sum / cfg.cvi_reps;
    out.rows.push_back(cvi_row);

    if (!cfg.run_vfi) continue;

    GridFunction v_star(full, std::vector<double>(full.size(), 0.0));
    BenchmarkRow vfi_row{cfg.label, "vfi", prec, 0.0, 0, true};
    time_sum = 0.0;
    for (int rep = 0; rep <= cfg.vfi_reps; ++rep) {
      auto res = solve_vfi(cm.model, full, spec, prec, cfg.max_iter);
      if (rep > 0) time_sum += res.report.wall_time_s;
      vfi_row.iterations = res.report.iterations;
      vfi_row.converged = res.report.converged;
      v_star = std::move(res.value);
    }
    vfi_row.mean_time_s = time_sum / cfg.vfi_reps;
    out.rows.push_back(vfi_row);

    GridFunction v_from_cvi = value_from_continuation(cm.model, full, psi_star);
    out.sup_gaps.emplace_back(prec, sup_distance(v_from_cvi, v_star));
    out.speedups.emplace_back(prec, vfi_row.mean_time_s / std::max(cvi_row.mean_time_s, 1e-12));
  }
  return out;
}

namespace {

// two-density search model with an extra frozen compensation axis
struct FamilyModels {
  DecisionModel full3;  // (w, pi, c0)
  DecisionModel env2;   // (pi, c0)
};

FamilyModels make_two_density_family(const std::map<std::string, double>& params, double c0_hi) {
  CatalogModel base = build_model("js_two_density", params);
  double beta = base.model.beta;
  const QuadratureRule& q2 = *base.model.quad;

  FamilyModels fm;
  fm.full3.beta = beta;
  fm.full3.space = StateSpace({base.model.space.lower[0], base.model.space.lower[1], 0.0},
                              {base.model.space.upper[0], base.model.space.upper[1], c0_hi},
                              {"w", "pi", "c0"});
  fm.full3.exit_payoff = [beta](const Point& z) { return z[0] / (1.0 - beta); };
  fm.full3.flow_payoff = [](const Point& z) { return z[2]; };
  fm.full3.shock_dim = 2;
  fm.full3.shock_kind = ShockKind::uniform;
  auto base_step = base.model.step;
  fm.full3.step = [base_step](const Point& z, std::span<const double> u) {
    Point wp = base_step(Point{z[0], z[1]}, u);
    return Point{wp[0], wp[1], z[2]};
  };
  fm.full3.quad = QuadratureRule{
      q2.nodes, q2.weights,
      [d = q2.density](const Point& z, double s) { return d(Point{z[0], z[1]}, s); },
      [n = q2.next](const Point& z, double s) {
        Point wp = n(Point{z[0], z[1]}, s);
        return Point{wp[0], wp[1], z[2]};
      }};

  fm.env2.beta = beta;
  fm.env2.space = StateSpace({base.model.space.lower[1], 0.0},
                             {base.model.space.upper[1], c0_hi}, {"pi", "c0"});
  fm.env2.exit_payoff = fm.full3.exit_payoff;
  fm.env2.flow_payoff = [](const Point& y) { return y[1]; };
  fm.env2.shock_dim = 2;
  fm.env2.shock_kind = ShockKind::uniform;
  const auto& env_quad = *base.threshold->env.quad;
  fm.env2.quad = QuadratureRule{
      env_quad.nodes, env_quad.weights,
      [d = env_quad.density](const Point& y, double s) { return d(Point{y[0]}, s); },
      [n = env_quad.next](const Point& y, double s) {
        Point wp = n(Point{y[0]}, s);  // (w', pi')
        return Point{wp[0], wp[1], y[1]};
      }};
  fm.env2.continuation_coords = [](const Point& zp) { return zp.tail(); };
  return fm;
}

template <class F>
double time_sweep(F&& sweep, int reps = 3) {
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < reps; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    sweep();
    best = std::min(best, now_minus(t0));
  }
  return best;
}

}  // namespace

DimScalingReport project_added_dimension_cost(const std::map<std::string, double>& params,
                                              std::vector<int> counts, int extra_count,
                                              std::vector<int> full_scale_counts,
                                              int full_scale_extra, double tol) {
  if (counts.size() != 2 || full_scale_counts.size() != 2)
    throw ConfigError("dimension-cost projection expects 2-d base grids");

  CatalogModel base = build_model("js_two_density", params);
  double beta = base.model.beta;
  FamilyModels fm = make_two_density_family(params, 1.5);

  Grid full2 = make_grid(base.model.space, counts);
  Grid env1 = make_grid(base.threshold->env.space, {counts[1]});
  Grid full3 = make_grid(fm.full3.space, {counts[0], counts[1], extra_count});
  Grid env2 = make_grid(fm.env2.space, {counts[1], extra_count});

  IntegratorSpec spec = base.integrator;
  Integrator i_full2(base.model, spec), i_env1(base.threshold->env, spec);
  Integrator i_full3(fm.full3, spec), i_env2(fm.env2, spec);

  GridFunction v2 = GridFunction::constant(full2, 0.0);
  GridFunction p1 = GridFunction::constant(env1, 0.0);
  GridFunction v3 = GridFunction::constant(full3, 0.0);
  GridFunction p2 = GridFunction::constant(env2, 0.0);

  DimScalingReport rep;
  rep.vfi_sweep_base_s = time_sweep([&] { apply_bellman(base.model, v2, i_full2); });
  rep.vfi_sweep_extra_s = time_sweep([&] { apply_bellman(fm.full3, v3, i_full3); });
  rep.cvi_sweep_base_s = time_sweep([&] { apply_jovanovic(base.threshold->env, p1, i_env1); });
  rep.cvi_sweep_extra_s = time_sweep([&] { apply_jovanovic(fm.env2, p2, i_env2); });
  rep.sweep_ratio_vfi = rep.vfi_sweep_extra_s / rep.vfi_sweep_base_s;

  // geometric convergence at modulus beta from the first-sweep gap
  GridFunction v3b = apply_bellman(fm.full3, v3, i_full3);
  double gap0 = sup_distance(v3b, v3);
  rep.projected_iterations = std::ceil(std::log(tol / std::max(gap0, tol)) / std::log(beta)) + 1.0;

  double desk_nodes_vfi = static_cast<double>(full3.size());
  double full_nodes_vfi = static_cast<double>(full_scale_counts[0]) * full_scale_counts[1] *
                          full_scale_extra;
  double desk_nodes_cvi = static_cast<double>(env2.size());
  double full_nodes_cvi = static_cast<double>(full_scale_counts[1]) * full_scale_extra;
  rep.vfi_projected_total_s =
      rep.vfi_sweep_extra_s * (full_nodes_vfi / desk_nodes_vfi) * rep.projected_iterations;
  rep.cvi_projected_total_s =
      rep.cvi_sweep_extra_s * (full_nodes_cvi / desk_nodes_cvi) * rep.projected_iterations;
  return rep;
}

}  // namespace cvstop
