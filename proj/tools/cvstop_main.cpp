// cvstop: solve optimal-stopping models by continuation-value iteration,
// trace reservation thresholds, audit drift certificates, and benchmark
// against full-grid value function iteration.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cvstop/bench.hpp"
#include "cvstop/catalog.hpp"
#include "cvstop/config.hpp"
#include "cvstop/errors.hpp"
#include "cvstop/io.hpp"
#include "cvstop/operators.hpp"
#include "cvstop/threshold.hpp"

namespace fs = std::filesystem;
using namespace cvstop;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path ensure_out_dir(const std::string& out) {
  fs::path dir = out.empty() ? fs::path(".") : fs::path(out);
  fs::create_directories(dir);
  return dir;
}

struct SolvedCvi {
  CatalogModel cm;
  Grid grid;
  FixedPointResult res;
};

SolvedCvi run_cvi(const RunConfig& cfg) {
  SolvedCvi s{build_model(cfg.model, {}), {}, {}};
  s.cm = build_model(cfg.model, cfg.params);
  const DecisionModel& model = s.cm.threshold ? s.cm.threshold->env : s.cm.model;
  if (s.cm.threshold) {
    std::vector<int> env_counts(cfg.counts.begin() + 1, cfg.counts.end());
    if (env_counts.empty()) env_counts = s.cm.env_counts;
    s.grid = make_grid(model.space, env_counts, s.cm.env_scaling);
  } else {
    s.grid = make_grid(model.space, cfg.counts, s.cm.scaling);
  }
  s.res = solve_cvi(model, s.grid, cfg.integrator, cfg.tol, cfg.max_iter);
  return s;
}

int cmd_solve(const RunConfig& cfg, const fs::path& dir) {
  if (cfg.method == "vfi") {
    CatalogModel cm = build_model(cfg.model, cfg.params);
    Grid grid = make_grid(cm.model.space, cfg.counts, cm.scaling);
    auto res = solve_vfi(cm.model, grid, cfg.integrator, cfg.tol, cfg.max_iter);
    write_text_file(dir / "v.csv", grid_function_csv(res.value, "v"));
    write_text_file(dir / "solve_report.json", solve_report_json(res.report));
    std::printf("vfi: %d iterations, converged=%d, %.3f s\n", res.report.iterations,
                res.report.converged ? 1 : 0, res.report.wall_time_s);
    return res.report.converged ? 0 : 3;
  }
  SolvedCvi s = run_cvi(cfg);
  write_text_file(dir / "psi.csv", grid_function_csv(s.res.value, "psi"));
  write_text_file(dir / "solve_report.json", solve_report_json(s.res.report));
  std::printf("cvi: %d iterations, converged=%d, %.3f s\n", s.res.report.iterations,
              s.res.report.converged ? 1 : 0, s.res.report.wall_time_s);
  return s.res.report.converged ? 0 : 3;
}

int cmd_threshold(const RunConfig& cfg, const fs::path& dir) {
  SolvedCvi s = run_cvi(cfg);
  if (!s.cm.threshold)
    throw ConfigError("model '" + cfg.model + "' has no threshold decomposition");
  const ThresholdModel& tm = *s.cm.threshold;
  auto bracket = cfg.threshold.bracket_set
                     ? std::make_pair(cfg.threshold.bracket_lo, cfg.threshold.bracket_hi)
                     : tm.default_bracket;
  double root_tol = cfg.threshold.root_tol_rel * (bracket.second - bracket.first);
  ThresholdCurve curve = solve_threshold_curve(tm, s.res.value, bracket, root_tol);
  write_text_file(dir / "threshold.csv", threshold_curve_csv(curve));
  write_text_file(dir / "psi.csv", grid_function_csv(s.res.value, "psi"));
  write_text_file(dir / "solve_report.json", solve_report_json(s.res.report));
  std::printf("threshold: %zu nodes, cvi %d iterations, %.3f s\n", curve.values.size(),
              s.res.report.iterations, s.res.report.wall_time_s);
  return s.res.report.converged ? 0 : 3;
}

int cmd_verify_drift(const RunConfig& cfg, const fs::path& dir) {
  if (!cfg.seed_provided) throw ConfigError("field 'seed' is required for any Monte Carlo run");
  CatalogModel cm = build_model(cfg.model, cfg.params);
  std::vector<Point> states = diagonal_states(cm.model.space, cfg.drift.states);
  DriftReport rep = verify_drift(cm.model, cm.cert, states, cfg.drift.draws,
                                 cfg.integrator.seed, cfg.drift.horizon);
  write_text_file(dir / "drift_report.json", drift_report_json(rep));
  std::printf("verify-drift: %s (%zu checks)\n", rep.passed ? "pass" : "VIOLATION",
              rep.checks.size());
  return 0;  // a violated bound is a report outcome, not a failure
}

int cmd_bench(const RunConfig& cfg, const fs::path& dir) {
  BenchmarkConfig bc;
  bc.model_id = cfg.model;
  bc.params = cfg.params;
  bc.counts = cfg.bench.counts.empty() ? cfg.counts : cfg.bench.counts;
  bc.precisions = cfg.bench.precisions;
  bc.cvi_reps = cfg.bench.cvi_reps;
  bc.vfi_reps = cfg.bench.vfi_reps;
  bc.integrator = cfg.integrator;
  bc.max_iter = cfg.max_iter;
  bc.label = cfg.bench.label;
  bc.use_catalog_integrator = false;
  BenchmarkResult res = run_benchmark(bc);
  write_text_file(dir / "bench_times.csv", benchmark_times_csv(res));
  write_text_file(dir / "bench_accuracy.csv", benchmark_accuracy_csv(res));
  write_text_file(dir / "bench_env.json", benchmark_env_json(res));
  for (const auto& [p, sgap] : res.sup_gaps)
    std::printf("precision %.1e: method sup gap %.3e\n", p, sgap);
  for (const auto& [p, sp] : res.speedups)
    std::printf("precision %.1e: cvi speedup %.1fx\n", p, sp);
  return 0;
}

int cmd_show_model(const std::string& id, const std::string& out) {
  CatalogModel cm = build_model(id, {});
  nlohmann::ordered_json j;
  j["id"] = cm.id;
  j["params"] = cm.params;
  j["state"] = nlohmann::ordered_json::object();
  for (int d = 0; d < cm.model.space.dim; ++d) {
    j["state"][cm.model.space.names[static_cast<std::size_t>(d)]] = {
        {"lo", cm.model.space.lower[static_cast<std::size_t>(d)]},
        {"hi", cm.model.space.upper[static_cast<std::size_t>(d)]},
        {"grid", d < static_cast<int>(cm.counts.size()) ? cm.counts[static_cast<std::size_t>(d)] : 0}};
  }
  j["certificate"] = {{"n", cm.cert.n},
                      {"m", cm.cert.m},
                      {"d", cm.cert.d},
                      {"payoff_scale", cm.cert.payoff_scale},
                      {"payoff_offset", cm.cert.payoff_offset}};
  j["default_integrator"] = {{"kind", to_string(cm.integrator.kind)},
                             {"draws", cm.integrator.draws},
                             {"order", cm.integrator.order}};
  j["threshold_state"] = cm.threshold ? cm.model.space.names[0] : "";
  j["closed_form_reservation"] = cm.closed_form_reservation;
  std::string text = j.dump(2) + "\n";
  if (!out.empty()) {
    fs::path dir = ensure_out_dir(out);
    write_text_file(dir / "model.json", text);
  }
  std::fputs(text.c_str(), stdout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"continuation-value solver for optimal stopping problems"};
  app.require_subcommand(1);

  std::string config_path, out_dir, model_id;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_dir, "output directory (default: current)");
  };
  CLI::App* solve = app.add_subcommand("solve", "iterate the continuation-value operator");
  add_common(solve);
  CLI::App* threshold = app.add_subcommand("threshold", "solve and trace the decision threshold");
  add_common(threshold);
  CLI::App* bench = app.add_subcommand("bench", "time CVI against VFI across precisions");
  add_common(bench);
  CLI::App* drift = app.add_subcommand("verify-drift", "audit the model's drift certificate");
  add_common(drift);
  CLI::App* show = app.add_subcommand("show-model", "print a catalog entry's defaults");
  show->add_option("id", model_id, "catalog model id")->required();
  show->add_option("--out", out_dir, "output directory (also writes model.json)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (show->parsed()) return cmd_show_model(model_id, out_dir);

    RunConfig cfg = parse_config(read_file(config_path));
    fs::path dir = ensure_out_dir(out_dir);
    if (solve->parsed()) {
      cfg.command = Command::solve;
      return cmd_solve(cfg, dir);
    }
    if (threshold->parsed()) {
      cfg.command = Command::threshold;
      return cmd_threshold(cfg, dir);
    }
    if (bench->parsed()) {
      cfg.command = Command::bench;
      return cmd_bench(cfg, dir);
    }
    cfg.command = Command::verify_drift;
    return cmd_verify_drift(cfg, dir);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
