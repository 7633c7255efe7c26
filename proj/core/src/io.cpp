#include "cvstop/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "cvstop/errors.hpp"

namespace cvstop {

using json = nlohmann::ordered_json;

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string grid_function_csv(const GridFunction& f, const std::string& value_name) {
  const Grid& g = f.grid();
  std::string out;
  for (int d = 0; d < g.dim(); ++d) {
    out += d < static_cast<int>(g.names.size()) ? g.names[static_cast<std::size_t>(d)]
                                                : "z" + std::to_string(d);
    out += ',';
  }
  out += value_name;
  out += '\n';
  for (std::size_t i = 0; i < f.size(); ++i) {
    Point z = g.node(i);
    for (int d = 0; d < g.dim(); ++d) {
      out += format_full(z[d]);
      out += ',';
    }
    out += format_full(f.value_at(i));
    out += '\n';
  }
  return out;
}

std::string threshold_curve_csv(const ThresholdCurve& curve) {
  GridFunction f(curve.env_grid, curve.values);
  return grid_function_csv(f, "x_bar");
}

std::string solve_report_json(const SolveReport& rep, bool include_timing) {
  json j;
  j["iterations"] = rep.iterations;
  j["converged"] = rep.converged;
  j["tol"] = rep.tol;
  j["integrator"] = {{"kind", to_string(rep.spec.kind)},
                     {"draws", rep.spec.draws},
                     {"order", rep.spec.order},
                     {"seed", rep.spec.seed}};
  j["errors"] = rep.errors;
  if (!rep.weighted_errors.empty()) j["weighted_errors"] = rep.weighted_errors;
  if (include_timing) {
    j["wall_time_s"] = rep.wall_time_s;
    j["iter_wall_s"] = rep.iter_wall_s;
  }
  return j.dump(2) + "\n";
}

std::string drift_report_json(const DriftReport& rep) {
  json j;
  j["seed"] = rep.seed;
  j["draws"] = rep.draws;
  j["horizon"] = rep.horizon;
  j["passed"] = rep.passed;
  j["checks"] = json::array();
  for (const auto& c : rep.checks) {
    json jc;
    jc["state"] = std::vector<double>(c.state.view().begin(), c.state.view().end());
    jc["quantity"] = c.quantity;
    jc["t"] = c.t;
    jc["estimate"] = c.estimate;
    jc["bound"] = c.bound;
    jc["se"] = c.se;
    jc["margin"] = c.margin;
    jc["pass"] = c.pass;
    j["checks"].push_back(jc);
  }
  return j.dump(2) + "\n";
}

std::string benchmark_times_csv(const BenchmarkResult& res) {
  // wide layout: one row per (label, method), one column per precision
  std::vector<double> precisions;
  for (const auto& r : res.rows) {
    if (std::find(precisions.begin(), precisions.end(), r.precision) == precisions.end())
      precisions.push_back(r.precision);
  }
  std::string out = "label,method";
  for (double p : precisions) out += "," + format_full(p);
  out += '\n';
  for (const std::string& method : {std::string("vfi"), std::string("cvi")}) {
    std::string row;
    std::string label;
    bool any = false;
    for (double p : precisions) {
      for (const auto& r : res.rows) {
        if (r.method == method && r.precision == p) {
          row += "," + format_full(r.mean_time_s);
          label = r.label;
          any = true;
        }
      }
    }
    if (any) out += label + "," + method + row + '\n';
  }
  return out;
}

std::string benchmark_accuracy_csv(const BenchmarkResult& res) {
  std::string out = "label,precision,method,iterations,converged,sup_gap\n";
  for (const auto& r : res.rows) {
    double gap = 0.0;
    for (const auto& [p, g] : res.sup_gaps) {
      if (p == r.precision) gap = g;
    }
    out += r.label + "," + format_full(r.precision) + "," + r.method + "," +
           std::to_string(r.iterations) + "," + (r.converged ? "1" : "0") + "," +
           format_full(gap) + '\n';
  }
  return out;
}

std::string benchmark_env_json(const BenchmarkResult& res) {
  json j;
  j["threads"] = res.threads;
  j["build_type"] = res.build_type;
  json sp = json::array();
  for (const auto& [p, s] : res.speedups) sp.push_back({{"precision", p}, {"speedup", s}});
  j["speedups"] = sp;
  return j.dump(2) + "\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw NumericError("cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out) throw NumericError("write failed for '" + path.string() + "'");
}

}  // namespace cvstop
