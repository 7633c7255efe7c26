#ifndef CVSTOP_CONFIG_HPP
#define CVSTOP_CONFIG_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cvstop/integrate.hpp"

namespace cvstop {

enum class Command { solve, threshold, bench, verify_drift, show_model };

std::string to_string(Command c);

struct ThresholdSection {
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  bool bracket_set = false;  // false: use the model's default bracket
  double root_tol_rel = 1e-10;  // absolute tolerance = rel * bracket width

  friend bool operator==(const ThresholdSection&, const ThresholdSection&) = default;
};

struct DriftSection {
  int draws = 100000;
  int horizon = 5;
  int states = 10;

  friend bool operator==(const DriftSection&, const DriftSection&) = default;
};

struct BenchSection {
  std::vector<double> precisions{1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
  int cvi_reps = 3;
  int vfi_reps = 1;
  std::vector<int> counts;  // empty: grid counts from the top-level config
  std::string label = "test";

  friend bool operator==(const BenchSection&, const BenchSection&) = default;
};

// One run of the tool, fully resolved: model defaults are filled in at parse
// time so an emitted config reproduces the run exactly.
struct RunConfig {
  Command command = Command::solve;
  std::string model;
  std::map<std::string, double> params;  // resolved (defaults + overrides)
  std::vector<int> counts;               // full grid
  std::string method = "cvi";            // solve: cvi or vfi
  IntegratorSpec integrator;
  bool seed_provided = false;
  double tol = 1e-6;
  int max_iter = 100000;
  ThresholdSection threshold;
  DriftSection drift;
  BenchSection bench;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Strict JSON config parser: unknown keys are rejected with the offending
// field named, numerics are type-checked, the model id must exist, and a
// seed is required whenever the run would draw Monte Carlo samples.
RunConfig parse_config(const std::string& text);

// Inverse of parse_config on valid configs: parse(emit(cfg)) == cfg.
std::string emit_config(const RunConfig& cfg);

}  // namespace cvstop

#endif
