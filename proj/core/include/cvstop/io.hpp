#ifndef CVSTOP_IO_HPP
#define CVSTOP_IO_HPP

#include <filesystem>
#include <string>

#include "cvstop/bench.hpp"
#include "cvstop/grid.hpp"
#include "cvstop/operators.hpp"
#include "cvstop/threshold.hpp"
#include "cvstop/weights.hpp"

namespace cvstop {

// All writers are deterministic: fixed key order, 17-significant-digit
// numerics, no timestamps.  Equal inputs produce byte-identical files.
// Wall-clock fields are excluded unless explicitly requested, so rerunning a
// seeded command reproduces its artifacts bit for bit.

std::string format_full(double v);  // %.17g

std::string grid_function_csv(const GridFunction& f, const std::string& value_name);
std::string threshold_curve_csv(const ThresholdCurve& curve);

std::string solve_report_json(const SolveReport& rep, bool include_timing = false);
std::string drift_report_json(const DriftReport& rep);
std::string benchmark_times_csv(const BenchmarkResult& res);     // wall times (volatile)
std::string benchmark_accuracy_csv(const BenchmarkResult& res);  // deterministic
std::string benchmark_env_json(const BenchmarkResult& res);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace cvstop

#endif
