#include "cvstop/config.hpp"

#include <nlohmann/json.hpp>

#include "cvstop/catalog.hpp"
#include "cvstop/errors.hpp"

namespace cvstop {

using json = nlohmann::ordered_json;

std::string to_string(Command c) {
  switch (c) {
    case Command::solve: return "solve";
    case Command::threshold: return "threshold";
    case Command::bench: return "bench";
    case Command::verify_drift: return "verify-drift";
    case Command::show_model: return "show-model";
  }
  return "solve";
}

namespace {

void reject_unknown(const json& obj, const std::vector<std::string>& allowed,
                    const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

double as_number(const json& v, const std::string& field) {
  if (!v.is_number()) throw ConfigError("field '" + field + "' must be a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& field) {
  if (!v.is_number_integer()) throw ConfigError("field '" + field + "' must be an integer");
  return v.get<int>();
}

std::vector<int> as_int_list(const json& v, const std::string& field) {
  if (!v.is_array()) throw ConfigError("field '" + field + "' must be a list");
  std::vector<int> out;
  for (const auto& e : v) out.push_back(as_int(e, field));
  return out;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(root,
                 {"model", "params", "seed", "tol", "max_iter", "method", "counts",
                  "integrator", "threshold", "drift", "bench"},
                 "config");

  RunConfig cfg;
  if (!root.contains("model") || !root["model"].is_string())
    throw ConfigError("config needs a string field 'model'");
  cfg.model = root["model"].get<std::string>();

  std::map<std::string, double> overrides;
  if (root.contains("params")) {
    if (!root["params"].is_object()) throw ConfigError("field 'params' must be an object");
    for (const auto& [k, v] : root["params"].items())
      overrides[k] = as_number(v, "params." + k);
  }
  // resolves defaults and validates the id, ranges and overrides
  CatalogModel cm = build_model(cfg.model, overrides);
  cfg.params = cm.params;
  cfg.counts = cm.counts;
  cfg.integrator = cm.integrator;

  if (root.contains("counts")) cfg.counts = as_int_list(root["counts"], "counts");
  if (root.contains("tol")) {
    cfg.tol = as_number(root["tol"], "tol");
    if (!(cfg.tol > 0.0)) throw ConfigError("field 'tol' must be positive");
  }
  if (root.contains("max_iter")) {
    cfg.max_iter = as_int(root["max_iter"], "max_iter");
    if (cfg.max_iter < 1) throw ConfigError("field 'max_iter' must be >= 1");
  }
  if (root.contains("method")) {
    if (!root["method"].is_string()) throw ConfigError("field 'method' must be a string");
    cfg.method = root["method"].get<std::string>();
    if (cfg.method != "cvi" && cfg.method != "vfi")
      throw ConfigError("field 'method' must be 'cvi' or 'vfi'");
  }

  if (root.contains("integrator")) {
    const json& it = root["integrator"];
    if (!it.is_object()) throw ConfigError("field 'integrator' must be an object");
    reject_unknown(it, {"kind", "draws", "order"}, "integrator");
    if (it.contains("kind")) {
      if (!it["kind"].is_string()) throw ConfigError("field 'integrator.kind' must be a string");
      cfg.integrator.kind = integrator_kind_from_string(it["kind"].get<std::string>());
    }
    if (it.contains("draws")) {
      cfg.integrator.draws = as_int(it["draws"], "integrator.draws");
      if (cfg.integrator.draws < 1) throw ConfigError("field 'integrator.draws' must be >= 1");
    }
    if (it.contains("order")) {
      cfg.integrator.order = as_int(it["order"], "integrator.order");
      if (cfg.integrator.order < 1) throw ConfigError("field 'integrator.order' must be >= 1");
    }
  }

  if (root.contains("seed")) {
    if (!root["seed"].is_number_integer()) throw ConfigError("field 'seed' must be an integer");
    cfg.integrator.seed = root["seed"].get<std::uint64_t>();
    cfg.seed_provided = true;
  }
  if (!cfg.seed_provided && cfg.integrator.kind == IntegratorKind::monte_carlo)
    throw ConfigError("field 'seed' is required for any Monte Carlo run");

  if (root.contains("threshold")) {
    const json& th = root["threshold"];
    if (!th.is_object()) throw ConfigError("field 'threshold' must be an object");
    reject_unknown(th, {"bracket", "root_tol"}, "threshold");
    if (th.contains("bracket")) {
      if (!th["bracket"].is_array() || th["bracket"].size() != 2)
        throw ConfigError("field 'threshold.bracket' must be [lo, hi]");
      cfg.threshold.bracket_lo = as_number(th["bracket"][0], "threshold.bracket");
      cfg.threshold.bracket_hi = as_number(th["bracket"][1], "threshold.bracket");
      cfg.threshold.bracket_set = true;
      if (!(cfg.threshold.bracket_lo < cfg.threshold.bracket_hi))
        throw ConfigError("field 'threshold.bracket' needs lo < hi");
    }
    if (th.contains("root_tol")) {
      cfg.threshold.root_tol_rel = as_number(th["root_tol"], "threshold.root_tol");
      if (!(cfg.threshold.root_tol_rel > 0.0))
        throw ConfigError("field 'threshold.root_tol' must be positive");
    }
  }

  if (root.contains("drift")) {
    const json& dr = root["drift"];
    if (!dr.is_object()) throw ConfigError("field 'drift' must be an object");
    reject_unknown(dr, {"draws", "horizon", "states"}, "drift");
    if (dr.contains("draws")) cfg.drift.draws = as_int(dr["draws"], "drift.draws");
    if (dr.contains("horizon")) cfg.drift.horizon = as_int(dr["horizon"], "drift.horizon");
    if (dr.contains("states")) cfg.drift.states = as_int(dr["states"], "drift.states");
    if (cfg.drift.draws < 100) throw ConfigError("field 'drift.draws' must be >= 100");
    if (cfg.drift.horizon < 1) throw ConfigError("field 'drift.horizon' must be >= 1");
    if (cfg.drift.states < 1) throw ConfigError("field 'drift.states' must be >= 1");
  }

  if (root.contains("bench")) {
    const json& bn = root["bench"];
    if (!bn.is_object()) throw ConfigError("field 'bench' must be an object");
    reject_unknown(bn, {"precisions", "cvi_reps", "vfi_reps", "counts", "label"}, "bench");
    if (bn.contains("precisions")) {
      if (!bn["precisions"].is_array()) throw ConfigError("field 'bench.precisions' must be a list");
      cfg.bench.precisions.clear();
      for (const auto& e : bn["precisions"])
        cfg.bench.precisions.push_back(as_number(e, "bench.precisions"));
    }
    if (bn.contains("cvi_reps")) cfg.bench.cvi_reps = as_int(bn["cvi_reps"], "bench.cvi_reps");
    if (bn.contains("vfi_reps")) cfg.bench.vfi_reps = as_int(bn["vfi_reps"], "bench.vfi_reps");
    if (bn.contains("counts")) cfg.bench.counts = as_int_list(bn["counts"], "bench.counts");
    if (bn.contains("label")) {
      if (!bn["label"].is_string()) throw ConfigError("field 'bench.label' must be a string");
      cfg.bench.label = bn["label"].get<std::string>();
    }
  }

  return cfg;
}

std::string emit_config(const RunConfig& cfg) {
  json root;
  root["model"] = cfg.model;
  root["params"] = json::object();
  for (const auto& [k, v] : cfg.params) root["params"][k] = v;
  if (cfg.seed_provided) root["seed"] = cfg.integrator.seed;
  root["tol"] = cfg.tol;
  root["max_iter"] = cfg.max_iter;
  root["method"] = cfg.method;
  root["counts"] = cfg.counts;
  root["integrator"] = {{"kind", to_string(cfg.integrator.kind)},
                        {"draws", cfg.integrator.draws},
                        {"order", cfg.integrator.order}};
  json th;
  if (cfg.threshold.bracket_set)
    th["bracket"] = {cfg.threshold.bracket_lo, cfg.threshold.bracket_hi};
  th["root_tol"] = cfg.threshold.root_tol_rel;
  root["threshold"] = th;
  root["drift"] = {{"draws", cfg.drift.draws},
                   {"horizon", cfg.drift.horizon},
                   {"states", cfg.drift.states}};
  root["bench"] = {{"precisions", cfg.bench.precisions},
                   {"cvi_reps", cfg.bench.cvi_reps},
                   {"vfi_reps", cfg.bench.vfi_reps},
                   {"counts", cfg.bench.counts},
                   {"label", cfg.bench.label}};
  return root.dump(2) + "\n";
}

}  // namespace cvstop
