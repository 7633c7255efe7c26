#include "cvstop/operators.hpp"

#include <algorithm>
#include <cmath>

#include "cvstop/errors.hpp"
#include "cvstop/parallel.hpp"

namespace cvstop {

GridFunction apply_jovanovic(const DecisionModel& model, const GridFunction& psi,
                             const Integrator& integ) {
  const Grid& grid = psi.grid();
  std::vector<double> out(psi.size());
  parallel_for(psi.size(), [&](std::size_t i) {
    Point z = grid.node(i);
    double e = integ.expect(z, [&](const Point& zp) {
      double stop_value = model.exit_payoff(zp);
      double wait_value = psi(model.psi_coords(zp));
      return std::max(stop_value, wait_value);
    });
    out[i] = model.flow_payoff(z) + model.beta * e;
  });
  return GridFunction(grid, std::move(out));
}

GridFunction apply_bellman(const DecisionModel& model, const GridFunction& v,
                           const Integrator& integ) {
  const Grid& grid = v.grid();
  std::vector<double> out(v.size());
  parallel_for(v.size(), [&](std::size_t i) {
    Point z = grid.node(i);
    double e = integ.expect(z, [&](const Point& zp) { return v(zp); });
    out[i] = std::max(model.exit_payoff(z), model.flow_payoff(z) + model.beta * e);
  });
  return GridFunction(grid, std::move(out));
}

GridFunction value_from_continuation(const DecisionModel& model, const Grid& full_grid,
                                     const GridFunction& psi_star) {
  bool broadcast = psi_star.grid().dim() + 1 == full_grid.dim();
  if (!broadcast && psi_star.grid().dim() != full_grid.dim())
    throw InputError("value_from_continuation: continuation grid has incompatible dimension");
  std::vector<double> out(full_grid.size());
  for (std::size_t i = 0; i < full_grid.size(); ++i) {
    Point z = full_grid.node(i);
    double psi = broadcast ? psi_star(z.tail()) : psi_star(z);
    out[i] = std::max(model.exit_payoff(z), psi);
  }
  return GridFunction(full_grid, std::move(out));
}

GridFunction continuation_from_value(const DecisionModel& model, const Grid& grid,
                                     const GridFunction& v_star, const Integrator& integ) {
  std::vector<double> out(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    Point z = grid.node(i);
    double e = integ.expect(z, [&](const Point& zp) { return v_star(zp); });
    out[i] = model.flow_payoff(z) + model.beta * e;
  });
  return GridFunction(grid, std::move(out));
}

std::pair<GridFunction, GridFunction> apply_repeated(const DecisionModel& model,
                                                     const GridFunction& psi,
                                                     const GridFunction& rfun, double alpha,
                                                     const Integrator& integ) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("apply_repeated needs alpha in [0,1]");
  if (!(psi.grid() == rfun.grid()))
    throw InputError("apply_repeated: psi and r must live on one grid");
  const Grid& grid = psi.grid();
  std::vector<double> psi_out(psi.size()), r_out(psi.size());
  parallel_for(psi.size(), [&](std::size_t i) {
    Point z = grid.node(i);
    // both expectations share the same draws
    double e_max = integ.expect(z, [&](const Point& zp) {
      Point q = model.psi_coords(zp);
      return std::max(rfun(q), psi(q));
    });
    double e_r = integ.expect(z, [&](const Point& zp) { return rfun(model.psi_coords(zp)); });
    psi_out[i] = model.flow_payoff(z) + model.beta * e_max;
    r_out[i] = model.exit_payoff(z) + alpha * model.beta * e_max +
               (1.0 - alpha) * model.beta * e_r;
  });
  return {GridFunction(grid, std::move(psi_out)), GridFunction(grid, std::move(r_out))};
}

std::vector<GridFunction> apply_multichoice(std::span<const ChoiceAlternative> alts, double beta,
                                            std::span<const GridFunction> psis,
                                            const IntegratorSpec& spec) {
  if (alts.empty() || alts.size() != psis.size())
    throw ConfigError("apply_multichoice needs one continuation function per alternative");
  const Grid& grid = psis[0].grid();
  for (const auto& p : psis) {
    if (!(p.grid() == grid)) throw InputError("apply_multichoice: common grid required");
  }

  // one shock set shared by every alternative
  int max_dim = 0;
  for (const auto& a : alts) max_dim = std::max(max_dim, a.shock_dim);
  ShockKind kind = alts[0].shock_kind;
  for (const auto& a : alts) {
    if (a.shock_kind != kind)
      throw ConfigError("apply_multichoice: alternatives must share a shock kind");
  }
  if (spec.kind != IntegratorKind::monte_carlo)
    throw ConfigError("apply_multichoice currently supports the monte_carlo backend");
  ShockSet shocks = ShockSet::make(kind, spec.draws, 1, max_dim, spec.seed);

  auto best = [&](const Point& zp) {
    double b = psis[0](zp);
    for (std::size_t j = 1; j < psis.size(); ++j) b = std::max(b, psis[j](zp));
    return b;
  };

  std::vector<GridFunction> out;
  out.reserve(alts.size());
  for (std::size_t a = 0; a < alts.size(); ++a) {
    const ChoiceAlternative& alt = alts[a];
    std::vector<double> vals(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
      Point z = grid.node(i);
      double acc = 0.0;
      for (int k = 0; k < spec.draws; ++k) {
        std::span<const double> shock = shocks.at(k, 0);
        Point zp = alt.step(z, shock.subspan(0, static_cast<std::size_t>(alt.shock_dim)));
        double v = best(zp);
        if (!std::isfinite(v))
          throw EvaluationError("non-finite continuation at draw " + std::to_string(k));
        acc += v;
      }
      vals[i] = alt.reward(z) + beta * acc / spec.draws;
    });
    out.emplace_back(grid, std::move(vals));
  }
  return out;
}

double estimate_contraction_factor(const SolveReport& report) {
  const auto& e = report.errors;
  if (e.size() < 10)
    throw DiagnosticUnavailableError("contraction estimate needs at least 10 recorded gaps");
  std::vector<double> ratios;
  for (std::size_t i = 5; i + 1 < e.size(); ++i) {
    if (!(e[i] > 0.0))
      throw DiagnosticUnavailableError("contraction estimate undefined: gaps vanished");
    ratios.push_back(e[i + 1] / e[i]);
  }
  if (ratios.empty())
    throw DiagnosticUnavailableError("contraction estimate needs gaps beyond the burn-in");
  std::sort(ratios.begin(), ratios.end());
  std::size_t n = ratios.size();
  return n % 2 == 1 ? ratios[n / 2] : 0.5 * (ratios[n / 2 - 1] + ratios[n / 2]);
}

FixedPointResult solve_cvi(const DecisionModel& model, const Grid& grid,
                           const IntegratorSpec& spec, double tol, int max_iter,
                           const WeightFunction* wf) {
  Integrator integ(model, spec);
  GridFunction psi0 = GridFunction::constant(grid, 0.0);
  return iterate_to_fixed_point(
      [&](const GridFunction& p) { return apply_jovanovic(model, p, integ); }, std::move(psi0),
      tol, max_iter, spec, wf);
}

FixedPointResult solve_vfi(const DecisionModel& model, const Grid& grid,
                           const IntegratorSpec& spec, double tol, int max_iter) {
  Integrator integ(model, spec);
  // v0 = r
  std::vector<double> v0(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v0[i] = model.exit_payoff(grid.node(i));
  return iterate_to_fixed_point(
      [&](const GridFunction& v) { return apply_bellman(model, v, integ); },
      GridFunction(grid, std::move(v0)), tol, max_iter, spec);
}

}  // namespace cvstop
