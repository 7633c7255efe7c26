#ifndef CVSTOP_OPERATORS_HPP
#define CVSTOP_OPERATORS_HPP

#include <chrono>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "cvstop/grid.hpp"
#include "cvstop/integrate.hpp"
#include "cvstop/model.hpp"
#include "cvstop/weights.hpp"

namespace cvstop {

struct SolveReport {
  int iterations = 0;
  std::vector<double> errors;           // sup-norm gap per iteration
  std::vector<double> weighted_errors;  // ell-weighted gaps (diagnostic, optional)
  std::vector<double> iter_wall_s;      // cumulative wall time after each iteration
  double wall_time_s = 0.0;
  bool converged = false;
  IntegratorSpec spec;
  double tol = 0.0;
};

// One sweep of the continuation-value operator:
//   (Q psi)(z) = c(z) + beta E_z max{ r(z'), psi(z') }.
// psi is evaluated off-grid by multilinear interpolation with clamping; for
// environment-grid models the sampled next state is projected through
// continuation_coords before the psi lookup.
GridFunction apply_jovanovic(const DecisionModel& model, const GridFunction& psi,
                             const Integrator& integ);

// One sweep of the Bellman operator: (T v)(z) = max{ r(z), c(z) + beta E_z v }.
// Requires a model whose transitions stay on the grid's own state space.
GridFunction apply_bellman(const DecisionModel& model, const GridFunction& v,
                           const Integrator& integ);

// v = r "or" psi, pointwise on `full_grid`.  A continuation function defined
// on the environment coordinates (one dimension less, threshold coordinate
// first) is broadcast over the threshold axis.
GridFunction value_from_continuation(const DecisionModel& model, const Grid& full_grid,
                                     const GridFunction& psi_star);

// psi(z) = c(z) + beta E_z v*; evaluated on the grid of `model`'s state
// space as given by init_grid.
GridFunction continuation_from_value(const DecisionModel& model, const Grid& grid,
                                     const GridFunction& v_star, const Integrator& integ);

struct FixedPointResult {
  GridFunction value;
  SolveReport report;
};

// Iterates op until the sup-norm gap between successive iterates drops to
// tol.  Reaching max_iter is reported (converged = false), not thrown.
template <class Op>
FixedPointResult iterate_to_fixed_point(Op&& op, GridFunction init, double tol, int max_iter,
                                        const IntegratorSpec& spec = {},
                                        const WeightFunction* wf = nullptr) {
  if (!(tol > 0.0)) throw ConfigError("fixed point iteration needs tol > 0");
  if (max_iter < 1) throw ConfigError("fixed point iteration needs max_iter >= 1");

  FixedPointResult out;
  out.report.spec = spec;
  out.report.tol = tol;
  auto t0 = std::chrono::steady_clock::now();
  GridFunction cur = std::move(init);
  for (int k = 0; k < max_iter; ++k) {
    GridFunction next = op(cur);
    double gap = sup_distance(next, cur);
    out.report.errors.push_back(gap);
    if (wf) {
      double wgap = 0.0;
      for (std::size_t i = 0; i < next.size(); ++i) {
        double ell = wf->ell(next.grid().node(i));
        wgap = std::max(wgap, std::abs(next.value_at(i) - cur.value_at(i)) / ell);
      }
      out.report.weighted_errors.push_back(wgap);
    }
    out.report.iter_wall_s.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    cur = std::move(next);
    out.report.iterations = k + 1;
    if (gap <= tol) {
      out.report.converged = true;
      break;
    }
  }
  out.report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.value = std::move(cur);
  return out;
}

// Joint sweep for problems where stopping is temporary: the active branch
// keeps psi = c + beta P(r "or" psi) while the passive value follows
// r = s + alpha beta P(r "or" psi) + (1 - alpha) beta P r, with s the
// model's exit payoff and alpha the per-period reactivation probability.
std::pair<GridFunction, GridFunction> apply_repeated(const DecisionModel& model,
                                                     const GridFunction& psi,
                                                     const GridFunction& rfun, double alpha,
                                                     const Integrator& integ);

// One alternative of an N-choice timing problem: reward plus its own
// transition law.
struct ChoiceAlternative {
  std::function<double(const Point&)> reward;
  int shock_dim = 1;
  ShockKind shock_kind = ShockKind::normal;
  std::function<Point(const Point&, std::span<const double>)> step;
};

// Componentwise sweep psi_i' = r_i + beta E_{P_i} max_j psi_j.  All
// alternatives share one shock set so identical alternatives stay identical
// to machine precision.
std::vector<GridFunction> apply_multichoice(std::span<const ChoiceAlternative> alts, double beta,
                                            std::span<const GridFunction> psis,
                                            const IntegratorSpec& spec);

// Median of successive gap ratios after a 5-iteration burn-in; needs at
// least 10 recorded gaps and nonvanishing gaps in the window.
double estimate_contraction_factor(const SolveReport& report);

// Convenience drivers.
FixedPointResult solve_cvi(const DecisionModel& model, const Grid& grid,
                           const IntegratorSpec& spec, double tol, int max_iter,
                           const WeightFunction* wf = nullptr);
FixedPointResult solve_vfi(const DecisionModel& model, const Grid& grid,
                           const IntegratorSpec& spec, double tol, int max_iter);

}  // namespace cvstop

#endif
