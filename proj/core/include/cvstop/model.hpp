#ifndef CVSTOP_MODEL_HPP
#define CVSTOP_MODEL_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cvstop/grid.hpp"
#include "cvstop/point.hpp"
#include "cvstop/rng.hpp"

namespace cvstop {

// State-dependent density over a fixed one-dimensional abscissa set, used by
// the grid-quadrature integration backend.  `weights` are the geometric
// (trapezoid) weights of `nodes`; the effective weight at state z is
// weights[j] * density(z, nodes[j]), normalized over j.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::function<double(const Point& z, double s)> density;
  std::function<Point(const Point& z, double s)> next;
};

// A stopping problem: exit payoff r, flow payoff c, discount factor, and a
// Markov transition driven by unit shocks.  Immutable after construction and
// safe to share across threads; all callables are pure.
//
// For threshold models solved on the environment grid, `step` returns the
// full next state (threshold coordinate first) while `continuation_coords`
// projects it onto the coordinates the continuation function is defined on.
struct DecisionModel {
  double beta = 0.95;
  StateSpace space;  // the grid states of this model

  std::function<double(const Point&)> exit_payoff;  // r, on sampled next states
  std::function<double(const Point&)> flow_payoff;  // c, on grid states

  int shock_dim = 1;
  ShockKind shock_kind = ShockKind::normal;
  // Deterministic transition: same (state, shock) always yields the same
  // next state.
  std::function<Point(const Point&, std::span<const double>)> step;

  // Maps a sampled next state to the query point for the iterated function;
  // identity when absent.
  std::function<Point(const Point&)> continuation_coords;

  std::optional<QuadratureRule> quad;

  // One-step transition density f(z'|z), when the kernel has one.
  std::function<double(const Point& next, const Point& from)> kernel_density;

  Point psi_coords(const Point& next) const {
    return continuation_coords ? continuation_coords(next) : next;
  }
};

struct KernelMassCheck {
  Point state;
  double estimate = 0.0;  // Monte Carlo estimate of the kernel's total mass
  double se = 0.0;
  bool pass = false;
};

// Monte Carlo check that kernel_density integrates to one over the model box
// (uniform proposal, 3-standard-error band).  Test states are drawn from the
// central half of the box so truncation mass is negligible.
std::vector<KernelMassCheck> check_kernel_mass(const DecisionModel& model, int n_states,
                                               int draws, std::uint64_t seed);

}  // namespace cvstop

#endif
