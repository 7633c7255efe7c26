#ifndef CVSTOP_THRESHOLD_HPP
#define CVSTOP_THRESHOLD_HPP

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cvstop/grid.hpp"
#include "cvstop/model.hpp"

namespace cvstop {

enum class Monotone { increasing, decreasing };
enum class Action { stop, wait };

// A stopping problem whose state splits as z = (x, y): the scalar threshold
// coordinate x (always dimension 0 of the full state) with the exit payoff
// strictly monotone in it, and the environment y that alone drives
// transitions.  `env` is the model iterated on the environment grid: its
// transitions return full next states, its continuation_coords drops x.
struct ThresholdModel {
  DecisionModel env;
  Monotone direction = Monotone::increasing;
  std::function<double(double x, const Point& y)> exit_at;  // r(x, y)
  std::pair<double, double> default_bracket{0.0, 1.0};
  // domain of the threshold coordinate; bracket expansion approaches a
  // finite limit geometrically instead of crossing it
  double x_floor = -std::numeric_limits<double>::infinity();
  double x_ceil = std::numeric_limits<double>::infinity();

  // optional analytic payoff derivatives for the threshold gradient
  std::function<double(double, const Point&)> dr_dx;
  std::vector<std::function<double(double, const Point&)>> dr_denv;
};

// Decision threshold on the environment grid: r(xbar(y), y) = psi*(y).
struct ThresholdCurve {
  Grid env_grid;
  std::vector<double> values;
  Monotone direction = Monotone::increasing;

  double operator()(const Point& y) const {
    return GridFunction(env_grid, values)(y);
  }
};

// Bisection root of x -> r(x, y) - psi*(y) at every environment node.  The
// bracket is widened (at most 60 doublings) until it straddles a sign
// change; a node with no crossing raises NoThresholdError naming y.
ThresholdCurve solve_threshold_curve(const ThresholdModel& tm, const GridFunction& psi_star,
                                     std::pair<double, double> x_bracket, double root_tol);

// Reservation policy.  Ties stop: with r increasing in x, stop iff
// x >= xbar(y); decreasing, stop iff x <= xbar(y).  xbar is evaluated with
// clamp extrapolation off-grid.
Action decide(const ThresholdModel& tm, double x, const Point& y, const ThresholdCurve& curve);

// Derivative of the threshold along environment dimension i at an interior
// grid node:
//   D_i xbar(y) = -( D_i r(xbar(y), y) - D_i psi*(y) ) / D_x r(xbar(y), y).
// Payoff derivatives use the model's analytic forms when present, else
// central differences; D_i psi* uses central differences on the grid.
double threshold_gradient(const ThresholdModel& tm, const GridFunction& psi_star,
                          const ThresholdCurve& curve, std::span<const int> y_index, int i);

// Spot-checks the conditional-independence contract: stepping two states
// that differ only in x with equal shocks must yield identical next states,
// and r must be strictly monotone in x at sampled points.
void validate_threshold(const ThresholdModel& tm, const DecisionModel& full_model,
                        int samples, std::uint64_t seed);

}  // namespace cvstop

#endif
