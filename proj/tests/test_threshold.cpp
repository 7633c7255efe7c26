#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cvstop/catalog.hpp"
#include "cvstop/operators.hpp"
#include "cvstop/threshold.hpp"

using namespace cvstop;

namespace {

// synthetic threshold wiring with an analytic exit payoff
ThresholdModel linear_exit(double beta) {
  ThresholdModel tm;
  tm.direction = Monotone::increasing;
  tm.exit_at = [beta](double x, const Point&) { return x / (1.0 - beta); };
  tm.default_bracket = {0.0, 2.0};
  return tm;
}

Grid env_line(int n = 11, double lo = 0.0, double hi = 1.0) {
  return make_grid(StateSpace({lo}, {hi}, {"y"}), {n});
}

}  // namespace

TEST_CASE("bisection finds the indifference point of a linear exit payoff") {
  ThresholdModel tm = linear_exit(0.95);
  Grid env = env_line();
  GridFunction psi = GridFunction::constant(env, 12.0);
  ThresholdCurve curve = solve_threshold_curve(tm, psi, {0.0, 2.0}, 1e-10);
  for (double v : curve.values) CHECK(v == doctest::Approx(0.6).epsilon(1e-8));
}

TEST_CASE("the reservation wage of the two-density search model matches its closed form") {
  CatalogModel cm = build_model("js_two_density");
  Grid env = cm.env_grid();
  auto res = solve_cvi(cm.threshold->env, env, cm.integrator, 1e-10, 20000);
  REQUIRE(res.report.converged);

  double root_tol = 1e-12 * 2.0;
  ThresholdCurve curve =
      solve_threshold_curve(*cm.threshold, res.value, cm.threshold->default_bracket, root_tol);
  for (std::size_t i = 0; i < env.size(); ++i) {
    double closed = reservation_closed_form("js_two_density", res.value.value_at(i), cm.params);
    CHECK(std::abs(curve.values[i] - closed) <= 2.0 * root_tol);
  }

  // root residual: |r(xbar, y) - psi*(y)| <= 2 |D_x r| root_tol
  double slope = 1.0 / (1.0 - cm.model.beta);
  for (std::size_t i = 0; i < env.size(); ++i) {
    Point y = env.node(i);
    double resid = std::abs(cm.threshold->exit_at(curve.values[i], y) - res.value.value_at(i));
    CHECK(resid <= 2.0 * slope * root_tol);
  }

  // the reservation policy agrees with the stop set of the solved values
  Grid full = cm.full_grid();
  for (std::size_t i = 0; i < full.size(); ++i) {
    Point z = full.node(i);
    Point y = z.tail();
    bool stop_by_values = cm.model.exit_payoff(z) >= res.value(y);
    bool stop_by_curve = decide(*cm.threshold, z[0], y, curve) == Action::stop;
    CHECK(stop_by_values == stop_by_curve);
  }
}

TEST_CASE("a payoff that never reaches the continuation value raises no-threshold") {
  ThresholdModel tm;
  tm.direction = Monotone::increasing;
  tm.exit_at = [](double x, const Point&) { return std::tanh(x); };  // bounded by 1
  Grid env = env_line(5);
  GridFunction psi = GridFunction::constant(env, 5.0);
  CHECK_THROWS_AS(solve_threshold_curve(tm, psi, {-1.0, 1.0}, 1e-10), NoThresholdError);

  // continuation value below the lowest exit payoff on a floored domain
  ThresholdModel fl = linear_exit(0.95);
  fl.x_floor = 0.0;
  GridFunction low = GridFunction::constant(env, -1.0);
  CHECK_THROWS_AS(solve_threshold_curve(fl, low, {1e-6, 2.0}, 1e-10), NoThresholdError);
}

TEST_CASE("ties stop, and the decreasing direction flips the rule") {
  ThresholdModel up = linear_exit(0.95);
  Grid env = env_line(3);
  ThresholdCurve curve{env, std::vector<double>(env.size(), 0.6), Monotone::increasing};
  CHECK(decide(up, 0.6, Point{0.5}, curve) == Action::stop);  // exact tie
  CHECK(decide(up, 0.59, Point{0.5}, curve) == Action::wait);
  CHECK(decide(up, 0.61, Point{0.5}, curve) == Action::stop);

  ThresholdModel down;
  down.direction = Monotone::decreasing;
  down.exit_at = [](double f, const Point&) { return 1.0 - f; };
  ThresholdCurve fbar{env, std::vector<double>(env.size(), 0.6), Monotone::decreasing};
  CHECK(decide(down, 0.5, Point{0.5}, fbar) == Action::stop);  // cost below the cutoff
  CHECK(decide(down, 0.7, Point{0.5}, fbar) == Action::wait);
  CHECK(decide(down, 0.6, Point{0.5}, fbar) == Action::stop);
}

TEST_CASE("threshold gradient: linear case and the r-independent reduction") {
  // r(x, y) = x + y and psi*(y) = 2y give xbar(y) = y with slope one
  ThresholdModel tm;
  tm.direction = Monotone::increasing;
  tm.exit_at = [](double x, const Point& y) { return x + y[0]; };
  Grid env = env_line(11);
  std::vector<double> psi_vals(env.size());
  for (std::size_t i = 0; i < env.size(); ++i) psi_vals[i] = 2.0 * env.node(i)[0];
  GridFunction psi(env, psi_vals);
  ThresholdCurve curve = solve_threshold_curve(tm, psi, {-5.0, 5.0}, 1e-12);
  int mid[] = {5};
  CHECK(threshold_gradient(tm, psi, curve, mid, 0) == doctest::Approx(1.0).epsilon(1e-6));

  // r independent of y: D_i xbar = D_i psi* / D_x r
  ThresholdModel tm2;
  tm2.direction = Monotone::increasing;
  tm2.exit_at = [](double x, const Point&) { return 2.0 * x; };
  std::vector<double> quad_vals(env.size());
  for (std::size_t i = 0; i < env.size(); ++i) {
    double y = env.node(i)[0];
    quad_vals[i] = y * y;
  }
  GridFunction psi2(env, quad_vals);
  ThresholdCurve curve2 = solve_threshold_curve(tm2, psi2, {-5.0, 5.0}, 1e-12);
  for (int i : {2, 5, 8}) {
    int idx[] = {i};
    double grad = threshold_gradient(tm2, psi2, curve2, idx, 0);
    double y_up = env.axes[0][static_cast<std::size_t>(i + 1)];
    double y_dn = env.axes[0][static_cast<std::size_t>(i - 1)];
    double dpsi = (psi2.value_at(static_cast<std::size_t>(i + 1)) -
                   psi2.value_at(static_cast<std::size_t>(i - 1))) /
                  (y_up - y_dn);
    CHECK(grad == doctest::Approx(dpsi / 2.0).epsilon(1e-9));
  }

  int at_edge[] = {0};
  CHECK_THROWS_AS(threshold_gradient(tm2, psi2, curve2, at_edge, 0), BoundaryDerivativeError);
}

TEST_CASE("a monotone continuation value with x-only payoff gives a monotone threshold") {
  ThresholdModel tm = linear_exit(0.95);
  Grid env = env_line(21);
  std::vector<double> vals(env.size());
  for (std::size_t i = 0; i < env.size(); ++i) {
    double y = env.node(i)[0];
    vals[i] = 5.0 + 4.0 * y * y;  // increasing on [0, 1]
  }
  GridFunction psi(env, vals);
  ThresholdCurve curve = solve_threshold_curve(tm, psi, {0.0, 2.0}, 1e-12);
  for (std::size_t i = 0; i + 1 < curve.values.size(); ++i)
    CHECK(curve.values[i + 1] >= curve.values[i] - 1e-11);
}

TEST_CASE("conditional independence holds for the catalog threshold models") {
  for (const char* id : {"js_two_density", "js_learning_normal", "firm_entry", "js_perm_trans"}) {
    CatalogModel cm = build_model(id);
    REQUIRE(cm.threshold.has_value());
    validate_threshold(*cm.threshold, cm.model, 50, 1234);
  }

  // a transition leaking the threshold coordinate is caught
  CatalogModel cm = build_model("js_two_density");
  ThresholdModel broken = *cm.threshold;
  DecisionModel leaky = cm.model;
  leaky.step = [](const Point& z, std::span<const double> u) {
    return Point{2.0 * u[0], std::clamp(z[1] + 0.01 * z[0], 1e-4, 1.0 - 1e-4)};
  };
  CHECK_THROWS_AS(validate_threshold(broken, leaky, 50, 1234), NumericError);
}
