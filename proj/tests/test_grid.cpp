#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "cvstop/errors.hpp"
#include "cvstop/grid.hpp"
#include "cvstop/rng.hpp"

using namespace cvstop;

TEST_CASE("uniform grid hits the bounds with even spacing") {
  Grid g = make_grid(StateSpace({0.0}, {2.0}), {3});
  REQUIRE(g.axes[0].size() == 3);
  CHECK(g.axes[0][0] == 0.0);
  CHECK(g.axes[0][1] == doctest::Approx(1.0));
  CHECK(g.axes[0][2] == 2.0);
}

TEST_CASE("log-dense grid packs nodes toward the lower bound") {
  Grid g = make_grid(StateSpace({1e-4}, {10.0}), {200}, {GridScaling::log_dense_lower});
  const auto& ax = g.axes[0];
  CHECK(ax.front() == 1e-4);
  CHECK(ax.back() == 10.0);
  double first_gap = ax[1] - ax[0];
  double last_gap = ax[199] - ax[198];
  CHECK(first_gap < last_gap);
  for (std::size_t i = 0; i + 1 < ax.size(); ++i) CHECK(ax[i] < ax[i + 1]);
}

TEST_CASE("two-dimensional grid has a product point count") {
  Grid g = make_grid(StateSpace({0.0, 1e-4}, {2.0, 1.0 - 1e-4}), {100, 50});
  CHECK(g.size() == 5000);
}

TEST_CASE("bad grid requests are configuration errors") {
  CHECK_THROWS_AS(make_grid(StateSpace({0.0}, {1.0}), {1}), ConfigError);
  double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(make_grid(StateSpace({0.0}, {inf}), {10}), ConfigError);
  CHECK_THROWS_AS(make_grid(StateSpace({0.0}, {1.0}), {10}, {GridScaling::log_dense_lower}),
                  ConfigError);
  CHECK_THROWS_AS(StateSpace({1.0}, {0.0}), ConfigError);
}

TEST_CASE("evaluation: node exactness, midpoint, clamp") {
  Grid g;
  g.axes = {{0.0, 2.0}};
  g.names = {"z"};
  GridFunction stored(g, {7.5, 9.0});
  CHECK(stored(Point{0.0}) == 7.5);

  GridFunction line(g, {0.0, 4.0});
  CHECK(line(Point{1.0}) == doctest::Approx(2.0));
  CHECK(line(Point{3.0}) == 4.0);   // clamp above
  CHECK(line(Point{-1.0}) == 0.0);  // clamp below
}

TEST_CASE("NaN query coordinates are rejected") {
  Grid g = make_grid(StateSpace({0.0}, {1.0}), {4});
  GridFunction f = GridFunction::constant(g, 1.0);
  CHECK_THROWS_AS(f(Point{std::nan("")}), InputError);
}

TEST_CASE("non-finite node values are rejected") {
  Grid g = make_grid(StateSpace({0.0}, {1.0}), {2});
  CHECK_THROWS_AS(GridFunction(g, {1.0, std::numeric_limits<double>::infinity()}), InputError);
}

TEST_CASE("flatten and unflatten are inverse") {
  Grid g = make_grid(StateSpace({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}), {3, 4, 5});
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto idx = g.unflatten(i);
    CHECK(g.flatten(idx) == i);
  }
}

TEST_CASE("interpolation is exact at every node of random grids") {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    int dim = 1 + static_cast<int>(rng.raw() % 3);
    std::vector<int> counts;
    std::vector<double> lo, hi;
    for (int d = 0; d < dim; ++d) {
      counts.push_back(2 + static_cast<int>(rng.raw() % 6));
      double a = -2.0 + 4.0 * rng.uniform();
      lo.push_back(a);
      hi.push_back(a + 0.5 + 3.0 * rng.uniform());
    }
    Grid g = make_grid(StateSpace(lo, hi), counts);
    std::vector<double> vals(g.size());
    for (double& v : vals) v = rng.normal();
    GridFunction f(g, vals);
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(f(g.node(i)) == doctest::Approx(f.value_at(i)).epsilon(1e-14));
    }
  }
}

TEST_CASE("multilinear interpolation preserves monotonicity along a dimension") {
  Rng rng(12);
  Grid g = make_grid(StateSpace({0.0, 0.0}, {1.0, 1.0}), {7, 5});
  // values nondecreasing along dimension 0
  std::vector<double> vals(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto idx = g.unflatten(i);
    vals[i] = 2.0 * idx[0] + rng.uniform();
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto idx = g.unflatten(i);
    if (idx[0] > 0) {
      auto prev = idx;
      prev[0] -= 1;
      REQUIRE(vals[i] >= vals[g.flatten(prev)]);
    }
  }
  GridFunction f(g, vals);
  for (int t = 0; t < 300; ++t) {
    double x1 = rng.uniform(), x2 = rng.uniform(), y = rng.uniform();
    double lo_x = std::min(x1, x2), hi_x = std::max(x1, x2);
    CHECK(f(Point{hi_x, y}) >= f(Point{lo_x, y}) - 1e-12);
  }
}

TEST_CASE("evaluation outside the hull equals evaluation at the clamped projection") {
  Rng rng(13);
  Grid g = make_grid(StateSpace({-1.0, 2.0}, {1.0, 3.0}), {6, 4});
  std::vector<double> vals(g.size());
  for (double& v : vals) v = rng.normal();
  GridFunction f(g, vals);
  for (int t = 0; t < 200; ++t) {
    Point z{-3.0 + 6.0 * rng.uniform(), 5.0 * rng.uniform()};
    Point clamped = z;
    clamped[0] = std::clamp(z[0], -1.0, 1.0);
    clamped[1] = std::clamp(z[1], 2.0, 3.0);
    CHECK(f(z) == doctest::Approx(f(clamped)).epsilon(1e-14));
  }
}
