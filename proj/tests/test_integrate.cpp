#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cvstop/catalog.hpp"
#include "cvstop/integrate.hpp"
#include "support.hpp"

using namespace cvstop;

namespace {

DecisionModel ar1_model(double rho, double b, double sigma, double beta = 0.95) {
  DecisionModel m;
  m.beta = beta;
  m.space = StateSpace({-10.0}, {10.0}, {"z"});
  m.exit_payoff = [](const Point& z) { return z[0]; };
  m.flow_payoff = [](const Point&) { return 0.0; };
  m.shock_dim = 1;
  m.shock_kind = ShockKind::normal;
  m.step = [rho, b, sigma](const Point& z, std::span<const double> n) {
    return Point{rho * z[0] + b + sigma * n[0]};
  };
  return m;
}

}  // namespace

TEST_CASE("low-order Hermite rules match the textbook values") {
  auto [x1, w1] = gauss_hermite_nodes(1);
  CHECK(x1[0] == 0.0);
  CHECK(w1[0] == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-15));

  auto [x2, w2] = gauss_hermite_nodes(2);
  CHECK(x2[0] == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-13));
  CHECK(x2[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-13));
  CHECK(w2[0] == doctest::Approx(std::sqrt(M_PI) / 2.0).epsilon(1e-13));
  CHECK(w2[1] == doctest::Approx(std::sqrt(M_PI) / 2.0).epsilon(1e-13));
}

TEST_CASE("Hermite weights sum to sqrt(pi) at every order") {
  for (int order : {1, 2, 3, 5, 16, 33, 64, 128}) {
    auto [x, w] = gauss_hermite_nodes(order);
    double sum = 0.0;
    for (double v : w) sum += v;
    CHECK(std::abs(sum - std::sqrt(M_PI)) < 1e-12);
  }
  CHECK_THROWS_AS(gauss_hermite_nodes(0), ConfigError);
  CHECK_THROWS_AS(gauss_hermite_nodes(129), ConfigError);
}

TEST_CASE("order-2 rule integrates x^2 under N(0,1) exactly") {
  DecisionModel m = ar1_model(0.0, 0.0, 1.0);
  IntegratorSpec spec{IntegratorKind::gauss_hermite, 0, 2, 0};
  double v = expectation(m, Point{0.0}, [](const Point& z) { return z[0] * z[0]; }, spec);
  CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("a constant integrand has expectation one under every backend") {
  auto one = [](const Point&) { return 1.0; };

  DecisionModel gauss = ar1_model(0.5, 0.1, 0.7);
  CHECK(expectation(gauss, Point{0.3}, one, {IntegratorKind::monte_carlo, 500, 0, 7}) == 1.0);
  CHECK(expectation(gauss, Point{0.3}, one, {IntegratorKind::gauss_hermite, 0, 21, 0}) ==
        doctest::Approx(1.0).epsilon(1e-14));

  CatalogModel two = build_model("js_two_density");
  CHECK(expectation(two.threshold->env, Point{0.4}, one, two.integrator) ==
        doctest::Approx(1.0).epsilon(1e-14));

  DecisionModel unif = testsupport::constant_model(1.0, 0.0, 0.9);
  CHECK(expectation(unif, Point{0.2}, one, {IntegratorKind::monte_carlo, 333, 0, 9}) == 1.0);
}

TEST_CASE("linear integrand under the AR(1) kernel is exact at any order") {
  DecisionModel m = ar1_model(0.9, 0.4, 1.3);
  for (int order : {1, 2, 7}) {
    IntegratorSpec spec{IntegratorKind::gauss_hermite, 0, order, 0};
    double v = expectation(m, Point{0.5}, [](const Point& z) { return z[0]; }, spec);
    CHECK(v == doctest::Approx(0.9 * 0.5 + 0.4).epsilon(1e-14));
  }
}

TEST_CASE("exponential moment matches the lognormal closed form") {
  double rho = 0.9, b = 0.1, sigma = 1.0, a = -1.0, z = 0.3;
  DecisionModel m = ar1_model(rho, b, sigma);
  IntegratorSpec spec{IntegratorKind::gauss_hermite, 0, 20, 0};
  double v = expectation(m, Point{z}, [a](const Point& zp) { return std::exp(a * zp[0]); }, spec);
  double want = testsupport::lognormal_moment(a, rho * z + b, sigma * sigma);
  CHECK(std::abs(v / want - 1.0) < 1e-10);
}

TEST_CASE("equal specs give bit-identical expectations") {
  DecisionModel m = ar1_model(0.8, 0.0, 0.5);
  IntegratorSpec spec{IntegratorKind::monte_carlo, 2000, 0, 42};
  auto h = [](const Point& z) { return std::exp(0.3 * z[0]) + z[0] * z[0]; };
  Integrator a(m, spec), b(m, spec);
  for (double z0 : {-1.0, 0.0, 0.7, 2.5}) {
    double va = a.expect(Point{z0}, h);
    double vb = b.expect(Point{z0}, h);
    CHECK(va == vb);
    CHECK(va == expectation(m, Point{z0}, h, spec));
  }
}

TEST_CASE("non-finite integrand values name the draw") {
  DecisionModel m = ar1_model(0.8, 0.0, 0.5);
  IntegratorSpec spec{IntegratorKind::monte_carlo, 50, 0, 1};
  CHECK_THROWS_AS(
      expectation(m, Point{0.0}, [](const Point&) { return std::nan(""); }, spec),
      EvaluationError);
}

TEST_CASE("gauss_hermite refuses non-Gaussian unit shocks") {
  DecisionModel unif = testsupport::constant_model(1.0, 0.0, 0.9);
  IntegratorSpec spec{IntegratorKind::gauss_hermite, 0, 5, 0};
  CHECK_THROWS_AS(Integrator(unif, spec), ConfigError);
}

TEST_CASE("Monte Carlo error shrinks like one over the square root of draws") {
  DecisionModel m = ar1_model(0.9, 0.1, 1.0);
  auto h = [](const Point& z) { return z[0] * z[0]; };
  std::vector<int> draw_levels{100, 1000, 10000};
  std::vector<double> log_n, log_sd;
  for (int draws : draw_levels) {
    double sum = 0.0, sumsq = 0.0;
    const int reps = 200;
    for (int r = 0; r < reps; ++r) {
      IntegratorSpec spec{IntegratorKind::monte_carlo, draws, 0,
                          static_cast<std::uint64_t>(1000 + r)};
      double v = expectation(m, Point{0.5}, h, spec);
      sum += v;
      sumsq += v * v;
    }
    double mean = sum / reps;
    double sd = std::sqrt(std::max(0.0, sumsq / reps - mean * mean));
    log_n.push_back(std::log(static_cast<double>(draws)));
    log_sd.push_back(std::log(sd));
  }
  // least-squares slope of log sd on log n
  double nx = 0, ny = 0, nxy = 0, nxx = 0;
  int k = static_cast<int>(log_n.size());
  for (int i = 0; i < k; ++i) {
    nx += log_n[i];
    ny += log_sd[i];
    nxy += log_n[i] * log_sd[i];
    nxx += log_n[i] * log_n[i];
  }
  double slope = (k * nxy - nx * ny) / (k * nxx - nx * nx);
  CHECK(slope == doctest::Approx(-0.5).epsilon(0.2));  // -0.5 +- 0.1
}

TEST_CASE("path expectations iterate the kernel") {
  DecisionModel m = ar1_model(0.5, 0.0, 0.4);
  IntegratorSpec spec{IntegratorKind::monte_carlo, 200000, 0, 3};
  Integrator integ(m, spec, 3);
  // E_z Z_3 = rho^3 z
  double v = integ.expect_path(Point{2.0}, 3, [](const Point& z) { return z[0]; });
  CHECK(v == doctest::Approx(0.125 * 2.0).epsilon(0.02));
  CHECK_THROWS_AS(integ.expect_path(Point{2.0}, 4, [](const Point& z) { return z[0]; }),
                  ConfigError);
}
