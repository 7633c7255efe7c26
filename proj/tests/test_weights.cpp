#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cvstop/catalog.hpp"
#include "cvstop/weights.hpp"
#include "support.hpp"

using namespace cvstop;

namespace {

DriftCertificate abs_cert(double m, double d) {
  DriftCertificate c;
  c.g = [](const Point& z) { return std::abs(z[0]); };
  c.m = m;
  c.d = d;
  return c;
}

}  // namespace

TEST_CASE("modulus constants satisfy their strict inequalities") {
  auto check_pair = [](double m, double d, double beta) {
    DriftCertificate c = abs_cert(m, d);
    auto [mp, dp] = choose_modulus_constants(c, beta);
    CHECK(m + 2.0 * mp > 1.0);
    CHECK(beta * (m + 2.0 * mp) < 1.0);
    CHECK(dp >= d / (m + 2.0 * mp - 1.0));
    CHECK(mp > 0.0);
    CHECK(dp > 0.0);
  };
  check_pair(1.0, 0.0, 0.95);
  check_pair(1.0, 0.5, 0.9);   // d = 1/theta at theta = 2
  check_pair(0.3, 2.0, 0.99);  // m < 1 exercises the midpoint fallback
  check_pair(1.04, 0.0, 0.95);

  CHECK_THROWS_AS(choose_modulus_constants(abs_cert(2.0, 0.0), 0.6), CertificateError);
}

TEST_CASE("modulus constants are deterministic") {
  DriftCertificate c = abs_cert(0.9, 1.0);
  auto a = choose_modulus_constants(c, 0.95);
  auto b = choose_modulus_constants(c, 0.95);
  CHECK(a == b);
}

TEST_CASE("weight function closed forms at n = 0 and n = 1") {
  DecisionModel m = testsupport::constant_model(1.0, 0.6, 0.5);

  DriftCertificate c0 = abs_cert(1.0, 0.0);
  WeightFunction w0 = build_weight_function(m, c0, 0.01, 2.0, {});
  CHECK(w0.ell(Point{3.0}) == doctest::Approx(5.0).epsilon(1e-15));

  DriftCertificate c1;
  c1.g = [](const Point&) { return 0.0; };
  c1.n = 1;
  c1.m = 1.0;
  c1.d = 0.0;
  WeightFunction w1 = build_weight_function(m, c1, 1.0, 1.0, {});
  CHECK(w1.ell(Point{0.2}) == doctest::Approx(1.6).epsilon(1e-15));
  CHECK(w1.ell(Point{0.9}) == doctest::Approx(1.6).epsilon(1e-15));
}

TEST_CASE("one-step weight matches the certificate pieces pointwise") {
  CatalogModel cm = build_model("js_learning_normal");
  WeightFunction wf = build_weight_function(cm.model, cm.cert, cm.integrator);
  double c0 = std::abs(cm.model.flow_payoff(Point{1.0, 0.0, 1.0}));
  for (double mu : {-2.0, 0.0, 3.0}) {
    Point z{1.0, mu, 0.7};
    double want = wf.m_prime * c0 + cm.cert.g(z) + wf.d_prime;
    CHECK(wf.ell(z) == doctest::Approx(want).epsilon(1e-14));
  }
}

TEST_CASE("bounded-model weight collapses to a constant") {
  CatalogModel cm = build_model("js_bounded");
  WeightFunction wf = build_weight_function(cm.model, cm.cert, cm.integrator);
  double v0 = wf.ell(Point{0.0});
  CHECK(v0 == cm.cert.g(Point{0.0}) + wf.d_prime);
  for (double w : {0.3, 1.1, 2.0}) CHECK(wf.ell(Point{w}) == v0);
}

TEST_CASE("weighted sup norm definition and errors") {
  Grid g = make_grid(StateSpace({0.0}, {1.0}), {5});

  DriftCertificate c;
  c.g = [](const Point&) { return 0.5; };
  WeightFunction wf = build_weight_function(testsupport::constant_model(0, 0, 0.5), c, 0.1, 1.0, {});
  // ell == 1.5 everywhere
  std::vector<double> ell_vals(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) ell_vals[i] = wf.ell(g.node(i));
  GridFunction as_ell(g, ell_vals);
  CHECK(weighted_sup_norm(as_ell, wf) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(weighted_sup_norm(GridFunction::constant(g, 0.0), wf) == 0.0);
  CHECK(weighted_sup_norm(GridFunction::constant(g, 3.0), wf) ==
        doctest::Approx(2.0).epsilon(1e-15));

  WeightFunction bad = wf;
  bad.ell = [](const Point&) { return -1.0; };
  CHECK_THROWS_AS(weighted_sup_norm(GridFunction::constant(g, 1.0), bad), NumericError);
}

TEST_CASE("weighted sup norm is a norm on sampled pairs") {
  Rng rng(21);
  Grid g = make_grid(StateSpace({-1.0}, {1.0}), {9});
  DriftCertificate c = abs_cert(1.0, 0.5);
  WeightFunction wf =
      build_weight_function(testsupport::constant_model(0, 0, 0.9), c, 0.02, 1.0, {});
  for (int t = 0; t < 50; ++t) {
    std::vector<double> fa(g.size()), fb(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      fa[i] = rng.normal();
      fb[i] = rng.normal();
    }
    double a = 0.5 + 3.0 * rng.uniform();
    GridFunction f(g, fa), h(g, fb);
    std::vector<double> scaled(g.size()), sum(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      scaled[i] = a * fa[i];
      sum[i] = fa[i] + fb[i];
    }
    CHECK(weighted_sup_norm(GridFunction(g, scaled), wf) ==
          doctest::Approx(a * weighted_sup_norm(f, wf)).epsilon(1e-12));
    CHECK(weighted_sup_norm(GridFunction(g, sum), wf) <=
          weighted_sup_norm(f, wf) + weighted_sup_norm(h, wf) + 1e-12);
  }
}

TEST_CASE("bounded job search certificate holds with no statistical slack") {
  CatalogModel cm = build_model("js_bounded");
  DriftReport rep = verify_drift(cm.model, cm.cert, cm.drift_states, 2000, 99);
  CHECK(rep.passed);
  for (const auto& chk : rep.checks) CHECK(chk.margin >= -1e-12);
}

TEST_CASE("log-utility Markov search certificate passes and a falsified modulus fails") {
  CatalogModel cm = build_model("js_markov_crra");  // delta 1, rho 0.9, sigma 1, b 0
  CHECK(cm.cert.n == 0);
  CHECK(cm.cert.m == doctest::Approx(0.9));
  CHECK(cm.cert.d == doctest::Approx(1.0));

  DriftReport ok = verify_drift(cm.model, cm.cert, cm.drift_states, 100000, 7);
  CHECK(ok.passed);

  DriftCertificate lied = cm.cert;
  lied.m = 0.5;
  DriftReport bad = verify_drift(cm.model, lied, cm.drift_states, 100000, 7);
  CHECK_FALSE(bad.passed);
  // the drift bound must be the broken one, at states far from the origin
  bool drift_broken = false;
  for (const auto& chk : bad.checks) {
    if (!chk.pass && (chk.quantity == "drift" || chk.quantity == "horizon_bound") &&
        std::abs(chk.state[0]) > 2.5)
      drift_broken = true;
  }
  CHECK(drift_broken);
}

TEST_CASE("verify_drift validates its inputs") {
  CatalogModel cm = build_model("js_bounded");
  CHECK_THROWS_AS(verify_drift(cm.model, cm.cert, cm.drift_states, 50, 1), ConfigError);
  std::vector<Point> outside{Point{99.0}};
  CHECK_THROWS_AS(verify_drift(cm.model, cm.cert, outside, 1000, 1), InputError);
}

TEST_CASE("value envelope from the certificate in the memoryless case") {
  DecisionModel m = testsupport::constant_model(1.0, 0.6, 0.95);
  DriftCertificate c;
  c.g = [](const Point&) { return 2.0; };  // bounds |r| v |c| .. within scale 1
  c.n = 0;
  c.m = 1.0;
  c.d = 0.0;
  double bound = certificate_value_bound(m, c, Point{0.5}, {});
  // |c| + 2 g / (1 - beta m)
  CHECK(bound == doctest::Approx(0.6 + 2.0 * 2.0 / (1.0 - 0.95)).epsilon(1e-12));
}
