#include "cvstop/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "cvstop/errors.hpp"

namespace cvstop {

double crra_utility(double w, double delta) {
  if (!(w > 0.0)) throw InputError("crra utility needs w > 0");
  if (delta == 1.0) return std::log(w);
  return std::pow(w, 1.0 - delta) / (1.0 - delta);
}

double scaled_beta_pdf(double w, double a, double b, double scale) {
  if (w < 0.0 || w > scale) return 0.0;
  double x = w / scale;
  double log_norm = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
  double v;
  if (x == 0.0) {
    v = a > 1.0 ? 0.0 : (a == 1.0 ? std::exp(log_norm) : std::numeric_limits<double>::infinity());
  } else if (x == 1.0) {
    v = b > 1.0 ? 0.0 : (b == 1.0 ? std::exp(log_norm) : std::numeric_limits<double>::infinity());
  } else {
    v = std::exp(log_norm + (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x));
  }
  return v / scale;
}

double belief_update_two_density(double pi, double f_val, double g_val) {
  if (!(pi >= 0.0 && pi <= 1.0)) throw InputError("belief update needs pi in [0,1]");
  if (f_val < 0.0 || g_val < 0.0) throw InputError("belief update needs nonnegative densities");
  double denom = pi * f_val + (1.0 - pi) * g_val;
  if (!(denom > 0.0))
    throw UndefinedPosteriorError("belief update undefined: zero-probability observation");
  return pi * f_val / denom;
}

std::pair<double, double> posterior_update_normal(double mu, double gamma, double gamma_eps,
                                                  double ln_w) {
  if (!(gamma > 0.0) || !(gamma_eps > 0.0))
    throw InputError("posterior update needs positive variances");
  double gp = 1.0 / (1.0 / gamma + 1.0 / gamma_eps);
  double mp = gp * (mu / gamma + ln_w / gamma_eps);
  return {mp, gp};
}

std::pair<double, double> posterior_update_signal(double mu, double gamma, double rho,
                                                  double gamma_xi, double gamma_y,
                                                  double y_signal) {
  if (!(gamma > 0.0)) throw InputError("posterior update needs gamma > 0");
  if (!(gamma_xi + gamma_y > 0.0))
    throw InputError("posterior update needs gamma_xi + gamma_y > 0");
  double s = gamma_xi + gamma_y;
  double gp = 1.0 / (1.0 / gamma + rho * rho / s);
  double mp = gp * (mu / gamma + rho * y_signal / s);
  return {mp, gp};
}

double entry_expected_utility(double mu, double gamma, double a, double gamma_x) {
  return (1.0 - std::exp(-a * mu + a * a * (gamma + gamma_x) / 2.0)) / a;
}

std::vector<Point> diagonal_states(const StateSpace& sp, int n) {
  std::vector<Point> out;
  for (int s = 0; s < n; ++s) {
    double f = n == 1 ? 0.5 : 0.02 + 0.96 * static_cast<double>(s) / (n - 1);
    Point z;
    for (int d = 0; d < sp.dim; ++d) {
      double lo = sp.lower[static_cast<std::size_t>(d)], hi = sp.upper[static_cast<std::size_t>(d)];
      z.push_back(lo + f * (hi - lo));
    }
    out.push_back(z);
  }
  return out;
}

Grid CatalogModel::env_grid() const {
  if (!threshold) throw ConfigError("model '" + id + "' has no environment decomposition");
  return make_grid(threshold->env.space, env_counts, env_scaling);
}

namespace {

using Params = std::map<std::string, double>;

Params resolve(const Params& defaults, const Params& overrides) {
  Params out = defaults;
  for (const auto& [k, v] : overrides) {
    auto it = out.find(k);
    if (it == out.end()) throw ConfigError("unknown parameter '" + k + "'");
    it->second = v;
  }
  return out;
}

double checked_beta(const Params& p) {
  double beta = p.at("beta");
  if (!(beta > 0.0 && beta < 1.0)) throw ConfigError("beta must lie in (0,1)");
  return beta;
}

// Smallest n <= 64 with beta * exp(log_m(n)) < 1.
int smallest_feasible_horizon(double beta, const std::function<double(int)>& log_m) {
  for (int n = 0; n <= 64; ++n) {
    if (beta * std::exp(log_m(n)) < 1.0) return n;
  }
  throw CertificateError("no horizon n <= 64 satisfies beta * m(n) < 1 at these parameters");
}

double geom_sum(double q, int n) {  // sum_{k=0}^{n-1} q^k
  double s = 0.0, t = 1.0;
  for (int k = 0; k < n; ++k) {
    s += t;
    t *= q;
  }
  return s;
}

// Piecewise-linear inverse CDF built from a density table; deterministic and
// good to ~1e-6, plenty for Monte Carlo sampling.
struct InverseCdf {
  std::vector<double> x;
  std::vector<double> cdf;

  static InverseCdf from_pdf(const std::function<double(double)>& pdf, double lo, double hi,
                             int points = 4097) {
    InverseCdf t;
    t.x.resize(static_cast<std::size_t>(points));
    t.cdf.resize(static_cast<std::size_t>(points));
    double h = (hi - lo) / (points - 1);
    double prev = pdf(lo);
    t.x[0] = lo;
    t.cdf[0] = 0.0;
    for (int i = 1; i < points; ++i) {
      double xi = lo + h * i;
      double cur = pdf(xi);
      t.x[static_cast<std::size_t>(i)] = xi;
      t.cdf[static_cast<std::size_t>(i)] =
          t.cdf[static_cast<std::size_t>(i - 1)] + 0.5 * h * (prev + cur);
      prev = cur;
    }
    double total = t.cdf.back();
    for (double& c : t.cdf) c /= total;
    return t;
  }

  double operator()(double u) const {
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
    if (hi == 0) return x.front();
    std::size_t lo = hi - 1;
    double span = cdf[hi] - cdf[lo];
    double w = span > 0.0 ? (u - cdf[lo]) / span : 0.0;
    return x[lo] + w * (x[hi] - x[lo]);
  }
};

CatalogModel build_js_bounded(const Params& overrides) {
  Params p = resolve({{"beta", 0.95}, {"c0", 0.6}, {"w_max", 2.0}}, overrides);
  double beta = checked_beta(p);
  double c0 = p.at("c0");
  double w_max = p.at("w_max");
  if (!(w_max > 0.0)) throw ConfigError("w_max must be positive");

  CatalogModel cm;
  cm.id = "js_bounded";
  cm.params = p;
  cm.model.beta = beta;
  cm.model.space = StateSpace({0.0}, {w_max}, {"w"});
  cm.model.exit_payoff = [beta](const Point& z) { return z[0] / (1.0 - beta); };
  cm.model.flow_payoff = [c0](const Point&) { return c0; };
  cm.model.shock_dim = 1;
  cm.model.shock_kind = ShockKind::uniform;
  cm.model.step = [w_max](const Point&, std::span<const double> u) {
    return Point{w_max * u[0]};
  };
  cm.model.kernel_density = [w_max](const Point& zp, const Point&) {
    return (zp[0] >= 0.0 && zp[0] <= w_max) ? 1.0 / w_max : 0.0;
  };

  double gbar = std::max(w_max / (1.0 - beta), std::abs(c0));
  cm.cert.g = [gbar](const Point&) { return gbar; };
  cm.cert.n = 0;
  cm.cert.m = 1.0;
  cm.cert.d = 0.0;
  validate_certificate(cm.cert, beta);

  cm.counts = {100};
  cm.integrator = IntegratorSpec{IntegratorKind::monte_carlo, 1000, 20, 0};
  cm.drift_states = diagonal_states(cm.model.space, 10);
  return cm;
}

CatalogModel build_js_markov_crra(const Params& overrides) {
  Params p = resolve({{"beta", 0.95},
                      {"rho", 0.9},
                      {"b", 0.0},
                      {"sigma", 1.0},
                      {"delta", 1.0},
                      {"c0_tilde", 0.6},
                      {"z_lo", -10.0},
                      {"z_hi", 10.0}},
                     overrides);
  double beta = checked_beta(p);
  double rho = p.at("rho"), b = p.at("b"), sigma = p.at("sigma"), delta = p.at("delta");
  if (!(sigma > 0.0)) throw ConfigError("sigma must be positive");
  double c0 = crra_utility(p.at("c0_tilde"), delta);

  CatalogModel cm;
  cm.id = "js_markov_crra";
  cm.params = p;
  cm.model.beta = beta;
  cm.model.space = StateSpace({p.at("z_lo")}, {p.at("z_hi")}, {"z"});
  cm.model.exit_payoff = [beta, delta](const Point& z) {
    return crra_utility(std::exp(z[0]), delta) / (1.0 - beta);
  };
  cm.model.flow_payoff = [c0](const Point&) { return c0; };
  cm.model.shock_dim = 1;
  cm.model.shock_kind = ShockKind::normal;
  cm.model.step = [rho, b, sigma](const Point& z, std::span<const double> n) {
    return Point{rho * z[0] + b + sigma * n[0]};
  };
  cm.model.kernel_density = [rho, b, sigma](const Point& zp, const Point& z) {
    double mu = rho * z[0] + b;
    double u = (zp[0] - mu) / sigma;
    return std::exp(-0.5 * u * u) / (sigma * std::sqrt(2.0 * 3.14159265358979323846));
  };

  if (delta == 1.0) {
    cm.cert.g = [](const Point& z) { return std::abs(z[0]); };
    cm.cert.n = 0;
    cm.cert.m = std::abs(rho);
    cm.cert.d = sigma + std::abs(b);
    cm.cert.payoff_scale = 1.0 / (1.0 - beta);
    cm.cert.payoff_offset = std::abs(c0);
  } else {
    double xi = std::abs((1.0 - delta) * b) + (1.0 - delta) * (1.0 - delta) * sigma * sigma / 2.0;
    int n = smallest_feasible_horizon(
        beta, [&](int k) { return std::pow(std::abs(rho), k) * xi; });
    double rn = std::pow(rho, n);
    cm.cert.g = [rn, delta](const Point& z) {
      return std::exp(rn * (1.0 - delta) * z[0]) + std::exp(rn * (delta - 1.0) * z[0]);
    };
    cm.cert.n = n;
    cm.cert.m = cm.cert.d = std::exp(std::pow(std::abs(rho), n) * xi);
    double sig2n = sigma * sigma * geom_sum(rho * rho, n);
    double bsum = std::abs(b) * geom_sum(std::abs(rho), n);
    double cn = std::exp(std::abs(1.0 - delta) * bsum +
                         (1.0 - delta) * (1.0 - delta) * sig2n / 2.0);
    cm.cert.payoff_scale = cn / ((1.0 - beta) * std::abs(1.0 - delta));
    cm.cert.payoff_offset = std::abs(c0);
  }
  validate_certificate(cm.cert, beta);

  cm.counts = {200};
  cm.integrator = IntegratorSpec{IntegratorKind::monte_carlo, 1000, 20, 0};
  cm.drift_states = diagonal_states(cm.model.space, 10);
  return cm;
}

CatalogModel build_js_learning_normal(const Params& overrides) {
  Params p = resolve({{"beta", 0.95},
                      {"delta", 3.0},
                      {"gamma_eps", 1.0},
                      {"c0_tilde", 0.6},
                      {"mu_lo", -10.0},
                      {"mu_hi", 10.0},
                      {"gamma_lo", 1e-4},
                      {"gamma_hi", 10.0},
                      {"w_lo", 1e-3},
                      {"w_hi", 100.0}},
                     overrides);
  double beta = checked_beta(p);
  double delta = p.at("delta"), geps = p.at("gamma_eps");
  if (!(geps > 0.0)) throw ConfigError("gamma_eps must be positive");
  double c0 = crra_utility(p.at("c0_tilde"), delta);

  CatalogModel cm;
  cm.id = "js_learning_normal";
  cm.params = p;

  auto exit_r = [beta, delta](const Point& z) {
    return crra_utility(z[0], delta) / (1.0 - beta);
  };
  auto step_belief = [geps](double mu, double gamma, double shock) {
    double ln_w = mu + std::sqrt(gamma + geps) * shock;
    auto [mp, gp] = posterior_update_normal(mu, gamma, geps, ln_w);
    return Point{std::exp(ln_w), mp, gp};
  };

  cm.model.beta = beta;
  cm.model.space = StateSpace({p.at("w_lo"), p.at("mu_lo"), p.at("gamma_lo")},
                              {p.at("w_hi"), p.at("mu_hi"), p.at("gamma_hi")},
                              {"w", "mu", "gamma"});
  cm.model.exit_payoff = exit_r;
  cm.model.flow_payoff = [c0](const Point&) { return c0; };
  cm.model.shock_dim = 1;
  cm.model.shock_kind = ShockKind::normal;
  cm.model.step = [step_belief](const Point& z, std::span<const double> n) {
    return step_belief(z[1], z[2], n[0]);
  };

  ThresholdModel tm;
  tm.direction = Monotone::increasing;
  tm.exit_at = [beta, delta](double w, const Point&) {
    return crra_utility(w, delta) / (1.0 - beta);
  };
  tm.x_floor = 0.0;
  tm.default_bracket = {1e-3, 10.0};
  tm.env.beta = beta;
  tm.env.space = StateSpace({p.at("mu_lo"), p.at("gamma_lo")}, {p.at("mu_hi"), p.at("gamma_hi")},
                            {"mu", "gamma"});
  tm.env.exit_payoff = exit_r;
  tm.env.flow_payoff = [c0](const Point&) { return c0; };
  tm.env.shock_dim = 1;
  tm.env.shock_kind = ShockKind::normal;
  tm.env.step = [step_belief](const Point& y, std::span<const double> n) {
    return step_belief(y[0], y[1], n[0]);
  };
  tm.env.continuation_coords = [](const Point& zp) { return zp.tail(); };
  cm.threshold = std::move(tm);

  if (delta == 1.0) {
    cm.cert.g = [](const Point& z) {
      return std::exp(-z[1] + z[2] / 2.0) + std::exp(z[1] + z[2] / 2.0);
    };
    cm.cert.payoff_scale = std::exp(geps / 2.0) / (1.0 - beta);
    cm.env_cert = cm.cert;
    cm.env_cert->g = [](const Point& y) {
      return std::exp(-y[0] + y[1] / 2.0) + std::exp(y[0] + y[1] / 2.0);
    };
  } else {
    double q = 1.0 - delta;
    cm.cert.g = [q](const Point& z) { return std::exp(q * z[1] + q * q * z[2] / 2.0); };
    cm.cert.payoff_scale = std::exp(q * q * geps / 2.0) / ((1.0 - beta) * std::abs(q));
    cm.env_cert = cm.cert;
    cm.env_cert->g = [q](const Point& y) { return std::exp(q * y[0] + q * q * y[1] / 2.0); };
  }
  cm.cert.n = 1;
  cm.cert.m = 1.0;
  cm.cert.d = 0.0;
  cm.cert.payoff_offset = std::abs(c0);
  cm.env_cert->n = 1;
  cm.env_cert->m = 1.0;
  cm.env_cert->d = 0.0;
  cm.env_cert->payoff_scale = cm.cert.payoff_scale;
  cm.env_cert->payoff_offset = cm.cert.payoff_offset;
  validate_certificate(cm.cert, beta);

  cm.counts = {30, 60, 40};
  cm.env_counts = {200, 100};
  cm.integrator = IntegratorSpec{IntegratorKind::monte_carlo, 1000, 40, 0};
  cm.drift_states = diagonal_states(cm.model.space, 10);
  return cm;
}

CatalogModel build_js_two_density(const Params& overrides) {
  Params p = resolve({{"beta", 0.95},
                      {"c0", 0.6},
                      {"w_max", 2.0},
                      {"f_a", 1.0},
                      {"f_b", 1.0},
                      {"g_a", 3.0},
                      {"g_b", 1.2},
                      {"pi_lo", 1e-4},
                      {"pi_hi", 1.0 - 1e-4},
                      {"quad_points", 100.0}},
                     overrides);
  double beta = checked_beta(p);
  double c0 = p.at("c0"), w_max = p.at("w_max");
  double fa = p.at("f_a"), fb = p.at("f_b"), ga = p.at("g_a"), gb = p.at("g_b");
  int qn = static_cast<int>(p.at("quad_points"));
  if (qn < 2) throw ConfigError("quad_points must be >= 2");

  auto f_pdf = [fa, fb, w_max](double w) { return scaled_beta_pdf(w, fa, fb, w_max); };
  auto g_pdf = [ga, gb, w_max](double w) { return scaled_beta_pdf(w, ga, gb, w_max); };

  // fixed abscissas with trapezoid weights, densities tabulated once
  auto nodes = std::make_shared<std::vector<double>>();
  auto fvals = std::make_shared<std::vector<double>>();
  auto gvals = std::make_shared<std::vector<double>>();
  std::vector<double> base_w(static_cast<std::size_t>(qn));
  double h = w_max / (qn - 1);
  for (int j = 0; j < qn; ++j) {
    double wj = h * j;
    nodes->push_back(wj);
    fvals->push_back(f_pdf(wj));
    gvals->push_back(g_pdf(wj));
    base_w[static_cast<std::size_t>(j)] = (j == 0 || j == qn - 1) ? h / 2.0 : h;
  }
  auto node_index = [h, qn](double s) {
    int j = static_cast<int>(std::lround(s / h));
    return std::clamp(j, 0, qn - 1);
  };

  // posterior on the first-density hypothesis after seeing w'
  auto bayes = [f_pdf, g_pdf](double w, double pi) {
    return belief_update_two_density(pi, f_pdf(w), g_pdf(w));
  };

  auto f_inv = std::make_shared<InverseCdf>(InverseCdf::from_pdf(f_pdf, 0.0, w_max));
  auto g_inv = std::make_shared<InverseCdf>(InverseCdf::from_pdf(g_pdf, 0.0, w_max));

  CatalogModel cm;
  cm.id = "js_two_density";
  cm.params = p;
  cm.model.beta = beta;
  cm.model.space =
      StateSpace({0.0, p.at("pi_lo")}, {w_max, p.at("pi_hi")}, {"w", "pi"});
  cm.model.exit_payoff = [beta](const Point& z) { return z[0] / (1.0 - beta); };
  cm.model.flow_payoff = [c0](const Point&) { return c0; };
  cm.model.shock_dim = 2;
  cm.model.shock_kind = ShockKind::uniform;
  cm.model.step = [=](const Point& z, std::span<const double> u) {
    double pi = z[1];
    double w = u[0] < pi ? (*f_inv)(u[1]) : (*g_inv)(u[1]);
    return Point{w, bayes(w, pi)};
  };
  cm.model.quad = QuadratureRule{
      *nodes, base_w,
      [fvals, gvals, node_index](const Point& z, double s) {
        int j = node_index(s);
        return z[1] * (*fvals)[static_cast<std::size_t>(j)] +
               (1.0 - z[1]) * (*gvals)[static_cast<std::size_t>(j)];
      },
      [bayes](const Point& z, double s) { return Point{s, bayes(s, z[1])}; }};

  ThresholdModel tm;
  tm.direction = Monotone::increasing;
  tm.exit_at = [beta](double w, const Point&) { return w / (1.0 - beta); };
  tm.dr_dx = [beta](double, const Point&) { return 1.0 / (1.0 - beta); };
  tm.default_bracket = {0.0, w_max};
  tm.env.beta = beta;
  tm.env.space = StateSpace({p.at("pi_lo")}, {p.at("pi_hi")}, {"pi"});
  tm.env.exit_payoff = cm.model.exit_payoff;
  tm.env.flow_payoff = cm.model.flow_payoff;
  tm.env.shock_dim = 2;
  tm.env.shock_kind = ShockKind::uniform;
  tm.env.step = [=](const Point& y, std::span<const double> u) {
    double pi = y[0];
    double w = u[0] < pi ? (*f_inv)(u[1]) : (*g_inv)(u[1]);
    return Point{w, bayes(w, pi)};
  };
  tm.env.continuation_coords = [](const Point& zp) { return zp.tail(); };
  tm.env.quad = QuadratureRule{
      *nodes, base_w,
      [fvals, gvals, node_index](const Point& y, double s) {
        int j = node_index(s);
        return y[0] * (*fvals)[static_cast<std::size_t>(j)] +
               (1.0 - y[0]) * (*gvals)[static_cast<std::size_t>(j)];
      },
      [bayes](const Point& y, double s) { return Point{s, bayes(s, y[0])}; }};
  cm.threshold = std::move(tm);

  double gbar = std::max(w_max / (1.0 - beta), std::abs(c0));
  cm.cert.g = [gbar](const Point&) { return gbar; };
  cm.cert.n = 0;
  cm.cert.m = 1.0;
  cm.cert.d = 0.0;
  validate_certificate(cm.cert, beta);
  cm.env_cert = cm.cert;

  cm.counts = {100, 50};
  cm.env_counts = {50};
  cm.integrator = IntegratorSpec{IntegratorKind::grid_quadrature, 1000, 20, 0};
  cm.drift_states = diagonal_states(cm.model.space, 10);
  cm.closed_form_reservation = true;
  return cm;
}

CatalogModel build_option_american(const Params& overrides) {
  Params p = resolve({{"rho", 0.7},
                      {"b", 0.0},
                      {"sigma", 0.3},
                      {"strike", 1.0},
                      {"rate", 0.05},
                      {"z_lo", -3.0},
                      {"z_hi", 3.0}},
                     overrides);
  double rho = p.at("rho"), b = p.at("b"), sigma = p.at("sigma"), strike = p.at("strike");
  if (!(p.at("rate") > 0.0)) throw ConfigError("riskless rate must be positive");
  if (!(sigma > 0.0)) throw ConfigError("sigma must be positive");
  double beta = std::exp(-p.at("rate"));

  CatalogModel cm;
  cm.id = "option_american";
  cm.params = p;
  cm.model.beta = beta;
  cm.model.space = StateSpace({p.at("z_lo")}, {p.at("z_hi")}, {"z"});
  cm.model.exit_payoff = [strike](const Point& z) {
    return std::max(std::exp(z[0]) - strike, 0.0);
  };
  cm.model.flow_payoff = [](const Point&) { return 0.0; };
  cm.model.shock_dim = 1;
  cm.model.shock_kind = ShockKind::normal;
  cm.model.step = [rho, b, sigma](const Point& z, std::span<const double> n) {
    return Point{rho * z[0] + b + sigma * n[0]};
  };
  cm.model.kernel_density = [rho, b, sigma](const Point& zp, const Point& z) {
    double u = (zp[0] - rho * z[0] - b) / sigma;
    return std::exp(-0.5 * u * u) / (sigma * std::sqrt(2.0 * 3.14159265358979323846));
  };

  double xi = std::abs(b) + sigma * sigma / 2.0;
  int n = smallest_feasible_horizon(beta, [&](int k) { return std::pow(std::abs(rho), k) * xi; });
  double rn = std::pow(rho, n);
  cm.cert.g = [rn](const Point& z) { return std::exp(rn * z[0]) + std::exp(-rn * z[0]); };
  cm.cert.n = n;
  cm.cert.m = cm.cert.d = std::exp(std::pow(std::abs(rho), n) * xi);
  double sig2n = sigma * sigma * geom_sum(rho * rho, n);
  cm.cert.payoff_scale = std::exp(std::abs(b) * geom_sum(std::abs(rho), n) + sig2n / 2.0);
  cm.cert.payoff_offset = 0.0;
  validate_certificate(cm.cert, beta);

  cm.counts = {150};
  cm.integrator = IntegratorSpec{IntegratorKind::monte_carlo, 1000, 20, 0};
  cm.drift_states = diagonal_states(cm.model.space, 10);
  return cm;
}

CatalogModel build_rd_search(const Params& overrides) {
  Params p = resolve(
      {{"beta", 0.9}, {"theta", 2.0}, {"c0", 0.1}, {"z_lo", 0.1}, {"z_hi", 25.0}}, overrides);
  double beta = checked_beta(p);
  double theta = p.at("theta"), c0 = p.at("c0");
  if (!(theta > 0.0)) throw ConfigError("theta must be positive");

  CatalogModel cm;
  cm.id = "rd_search";
  cm.params = p;
  cm.model.beta = beta;
  cm.model.space = StateSpace({p.at("z_lo")}, {p.at("z_hi")}, {"z"});
  cm.model.exit_payoff = [](const Point& z) { return z[0]; };
  cm.model.flow_payoff = [c0](const Point&) { return -c0; };
  cm.model.shock_dim = 1;
  cm.model.shock_kind = ShockKind::uniform;
  cm.model.step = [theta](const Point& z, std::span<const double> u) {
    return Point{z[0] - std::log1p(-u[0]) / theta};
  };
  cm.model.kernel_density = [theta](const Point& zp, const Point& z) {
    return zp[0] >= z[0] ? theta * std::exp(-theta * (zp[0] - z[0])) : 0.0;
  };

  cm.cert.g = [](const Point& z) { return z[0]; };
  cm.cert.n = 0;
  cm.cert.m = 1.0;
  cm.cert.d = 1.0 / theta;
  cm.cert.payoff_scale = 1.0;
  cm.cert.payoff_offset = c0;
  validate_certificate(cm.cert, beta);

  cm.counts = {200};
  cm.integrator = IntegratorSpec{IntegratorKind::monte_carlo, 1000, 20, 0};
  cm.drift_states = diagonal_states(cm.model.space, 10);
  return cm;
}

CatalogModel build_firm_exit(const Params& overrides) {
  Params p = resolve({{"beta", 0.95},
                      {"rho", 0.7},
                      {"b", 0.0},
                      {"sigma", 1.0},
                      {"c_f", 5.0},
                      {"alpha", 0.5},
                      {"p", 0.15},
                      {"w", 0.15},
                      {"z_lo", -5.0},
                      {"z_hi", 5.0}},
                     overrides);
  double beta = checked_beta(p);
  double rho = p.at("rho"), b = p.at("b"), sigma = p.at("sigma");
  double cf = p.at("c_f"), alpha = p.at("alpha");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0,1)");
  double q = 1.0 / (1.0 - alpha);
  double G = std::pow(alpha * p.at("p") / p.at("w"), q) * (1.0 - alpha) * p.at("w") / alpha;

  CatalogModel cm;
  cm.id = "firm_exit";
  cm.params = p;
  cm.model.beta = beta;
  cm.model.space = StateSpace({p.at("z_lo")}, {p.at("z_hi")}, {"z"});
  auto payoff = [G, q, cf](const Point& z) { return G * std::exp(q * z[0]) - cf; };
  cm.model.exit_payoff = payoff;
  cm.model.flow_payoff = payoff;
  cm.model.shock_dim = 1;
  cm.model.shock_kind = ShockKind::normal;
  cm.model.step = [rho, b, sigma](const Point& z, std::span<const double> n) {
    return Point{rho * z[0] + b + sigma * n[0]};
  };
  cm.model.kernel_density = [rho, b, sigma](const Point& zp, const Point& z) {
    double u = (zp[0] - rho * z[0] - b) / sigma;
    return std::exp(-0.5 * u * u) / (sigma * std::sqrt(2.0 * 3.14159265358979323846));
  };

  double xi = q * std::abs(b) + q * q * sigma * sigma / 2.0;
  int n = smallest_feasible_horizon(beta, [&](int k) { return std::pow(std::abs(rho), k) * xi; });
  double rn = std::pow(rho, n);
  if (rho >= 0.0) {
    cm.cert.g = [rn, q](const Point& z) { return std::exp(rn * q * z[0]); };
  } else {
    cm.cert.g = [rn, q](const Point& z) {
      return std::exp(rn * q * z[0]) + std::exp(-rn * q * z[0]);
    };
  }
  cm.cert.n = n;
  cm.cert.m = cm.cert.d = std::exp(std::pow(std::abs(rho), n) * xi);
  double sig2n = sigma * sigma * geom_sum(rho * rho, n);
  double bsum = std::abs(b) * geom_sum(std::abs(rho), n);
  cm.cert.payoff_scale = G * std::exp(q * bsum + q * q * sig2n / 2.0);
  cm.cert.payoff_offset = cf;
  validate_certificate(cm.cert, beta);

  cm.counts = {100};
  cm.integrator = IntegratorSpec{IntegratorKind::monte_carlo, 1000, 20, 0};
  cm.drift_states = diagonal_states(cm.model.space, 10);
  return cm;
}

CatalogModel build_firm_exit_learning(const Params& overrides) {
  Params p = resolve({{"beta", 0.95},
                      {"rho", 0.7},
                      {"b", 0.0},
                      {"gamma_p", 0.1},
                      {"gamma_eps", 1.0},
                      {"h1", 1.0},
                      {"h2", 0.0},
                      {"p_lo", 0.2},
                      {"p_hi", 5.0},
                      {"x_lo", 0.05},
                      {"x_hi", 20.0},
                      {"mu_lo", -2.0},
                      {"mu_hi", 2.0},
                      {"gamma_lo", 1e-4},
                      {"gamma_hi", 2.0}},
                     overrides);
  double beta = checked_beta(p);
  double rho = p.at("rho"), b = p.at("b"), gp_var = p.at("gamma_p"), geps = p.at("gamma_eps");
  double h1 = p.at("h1"), h2 = p.at("h2");
  if (!(gp_var > 0.0) || !(geps > 0.0)) throw ConfigError("variances must be positive");

  CatalogModel cm;
  cm.id = "firm_exit_learning";
  cm.params = p;
  cm.model.beta = beta;
  cm.model.space = StateSpace({p.at("p_lo"), p.at("x_lo"), p.at("mu_lo"), p.at("gamma_lo")},
                              {p.at("p_hi"), p.at("x_hi"), p.at("mu_hi"), p.at("gamma_hi")},
                              {"p", "x", "mu", "gamma"});
  cm.model.exit_payoff = [h1, h2](const Point& z) { return h1 * z[0] * z[0] / z[1] + h2; };
  cm.model.flow_payoff = [](const Point& z) { return z[0] * z[0] / (4.0 * z[1]); };
  cm.model.shock_dim = 2;
  cm.model.shock_kind = ShockKind::normal;
  cm.model.step = [rho, b, gp_var, geps](const Point& z, std::span<const double> n) {
    double lp = rho * std::log(z[0]) + b + std::sqrt(gp_var) * n[0];
    double lx = z[2] + std::sqrt(z[3] + geps) * n[1];
    auto [mp, gnew] = posterior_update_normal(z[2], z[3], geps, lx);
    return Point{std::exp(lp), std::exp(lx), mp, gnew};
  };

  double xi = 2.0 * (std::abs(b) + gp_var);
  int n;
  double cushion, m;
  if (std::abs(rho) < 1e-12) {
    n = 1;
    m = 1.0;
    cushion = 0.0;
  } else {
    n = smallest_feasible_horizon(beta, [&](int k) { return std::pow(std::abs(rho), k) * xi; });
    n = std::max(n, 1);  // payoffs depend on the transitory x, so n >= 1
    m = std::exp(std::pow(std::abs(rho), n) * xi);
    cushion = 1.0001 * m / (m - 1.0);
  }
  double rn = std::pow(rho, n);
  cm.cert.g = [rn, cushion](const Point& z) {
    double lp = std::log(z[0]);
    return (std::exp(2.0 * rn * lp) + std::exp(-2.0 * rn * lp) + cushion) *
           std::exp(-z[2] + z[3] / 2.0);
  };
  cm.cert.n = n;
  cm.cert.m = m;
  cm.cert.d = 0.0;
  double an = 2.0 * std::abs(b) * geom_sum(std::abs(rho), n) + 2.0 * gp_var * geom_sum(rho * rho, n);
  cm.cert.payoff_scale = std::max(h1, 0.25) * std::exp(an + geps / 2.0);
  cm.cert.payoff_offset = h2 + std::max(h1, 0.25);
  validate_certificate(cm.cert, beta);

  cm.counts = {15, 15, 10, 8};
  cm.integrator = IntegratorSpec{IntegratorKind::monte_carlo, 1000, 10, 0};
  cm.drift_states = diagonal_states(cm.model.space, 10);
  return cm;
}

CatalogModel build_firm_entry(const Params& overrides) {
  Params p = resolve({{"beta", 0.95},
                      {"a", 0.2},
                      {"gamma_x", 0.1},
                      {"gamma_y", 0.05},
                      {"rho", 1.0},
                      {"gamma_xi", 0.0},
                      {"mu_f", 0.0},
                      {"gamma_f", 0.01},
                      {"mu_lo", -2.0},
                      {"mu_hi", 10.0},
                      {"gamma_lo", 1e-4},
                      {"gamma_hi", 10.0},
                      {"f_lo", 0.25},
                      {"f_hi", 2.5}},
                     overrides);
  double beta = checked_beta(p);
  double a = p.at("a"), gx = p.at("gamma_x"), gy = p.at("gamma_y");
  double rho = p.at("rho"), gxi = p.at("gamma_xi");
  double mu_f = p.at("mu_f"), gf = p.at("gamma_f");
  if (!(a > 0.0)) throw ConfigError("risk aversion a must be positive");
  if (!(gxi + gy > 0.0)) throw ConfigError("gamma_xi + gamma_y must be positive");

  auto exit_r = [a, gx](const Point& z) {
    return entry_expected_utility(z[1], z[2], a, gx) - z[0];
  };
  auto step_belief = [rho, gxi, gy, mu_f, gf](double mu, double gamma,
                                              std::span<const double> n) {
    double y_sd = std::sqrt(rho * rho * gamma + gxi + gy);
    double y = rho * mu + y_sd * n[0];
    auto [mp, gp] = posterior_update_signal(mu, gamma, rho, gxi, gy, y);
    double f = std::exp(mu_f + std::sqrt(gf) * n[1]);
    return Point{f, mp, gp};
  };

  CatalogModel cm;
  cm.id = "firm_entry";
  cm.params = p;
  cm.model.beta = beta;
  cm.model.space = StateSpace({p.at("f_lo"), p.at("mu_lo"), p.at("gamma_lo")},
                              {p.at("f_hi"), p.at("mu_hi"), p.at("gamma_hi")},
                              {"f", "mu", "gamma"});
  cm.model.exit_payoff = exit_r;
  cm.model.flow_payoff = [](const Point&) { return 0.0; };
  cm.model.shock_dim = 2;
  cm.model.shock_kind = ShockKind::normal;
  cm.model.step = [step_belief](const Point& z, std::span<const double> n) {
    return step_belief(z[1], z[2], n);
  };

  ThresholdModel tm;
  tm.direction = Monotone::decreasing;
  tm.exit_at = [a, gx](double f, const Point& y) {
    return entry_expected_utility(y[0], y[1], a, gx) - f;
  };
  tm.dr_dx = [](double, const Point&) { return -1.0; };
  tm.dr_denv.resize(2);
  tm.dr_denv[0] = [a, gx](double, const Point& y) {
    return std::exp(-a * y[0] + a * a * (y[1] + gx) / 2.0);
  };
  tm.dr_denv[1] = [a, gx](double, const Point& y) {
    return -(a / 2.0) * std::exp(-a * y[0] + a * a * (y[1] + gx) / 2.0);
  };
  tm.default_bracket = {0.0, 2.0};
  tm.env.beta = beta;
  tm.env.space = StateSpace({p.at("mu_lo"), p.at("gamma_lo")}, {p.at("mu_hi"), p.at("gamma_hi")},
                            {"mu", "gamma"});
  tm.env.exit_payoff = exit_r;
  tm.env.flow_payoff = [](const Point&) { return 0.0; };
  tm.env.shock_dim = 2;
  tm.env.shock_kind = ShockKind::normal;
  tm.env.step = [step_belief](const Point& y, std::span<const double> n) {
    return step_belief(y[0], y[1], n);
  };
  tm.env.continuation_coords = [](const Point& zp) { return zp.tail(); };
  cm.threshold = std::move(tm);

  cm.cert.g = [a](const Point& z) { return std::exp(-a * z[1] + a * a * z[2] / 2.0); };
  cm.cert.n = 1;
  cm.cert.m = 1.0;
  cm.cert.d = 0.0;
  cm.cert.payoff_scale = std::exp(a * a * gx / 2.0) / a;
  cm.cert.payoff_offset = 1.0 / a + std::exp(mu_f + gf / 2.0);
  validate_certificate(cm.cert, beta);
  cm.env_cert = cm.cert;
  cm.env_cert->g = [a](const Point& y) { return std::exp(-a * y[0] + a * a * y[1] / 2.0); };

  cm.counts = {20, 60, 30};
  cm.env_counts = {200, 100};
  cm.integrator = IntegratorSpec{IntegratorKind::monte_carlo, 1000, 40, 0};
  cm.drift_states = diagonal_states(cm.model.space, 10);
  cm.closed_form_reservation = true;
  return cm;
}

CatalogModel build_js_perm_trans(const Params& overrides) {
  Params p = resolve({{"beta", 0.95},
                      {"delta", 2.5},
                      {"rho", 0.9},
                      {"mu_eta", 0.0},
                      {"gamma_eta", 1e-6},
                      {"gamma_xi", 5e-4},
                      {"gamma_u", 1e-4},
                      {"c0_tilde", 0.6},
                      {"theta_lo", 1e-4},
                      {"theta_hi", 10.0},
                      {"w_lo", 1e-3},
                      {"w_hi", 15.0}},
                     overrides);
  double beta = checked_beta(p);
  double delta = p.at("delta"), rho = p.at("rho");
  double mu_eta = p.at("mu_eta"), g_eta = p.at("gamma_eta");
  double g_xi = p.at("gamma_xi"), g_u = p.at("gamma_u");
  if (!(g_eta > 0.0) || !(g_xi > 0.0) || !(g_u > 0.0))
    throw ConfigError("variances must be positive");
  if (!(std::abs(rho) <= 1.0)) throw ConfigError("rho must lie in [-1,1]");
  double c0 = crra_utility(p.at("c0_tilde"), delta);

  auto exit_r = [beta, delta](const Point& z) {
    return crra_utility(z[0], delta) / (1.0 - beta);
  };
  auto step_income = [rho, g_u, g_xi, mu_eta, g_eta](double theta, std::span<const double> n) {
    double tp = std::exp(rho * std::log(theta) + std::sqrt(g_u) * n[0]);
    double xi = std::exp(std::sqrt(g_xi) * n[1]);
    double eta = std::exp(mu_eta + std::sqrt(g_eta) * n[2]);
    return Point{eta + tp * xi, tp};
  };

  CatalogModel cm;
  cm.id = "js_perm_trans";
  cm.params = p;
  cm.model.beta = beta;
  cm.model.space = StateSpace({p.at("w_lo"), p.at("theta_lo")}, {p.at("w_hi"), p.at("theta_hi")},
                              {"w", "theta"});
  cm.model.exit_payoff = exit_r;
  cm.model.flow_payoff = [c0](const Point&) { return c0; };
  cm.model.shock_dim = 3;
  cm.model.shock_kind = ShockKind::normal;
  cm.model.step = [step_income](const Point& z, std::span<const double> n) {
    return step_income(z[1], n);
  };

  ThresholdModel tm;
  tm.direction = Monotone::increasing;
  tm.exit_at = [beta, delta](double w, const Point&) {
    return crra_utility(w, delta) / (1.0 - beta);
  };
  tm.x_floor = 0.0;
  tm.default_bracket = {1e-3, 10.0};
  tm.env.beta = beta;
  tm.env.space = StateSpace({p.at("theta_lo")}, {p.at("theta_hi")}, {"theta"});
  tm.env.exit_payoff = exit_r;
  tm.env.flow_payoff = [c0](const Point&) { return c0; };
  tm.env.shock_dim = 3;
  tm.env.shock_kind = ShockKind::normal;
  tm.env.step = [step_income](const Point& y, std::span<const double> n) {
    return step_income(y[0], n);
  };
  tm.env.continuation_coords = [](const Point& zp) { return zp.tail(); };
  cm.threshold = std::move(tm);

  // one-step certificate: payoffs hinge on the transitory components, so the
  // n = 0 bound cannot be a function of theta alone
  double e1 = delta == 1.0 ? rho : (1.0 - delta) * rho;
  double sig_drift = delta == 1.0 ? g_u : (1.0 - delta) * (1.0 - delta) * g_u;
  cm.cert.g = [e1](const Point& z) {
    double lt = std::log(z[1]);
    return std::exp(e1 * lt) + std::exp(-e1 * lt);
  };
  cm.cert.n = 1;
  cm.cert.m = cm.cert.d = std::exp(rho * rho * sig_drift);
  double q = 1.0 - delta;
  double norm = delta == 1.0 ? (1.0 - beta) : (1.0 - beta) * std::abs(q);
  double k_scale, k_offset;
  if (delta == 1.0) {
    // |ln w| <= 1/eta + eta + theta' xi'
    k_scale = std::exp((g_xi + g_u) / 2.0) / norm;
    k_offset = (std::exp(-mu_eta + g_eta / 2.0) + std::exp(mu_eta + g_eta / 2.0)) / norm;
  } else {
    k_scale = 2.0 * std::exp(q * q * g_xi / 2.0) * std::exp(q * q * g_u / 2.0) / norm;
    k_offset = 2.0 * std::exp(q * mu_eta + q * q * g_eta / 2.0) / norm;
  }
  cm.cert.payoff_scale = k_scale;
  cm.cert.payoff_offset = k_offset + std::abs(c0);
  validate_certificate(cm.cert, beta);
  cm.env_cert = cm.cert;
  cm.env_cert->g = [e1](const Point& y) {
    double lt = std::log(y[0]);
    return std::exp(e1 * lt) + std::exp(-e1 * lt);
  };

  cm.counts = {80, 200};
  cm.scaling = {GridScaling::uniform, GridScaling::log_dense_lower};
  cm.env_counts = {200};
  cm.env_scaling = {GridScaling::log_dense_lower};
  cm.integrator = IntegratorSpec{IntegratorKind::monte_carlo, 1000, 10, 0};
  cm.drift_states = diagonal_states(cm.model.space, 10);
  cm.closed_form_reservation = true;
  return cm;
}

}  // namespace

const std::vector<std::string>& catalog_ids() {
  static const std::vector<std::string> ids = {
      "js_bounded",     "js_markov_crra", "js_learning_normal", "js_two_density",
      "option_american", "rd_search",     "firm_exit",          "firm_exit_learning",
      "firm_entry",     "js_perm_trans"};
  return ids;
}

CatalogModel build_model(const std::string& id, const std::map<std::string, double>& overrides) {
  if (id == "js_bounded") return build_js_bounded(overrides);
  if (id == "js_markov_crra") return build_js_markov_crra(overrides);
  if (id == "js_learning_normal") return build_js_learning_normal(overrides);
  if (id == "js_two_density") return build_js_two_density(overrides);
  if (id == "option_american") return build_option_american(overrides);
  if (id == "rd_search") return build_rd_search(overrides);
  if (id == "firm_exit") return build_firm_exit(overrides);
  if (id == "firm_exit_learning") return build_firm_exit_learning(overrides);
  if (id == "firm_entry") return build_firm_entry(overrides);
  if (id == "js_perm_trans") return build_js_perm_trans(overrides);
  throw ConfigError("unknown model id '" + id + "'");
}

double reservation_closed_form(const std::string& id, double psi_star_value,
                               const std::map<std::string, double>& params) {
  auto need = [&](const char* k) {
    auto it = params.find(k);
    if (it == params.end())
      throw ConfigError(std::string("reservation closed form needs parameter '") + k + "'");
    return it->second;
  };
  if (id == "js_two_density") {
    return (1.0 - need("beta")) * psi_star_value;
  }
  if (id == "js_perm_trans" || id == "js_learning_normal") {
    double beta = need("beta"), delta = need("delta");
    if (delta == 1.0) return std::exp((1.0 - beta) * psi_star_value);
    double base = (1.0 - beta) * (1.0 - delta) * psi_star_value;
    if (!(base > 0.0))
      throw DomainError("reservation wage undefined: nonpositive base under fractional exponent");
    return std::pow(base, 1.0 / (1.0 - delta));
  }
  if (id == "firm_entry") {
    double a = need("a"), gx = need("gamma_x");
    return entry_expected_utility(need("mu"), need("gamma"), a, gx) - psi_star_value;
  }
  throw ConfigError("model '" + id + "' has no closed-form reservation rule");
}

}  // namespace cvstop
