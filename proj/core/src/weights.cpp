#include "cvstop/weights.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "cvstop/errors.hpp"

namespace cvstop {

void validate_certificate(const DriftCertificate& cert, double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw CertificateError("discount factor must lie in (0,1)");
  if (!cert.g) throw CertificateError("certificate has no g function");
  if (cert.n < 0) throw CertificateError("certificate horizon n must be >= 0");
  if (cert.m < 0.0 || cert.d < 0.0) throw CertificateError("certificate needs m, d >= 0");
  if (!(beta * cert.m < 1.0))
    throw CertificateError("certificate invalid: beta*m = " + std::to_string(beta * cert.m) +
                           " >= 1");
}

std::pair<double, double> choose_modulus_constants(const DriftCertificate& cert, double beta) {
  validate_certificate(cert, beta);
  const double slack = 1e-6;
  double lo = std::max(0.0, (1.0 - cert.m) / 2.0);
  double hi = (1.0 / beta - cert.m) / 2.0;  // > lo whenever beta*m < 1
  double mp = std::max((1.0 - cert.m) / 2.0, (1.0 / beta - cert.m) / 4.0);
  if (!(mp > lo + slack && mp < hi - slack)) mp = 0.5 * (lo + hi);
  double denom = cert.m + 2.0 * mp - 1.0;
  double dp = std::max(1.0, cert.d / denom);
  return {mp, dp};
}

WeightFunction build_weight_function(const DecisionModel& model, const DriftCertificate& cert,
                                     const IntegratorSpec& spec) {
  auto [mp, dp] = choose_modulus_constants(cert, model.beta);
  return build_weight_function(model, cert, mp, dp, spec);
}

WeightFunction build_weight_function(const DecisionModel& model, const DriftCertificate& cert,
                                     double m_prime, double d_prime, const IntegratorSpec& spec) {
  if (!(m_prime > 0.0) || !(d_prime > 0.0))
    throw CertificateError("weight function needs m', d' > 0");

  WeightFunction wf;
  wf.cert = cert;
  wf.m_prime = m_prime;
  wf.d_prime = d_prime;

  auto g = cert.g;
  if (cert.n == 0) {
    wf.ell = [g, d_prime](const Point& z) { return g(z) + d_prime; };
  } else if (cert.n == 1) {
    auto c = model.flow_payoff;
    wf.ell = [g, c, m_prime, d_prime](const Point& z) {
      return m_prime * std::abs(c(z)) + g(z) + d_prime;
    };
  } else {
    // n >= 2: t-step expectations estimated with one fixed path shock set
    auto integ = std::make_shared<Integrator>(model, spec, cert.n - 1);
    auto r = model.exit_payoff;
    auto c = model.flow_payoff;
    int n = cert.n;
    wf.ell = [integ, r, c, g, m_prime, d_prime, n](const Point& z) {
      double sums = std::abs(c(z));
      for (int t = 1; t <= n - 1; ++t) {
        sums += integ->expect_path(z, t, [&r](const Point& zp) { return std::abs(r(zp)); });
        sums += integ->expect_path(z, t, [&c](const Point& zp) { return std::abs(c(zp)); });
      }
      return m_prime * sums + g(z) + d_prime;
    };
  }
  return wf;
}

double weighted_sup_norm(const GridFunction& f, const WeightFunction& wf) {
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    Point z = f.grid().node(i);
    double ell = wf.ell(z);
    if (!(ell > 0.0))
      throw NumericError("weight function not positive at node " + to_string(z));
    m = std::max(m, std::abs(f.value_at(i)) / ell);
  }
  return m;
}

namespace {

struct MeanAcc {
  double sum = 0.0;
  double sumsq = 0.0;
  int n = 0;
  void add(double v) {
    sum += v;
    sumsq += v * v;
    ++n;
  }
  double mean() const { return sum / n; }
  double se() const {
    double m = mean();
    double var = std::max(0.0, sumsq / n - m * m);
    return std::sqrt(var / n);
  }
};

DriftCheck make_check(const Point& z, std::string what, int t, const MeanAcc& acc, double bound) {
  DriftCheck chk;
  chk.state = z;
  chk.quantity = std::move(what);
  chk.t = t;
  chk.estimate = acc.mean();
  chk.bound = bound;
  chk.se = acc.se();
  chk.margin = bound - chk.estimate;
  chk.pass = chk.estimate <= bound + 3.0 * chk.se;
  return chk;
}

}  // namespace

DriftReport verify_drift(const DecisionModel& model, const DriftCertificate& cert,
                         std::span<const Point> test_states, int draws, std::uint64_t seed,
                         int horizon) {
  validate_certificate(cert, model.beta);
  if (draws < 100) throw ConfigError("verify_drift needs draws >= 100");
  if (horizon < 1) throw ConfigError("verify_drift needs horizon >= 1");
  for (const Point& z : test_states) {
    if (!model.space.contains(z))
      throw InputError("drift test state outside the state space: " + to_string(z));
  }

  DriftReport report;
  report.seed = seed;
  report.draws = draws;
  report.horizon = horizon;

  int max_steps = std::max(horizon, cert.n);
  for (std::size_t si = 0; si < test_states.size(); ++si) {
    const Point& z = test_states[si];
    ShockSet shocks = ShockSet::make(model.shock_kind, draws, std::max(1, max_steps),
                                     model.shock_dim, substream_seed(seed, si));

    MeanAcc abs_r, abs_c, g1;
    std::vector<MeanAcc> gt(static_cast<std::size_t>(horizon));

    if (cert.n == 0) {
      // zero-step expectations are deterministic
      abs_r.add(std::abs(model.exit_payoff(z)));
      abs_c.add(std::abs(model.flow_payoff(z)));
    }

    for (int i = 0; i < draws; ++i) {
      Point cur = z;
      for (int s = 1; s <= max_steps; ++s) {
        cur = model.step(cur, shocks.at(i, s - 1));
        if (cur.dim() != z.dim())
          throw ConfigError("verify_drift needs a model whose transitions stay in its own state space");
        if (s == cert.n && cert.n >= 1) {
          double rv = std::abs(model.exit_payoff(cur));
          double cv = std::abs(model.flow_payoff(cur));
          if (!std::isfinite(rv) || !std::isfinite(cv))
            throw EvaluationError("payoff non-finite on a path from " + to_string(z));
          abs_r.add(rv);
          abs_c.add(cv);
        }
        if (s <= horizon) {
          double gv = cert.g(cur);
          if (!std::isfinite(gv))
            throw EvaluationError("g non-finite on a path from " + to_string(z));
          gt[static_cast<std::size_t>(s - 1)].add(gv);
          if (s == 1) g1.add(gv);
        }
      }
    }

    double gz = cert.g(z);
    double payoff_bound = cert.payoff_scale * gz + cert.payoff_offset;
    report.checks.push_back(make_check(z, "payoff_bound_r", cert.n, abs_r, payoff_bound));
    report.checks.push_back(make_check(z, "payoff_bound_c", cert.n, abs_c, payoff_bound));
    report.checks.push_back(make_check(z, "drift", 1, g1, cert.m * gz + cert.d));
    for (int t = 1; t <= horizon; ++t) {
      double bound = cert.m == 1.0
                         ? gz + t * cert.d
                         : std::pow(cert.m, t) * gz +
                               (1.0 - std::pow(cert.m, t)) / (1.0 - cert.m) * cert.d;
      report.checks.push_back(
          make_check(z, "horizon_bound", t, gt[static_cast<std::size_t>(t - 1)], bound));
    }
  }

  report.passed = std::all_of(report.checks.begin(), report.checks.end(),
                              [](const DriftCheck& c) { return c.pass; });
  return report;
}

double certificate_value_bound(const DecisionModel& model, const DriftCertificate& cert,
                               const Point& z, const IntegratorSpec& spec) {
  validate_certificate(cert, model.beta);
  double beta = model.beta;
  double s = cert.payoff_scale, o = cert.payoff_offset;
  double bn = std::pow(beta, cert.n);
  double a1 = 2.0 * bn * s / (1.0 - beta * cert.m);
  double a2 = 2.0 * bn * beta * s * cert.d / ((1.0 - beta * cert.m) * (1.0 - beta)) +
              2.0 * bn * o / (1.0 - beta);

  double sums = std::abs(model.flow_payoff(z));  // t = 0 flow term
  if (cert.n >= 2) {
    Integrator integ(model, spec, cert.n - 1);
    auto r = model.exit_payoff;
    auto c = model.flow_payoff;
    double bt = beta;
    for (int t = 1; t <= cert.n - 1; ++t) {
      sums += bt * integ.expect_path(z, t, [&r](const Point& zp) { return std::abs(r(zp)); });
      sums += bt * integ.expect_path(z, t, [&c](const Point& zp) { return std::abs(c(zp)); });
      bt *= beta;
    }
  }
  return sums + a1 * cert.g(z) + a2;
}

}  // namespace cvstop
