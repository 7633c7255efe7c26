#ifndef CVSTOP_TESTS_SUPPORT_HPP
#define CVSTOP_TESTS_SUPPORT_HPP

// Shared fixtures and independent oracles.  Everything here is deliberately
// primitive (plain doubles, no grids) so the checks stay independent of the
// library's own evaluation path.

#include <cmath>
#include <utility>

#include "cvstop/model.hpp"
#include "cvstop/rng.hpp"

namespace testsupport {

// psi = c + beta * max(r, psi), solved by damped scalar iteration.
inline double scalar_stopping_fixed_point(double r, double c, double beta) {
  double psi = 0.0;
  for (int k = 0; k < 20000; ++k) {
    double next = c + beta * std::max(r, psi);
    if (std::abs(next - psi) < 1e-15) return next;
    psi = next;
  }
  return psi;
}

// v = max(r, c + beta v) by scalar iteration.
inline double scalar_value_fixed_point(double r, double c, double beta) {
  double v = 0.0;
  for (int k = 0; k < 20000; ++k) {
    double next = std::max(r, c + beta * v);
    if (std::abs(next - v) < 1e-15) return next;
    v = next;
  }
  return v;
}

// Joint scalar system for temporary stopping:
//   psi = c + beta max(r, psi),  r = s + alpha beta max(r, psi) + (1-alpha) beta r.
inline std::pair<double, double> scalar_repeated_fixed_point(double c, double s, double beta,
                                                             double alpha) {
  double psi = 0.0, r = 0.0;
  for (int k = 0; k < 20000; ++k) {
    double m = std::max(r, psi);
    double psi_n = c + beta * m;
    double r_n = s + alpha * beta * m + (1.0 - alpha) * beta * r;
    if (std::abs(psi_n - psi) + std::abs(r_n - r) < 1e-16) return {psi_n, r_n};
    psi = psi_n;
    r = r_n;
  }
  return {psi, r};
}

// E exp(a X) for X ~ N(mu, sig2).
inline double lognormal_moment(double a, double mu, double sig2) {
  return std::exp(a * mu + a * a * sig2 / 2.0);
}

// constant-payoff model on [0,1] with an iid uniform state
inline cvstop::DecisionModel constant_model(double r, double c, double beta) {
  cvstop::DecisionModel m;
  m.beta = beta;
  m.space = cvstop::StateSpace({0.0}, {1.0}, {"z"});
  m.exit_payoff = [r](const cvstop::Point&) { return r; };
  m.flow_payoff = [c](const cvstop::Point&) { return c; };
  m.shock_dim = 1;
  m.shock_kind = cvstop::ShockKind::uniform;
  m.step = [](const cvstop::Point&, std::span<const double> u) { return cvstop::Point{u[0]}; };
  return m;
}

}  // namespace testsupport

#endif
