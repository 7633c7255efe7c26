#ifndef CVSTOP_WEIGHTS_HPP
#define CVSTOP_WEIGHTS_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cvstop/grid.hpp"
#include "cvstop/integrate.hpp"
#include "cvstop/model.hpp"

namespace cvstop {

// Drift data (g, n, m, d) for a model with possibly unbounded payoffs:
//
//   max{ E_z|r(Z_n)|, E_z|c(Z_n)| } <= payoff_scale * g(z) + payoff_offset
//   E_z g(Z_1)                      <= m * g(z) + d,        beta * m < 1.
//
// payoff_scale/offset default to (1, 0); several catalog certificates need
// the affine form because their natural g dominates the n-step payoff
// expectations only up to constants.
struct DriftCertificate {
  std::function<double(const Point&)> g;
  int n = 0;
  double m = 1.0;
  double d = 0.0;
  double payoff_scale = 1.0;
  double payoff_offset = 0.0;
};

// Throws CertificateError unless beta * m < 1 and the constants are sane.
void validate_certificate(const DriftCertificate& cert, double beta);

// Picks (m', d') with m + 2m' > 1, beta(m + 2m') < 1 and
// d' >= d / (m + 2m' - 1).  Deterministic rule: start from
// max((1-m)/2, (1/beta-m)/4) and fall back to the midpoint of the feasible
// interval when that candidate leaves less than 1e-6 slack on either strict
// inequality.
std::pair<double, double> choose_modulus_constants(const DriftCertificate& cert, double beta);

// The weight the fixed-point space is scaled by:
//   ell(z) = m' (sum_{t=1}^{n-1} E_z|r(Z_t)| + sum_{t=0}^{n-1} E_z|c(Z_t)|)
//            + g(z) + d'.
// n = 0 and n = 1 reduce to closed forms; n >= 2 estimates the sums with the
// solve's fixed shock set, so ell is deterministic within a solve.
struct WeightFunction {
  DriftCertificate cert;
  double m_prime = 0.0;
  double d_prime = 0.0;
  std::function<double(const Point&)> ell;

  double contraction_modulus(double beta) const { return beta * (cert.m + 2.0 * m_prime); }
};

WeightFunction build_weight_function(const DecisionModel& model, const DriftCertificate& cert,
                                     const IntegratorSpec& spec);
// Same, with the modulus constants supplied instead of chosen.
WeightFunction build_weight_function(const DecisionModel& model, const DriftCertificate& cert,
                                     double m_prime, double d_prime, const IntegratorSpec& spec);

// max over grid nodes of |f(z)| / ell(z).
double weighted_sup_norm(const GridFunction& f, const WeightFunction& wf);

struct DriftCheck {
  Point state;
  std::string quantity;  // "payoff_bound", "drift", "horizon_bound"
  int t = 0;             // horizon of the estimate
  double estimate = 0.0;
  double bound = 0.0;
  double se = 0.0;
  double margin = 0.0;   // bound - estimate
  bool pass = true;      // estimate <= bound + 3 se
};

struct DriftReport {
  std::uint64_t seed = 0;
  int draws = 0;
  int horizon = 0;
  bool passed = true;
  std::vector<DriftCheck> checks;
};

// Statistical audit of a certificate against its model.  For each test state
// the payoff bound at horizon n, the one-step drift bound, and the iterated
// bound E_z g(Z_t) <= m^t g + (1-m^t)/(1-m) d (g + t d when m = 1) for
// t <= horizon are estimated by Monte Carlo with per-state substreams.  A
// violated bound is reported, not thrown.
DriftReport verify_drift(const DecisionModel& model, const DriftCertificate& cert,
                         std::span<const Point> test_states, int draws, std::uint64_t seed,
                         int horizon = 5);

// Envelope implied by the certificate:
//   sum_{t=1}^{n-1} beta^t E_z|r(Z_t)| + sum_{t=0}^{n-1} beta^t E_z|c(Z_t)|
//   + A1 g(z) + A2,
// with A1 = 2 beta^n s / (1 - beta m) and
// A2 = 2 beta^{n+1} s d / ((1 - beta m)(1 - beta)) + 2 beta^n o / (1 - beta)
// for (s, o) the payoff scale/offset.  Every fixed point of the
// continuation-value operator is bounded by it in absolute value.
double certificate_value_bound(const DecisionModel& model, const DriftCertificate& cert,
                               const Point& z, const IntegratorSpec& spec);

}  // namespace cvstop

#endif
