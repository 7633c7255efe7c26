#ifndef CVSTOP_INTEGRATE_HPP
#define CVSTOP_INTEGRATE_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "cvstop/errors.hpp"
#include "cvstop/model.hpp"

namespace cvstop {

enum class IntegratorKind { monte_carlo, gauss_hermite, grid_quadrature };

struct IntegratorSpec {
  IntegratorKind kind = IntegratorKind::monte_carlo;
  int draws = 1000;   // Monte Carlo sample size
  int order = 20;     // Gauss-Hermite nodes per shock dimension
  std::uint64_t seed = 0;

  friend bool operator==(const IntegratorSpec&, const IntegratorSpec&) = default;
};

std::string to_string(IntegratorKind k);
IntegratorKind integrator_kind_from_string(const std::string& s);

// Nodes and weights for the Hermite weight e^{-x^2}; weights sum to sqrt(pi).
std::pair<std::vector<double>, std::vector<double>> gauss_hermite_nodes(int order);

// Expectation engine bound to one model and one spec.  The Monte Carlo shock
// set is generated once here, from the seed alone, and reused for every state
// and every operator application, so the sampled operator is one fixed
// deterministic map.
class Integrator {
 public:
  Integrator(const DecisionModel& model, IntegratorSpec spec, int path_steps = 1);

  const IntegratorSpec& spec() const { return spec_; }
  const DecisionModel& model() const { return *model_; }

  // E_z h(Z_1).
  double expect(const Point& z, const std::function<double(const Point&)>& h) const;

  // E_z h(Z_t): t-step path expectation (Monte Carlo backend only; needs
  // path_steps >= t at construction).
  double expect_path(const Point& z, int t, const std::function<double(const Point&)>& h) const;

 private:
  const DecisionModel* model_;
  IntegratorSpec spec_;
  ShockSet shocks_;                  // monte_carlo
  std::vector<double> gh_points_;    // gauss_hermite: order^dim rows of dim coords
  std::vector<double> gh_weights_;   // normalized to sum 1
};

// One-shot expectation; equivalent to Integrator(model, spec).expect(z, h)
// because shock sets depend only on the spec.
double expectation(const DecisionModel& model, const Point& z,
                   const std::function<double(const Point&)>& integrand,
                   const IntegratorSpec& spec);

}  // namespace cvstop

#endif
