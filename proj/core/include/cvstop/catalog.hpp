#ifndef CVSTOP_CATALOG_HPP
#define CVSTOP_CATALOG_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cvstop/integrate.hpp"
#include "cvstop/model.hpp"
#include "cvstop/threshold.hpp"
#include "cvstop/weights.hpp"

namespace cvstop {

// u(w) = w^{1-delta}/(1-delta), or ln w at delta = 1.
double crra_utility(double w, double delta);

// Density of `scale` times a Beta(a, b) variable, supported on [0, scale].
double scaled_beta_pdf(double w, double a, double b, double scale);

// pi' = pi f / (pi f + (1 - pi) g); rejects a vanishing denominator.
double belief_update_two_density(double pi, double f_val, double g_val);

// Normal learning with known noise variance:
//   gamma' = (1/gamma + 1/gamma_eps)^{-1},
//   mu'    = gamma' (mu/gamma + ln_w/gamma_eps).
std::pair<double, double> posterior_update_normal(double mu, double gamma, double gamma_eps,
                                                  double ln_w);

// Learning about a persistent component from a noisy public signal:
//   gamma' = [1/gamma + rho^2/(gamma_xi + gamma_y)]^{-1},
//   mu'    = gamma' [mu/gamma + rho y'/(gamma_xi + gamma_y)].
std::pair<double, double> posterior_update_signal(double mu, double gamma, double rho,
                                                  double gamma_xi, double gamma_y,
                                                  double y_signal);

// Expected flow utility of the entry dividend under belief (mu, gamma):
//   (1 - e^{-a mu + a^2 (gamma + gamma_x)/2}) / a.
double entry_expected_utility(double mu, double gamma, double a, double gamma_x);

// A fully wired model: payoffs, transition, drift certificate, default
// grids/integrator and, where the state splits into threshold and
// environment coordinates, the environment-space decomposition (threshold
// coordinate stored first).
struct CatalogModel {
  std::string id;
  std::map<std::string, double> params;

  DecisionModel model;  // full-state model (value function iteration)
  std::optional<ThresholdModel> threshold;

  DriftCertificate cert;                     // on full states
  std::optional<DriftCertificate> env_cert;  // same constants on env coordinates

  std::vector<int> counts;  // default full grid
  std::vector<GridScaling> scaling;
  std::vector<int> env_counts;
  std::vector<GridScaling> env_scaling;

  IntegratorSpec integrator;  // default backend
  std::vector<Point> drift_states;
  bool closed_form_reservation = false;

  Grid full_grid() const { return make_grid(model.space, counts, scaling); }
  Grid env_grid() const;
};

const std::vector<std::string>& catalog_ids();

// Builds a catalog entry at its defaults with the given parameter
// overrides.  Unknown ids and unknown or infeasible parameters are rejected.
CatalogModel build_model(const std::string& id,
                         const std::map<std::string, double>& overrides = {});

// Maps a solved continuation value to the reservation threshold where a
// closed form exists (js_two_density, js_perm_trans, firm_entry).
double reservation_closed_form(const std::string& id, double psi_star_value,
                               const std::map<std::string, double>& params);

// Evenly spread probe states along the box diagonal; default inputs to
// verify_drift.
std::vector<Point> diagonal_states(const StateSpace& sp, int n);

}  // namespace cvstop

#endif
