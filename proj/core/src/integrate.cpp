#include "cvstop/integrate.hpp"

#include <cmath>

namespace cvstop {

std::string to_string(IntegratorKind k) {
  switch (k) {
    case IntegratorKind::monte_carlo: return "monte_carlo";
    case IntegratorKind::gauss_hermite: return "gauss_hermite";
    case IntegratorKind::grid_quadrature: return "grid_quadrature";
  }
  return "monte_carlo";
}

IntegratorKind integrator_kind_from_string(const std::string& s) {
  if (s == "monte_carlo") return IntegratorKind::monte_carlo;
  if (s == "gauss_hermite") return IntegratorKind::gauss_hermite;
  if (s == "grid_quadrature") return IntegratorKind::grid_quadrature;
  throw ConfigError("unknown integrator kind '" + s + "'");
}

std::pair<std::vector<double>, std::vector<double>> gauss_hermite_nodes(int order) {
  if (order < 1 || order > 128)
    throw ConfigError("gauss_hermite_nodes: order must lie in [1, 128]");

  // Newton iteration on the Hermite recurrence, one root per half-axis.
  const double eps = 1e-14;
  const double pim4 = 0.7511255444649425;  // pi^{-1/4}
  const int maxit = 100;
  int n = order;
  std::vector<double> x(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
  int m = (n + 1) / 2;
  double z = 0.0, pp = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0) {
      z = std::sqrt(static_cast<double>(2 * n + 1)) -
          1.85575 * std::pow(static_cast<double>(2 * n + 1), -0.16667);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * x[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * x[1];
    } else {
      z = 2.0 * z - x[static_cast<std::size_t>(i - 2)];
    }
    for (int its = 0; its < maxit; ++its) {
      double p1 = pim4, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= eps) break;
    }
    x[static_cast<std::size_t>(i)] = z;
    x[static_cast<std::size_t>(n - 1 - i)] = -z;
    w[static_cast<std::size_t>(i)] = 2.0 / (pp * pp);
    w[static_cast<std::size_t>(n - 1 - i)] = w[static_cast<std::size_t>(i)];
  }
  // roots come out descending; flip to increasing
  std::vector<double> xs(x.rbegin(), x.rend());
  std::vector<double> ws(w.rbegin(), w.rend());
  if (n == 1) {
    xs = {0.0};
    ws = {std::sqrt(3.14159265358979323846)};
  }
  return {xs, ws};
}

Integrator::Integrator(const DecisionModel& model, IntegratorSpec spec, int path_steps)
    : model_(&model), spec_(spec) {
  switch (spec_.kind) {
    case IntegratorKind::monte_carlo: {
      if (spec_.draws < 1) throw ConfigError("integrator: draws must be >= 1");
      shocks_ = ShockSet::make(model.shock_kind, spec_.draws, std::max(1, path_steps),
                               model.shock_dim, spec_.seed);
      break;
    }
    case IntegratorKind::gauss_hermite: {
      if (model.shock_kind != ShockKind::normal)
        throw ConfigError("gauss_hermite backend requires Gaussian unit shocks");
      if (spec_.order < 1) throw ConfigError("integrator: order must be >= 1");
      auto [nodes, weights] = gauss_hermite_nodes(spec_.order);
      const double sqrt2 = std::sqrt(2.0);
      const double sqrtpi = std::sqrt(3.14159265358979323846);
      // tensor product over shock dimensions; N(0,1) change of variables
      std::size_t total = 1;
      for (int d = 0; d < model.shock_dim; ++d) {
        total *= nodes.size();
        if (total > (1u << 22))
          throw ConfigError("gauss_hermite tensor grid too large for this shock dimension");
      }
      gh_points_.resize(total * static_cast<std::size_t>(model.shock_dim));
      gh_weights_.assign(total, 1.0);
      for (std::size_t row = 0; row < total; ++row) {
        std::size_t rem = row;
        for (int d = model.shock_dim - 1; d >= 0; --d) {
          std::size_t j = rem % nodes.size();
          rem /= nodes.size();
          gh_points_[row * static_cast<std::size_t>(model.shock_dim) + static_cast<std::size_t>(d)] =
              sqrt2 * nodes[j];
          gh_weights_[row] *= weights[j] / sqrtpi;
        }
      }
      break;
    }
    case IntegratorKind::grid_quadrature: {
      if (!model.quad)
        throw ConfigError("grid_quadrature backend requires a model quadrature rule");
      break;
    }
  }
}

double Integrator::expect(const Point& z, const std::function<double(const Point&)>& h) const {
  const DecisionModel& m = *model_;
  switch (spec_.kind) {
    case IntegratorKind::monte_carlo: {
      double acc = 0.0;
      for (int i = 0; i < spec_.draws; ++i) {
        Point zp = m.step(z, shocks_.at(i, 0));
        double v = h(zp);
        if (!std::isfinite(v)) {
          throw EvaluationError("non-finite integrand at draw " + std::to_string(i) +
                                ", state " + to_string(z));
        }
        acc += v;
      }
      return acc / spec_.draws;
    }
    case IntegratorKind::gauss_hermite: {
      double acc = 0.0;
      std::size_t rows = gh_weights_.size();
      for (std::size_t i = 0; i < rows; ++i) {
        std::span<const double> shock{gh_points_.data() + i * static_cast<std::size_t>(m.shock_dim),
                                      static_cast<std::size_t>(m.shock_dim)};
        Point zp = m.step(z, shock);
        double v = h(zp);
        if (!std::isfinite(v)) {
          throw EvaluationError("non-finite integrand at node " + std::to_string(i) +
                                ", state " + to_string(z));
        }
        acc += gh_weights_[i] * v;
      }
      return acc;
    }
    case IntegratorKind::grid_quadrature: {
      const QuadratureRule& q = *m.quad;
      double acc = 0.0, mass = 0.0;
      for (std::size_t j = 0; j < q.nodes.size(); ++j) {
        double w = q.weights[j] * q.density(z, q.nodes[j]);
        if (w == 0.0) continue;
        double v = h(q.next(z, q.nodes[j]));
        if (!std::isfinite(v)) {
          throw EvaluationError("non-finite integrand at quadrature node " + std::to_string(j) +
                                ", state " + to_string(z));
        }
        acc += w * v;
        mass += w;
      }
      if (!(mass > 0.0)) throw EvaluationError("quadrature mass vanished at state " + to_string(z));
      return acc / mass;
    }
  }
  return 0.0;
}

double Integrator::expect_path(const Point& z, int t,
                               const std::function<double(const Point&)>& h) const {
  if (t == 0) return h(z);
  if (spec_.kind != IntegratorKind::monte_carlo)
    throw ConfigError("path expectations need the monte_carlo backend");
  if (t > shocks_.steps)
    throw ConfigError("path expectation horizon exceeds the prepared shock set");
  const DecisionModel& m = *model_;
  double acc = 0.0;
  for (int i = 0; i < spec_.draws; ++i) {
    Point cur = z;
    for (int s = 0; s < t; ++s) {
      Point next = m.step(cur, shocks_.at(i, s));
      // models stepped on environment coordinates return the full next
      // state; project before stepping again, keep the full state for h
      cur = (s + 1 < t && next.dim() != cur.dim()) ? m.psi_coords(next) : next;
    }
    double v = h(cur);
    if (!std::isfinite(v)) {
      throw EvaluationError("non-finite integrand at draw " + std::to_string(i) +
                            " on a " + std::to_string(t) + "-step path from " + to_string(z));
    }
    acc += v;
  }
  return acc / spec_.draws;
}

double expectation(const DecisionModel& model, const Point& z,
                   const std::function<double(const Point&)>& integrand,
                   const IntegratorSpec& spec) {
  return Integrator(model, spec).expect(z, integrand);
}

}  // namespace cvstop
