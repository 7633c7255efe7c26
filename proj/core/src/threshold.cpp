#include "cvstop/threshold.hpp"

#include <cmath>

#include "cvstop/errors.hpp"
#include "cvstop/parallel.hpp"
#include "cvstop/rng.hpp"

namespace cvstop {

namespace {

// Widens [lo, hi] until phi changes sign across it; at most 60 expansions.
// A finite domain limit is approached geometrically rather than crossed.
bool bracket_root(const std::function<double(double)>& phi, double& lo, double& hi,
                  double& flo, double& fhi, double floor, double ceil) {
  flo = phi(lo);
  fhi = phi(hi);
  for (int k = 0; k < 60 && flo * fhi > 0.0; ++k) {
    if (std::isnan(flo) || std::isnan(fhi))
      throw EvaluationError("exit payoff NaN while bracketing a threshold");
    double width = hi - lo;
    // the endpoint with the smaller |phi| sits nearer the crossing
    if (std::abs(flo) < std::abs(fhi)) {
      lo = std::isfinite(floor) ? floor + 0.5 * (lo - floor) : lo - width;
      flo = phi(lo);
    } else {
      hi = std::isfinite(ceil) ? ceil - 0.5 * (ceil - hi) : hi + width;
      fhi = phi(hi);
    }
  }
  return flo * fhi <= 0.0;
}

}  // namespace

ThresholdCurve solve_threshold_curve(const ThresholdModel& tm, const GridFunction& psi_star,
                                     std::pair<double, double> x_bracket, double root_tol) {
  if (!(root_tol > 0.0)) throw ConfigError("solve_threshold_curve needs root_tol > 0");
  if (!(x_bracket.first < x_bracket.second))
    throw ConfigError("solve_threshold_curve needs a nonempty bracket");

  ThresholdCurve curve;
  curve.env_grid = psi_star.grid();
  curve.direction = tm.direction;
  curve.values.resize(psi_star.size());

  std::vector<std::string> failures(psi_star.size());
  parallel_for(psi_star.size(), [&](std::size_t i) {
    Point y = curve.env_grid.node(i);
    double target = psi_star.value_at(i);
    auto phi = [&](double x) { return tm.exit_at(x, y) - target; };

    double lo = x_bracket.first, hi = x_bracket.second, flo, fhi;
    if (!bracket_root(phi, lo, hi, flo, fhi, tm.x_floor, tm.x_ceil)) {
      failures[i] = "no threshold: r(x,y) - psi*(y) keeps one sign near y = " + to_string(y);
      return;
    }
    // bisection; strict monotonicity of r in x makes the root unique
    while (hi - lo > root_tol) {
      double mid = 0.5 * (lo + hi);
      double fm = phi(mid);
      if (fm == 0.0) {
        lo = hi = mid;
        break;
      }
      if (flo * fm <= 0.0) {
        hi = mid;
        fhi = fm;
      } else {
        lo = mid;
        flo = fm;
      }
    }
    curve.values[i] = 0.5 * (lo + hi);
  });

  for (const auto& msg : failures) {
    if (!msg.empty()) throw NoThresholdError(msg);
  }
  return curve;
}

Action decide(const ThresholdModel& tm, double x, const Point& y, const ThresholdCurve& curve) {
  double xbar = curve(y);
  if (tm.direction == Monotone::increasing) return x >= xbar ? Action::stop : Action::wait;
  return x <= xbar ? Action::stop : Action::wait;
}

namespace {

// central difference of a grid function along dimension i at an interior node
double grid_central_diff(const GridFunction& f, const std::vector<int>& idx, int i) {
  const auto& ax = f.grid().axes[static_cast<std::size_t>(i)];
  std::vector<int> up = idx, dn = idx;
  up[static_cast<std::size_t>(i)] += 1;
  dn[static_cast<std::size_t>(i)] -= 1;
  double xu = ax[static_cast<std::size_t>(up[static_cast<std::size_t>(i)])];
  double xd = ax[static_cast<std::size_t>(dn[static_cast<std::size_t>(i)])];
  return (f.value_at(f.grid().flatten(up)) - f.value_at(f.grid().flatten(dn))) / (xu - xd);
}

}  // namespace

double threshold_gradient(const ThresholdModel& tm, const GridFunction& psi_star,
                          const ThresholdCurve& curve, std::span<const int> y_index, int i) {
  const Grid& grid = curve.env_grid;
  if (static_cast<int>(y_index.size()) != grid.dim())
    throw InputError("threshold_gradient: index dimension mismatch");
  if (i < 0 || i >= grid.dim()) throw InputError("threshold_gradient: bad environment dimension");
  for (int d = 0; d < grid.dim(); ++d) {
    int n = static_cast<int>(grid.axes[static_cast<std::size_t>(d)].size());
    int id = y_index[static_cast<std::size_t>(d)];
    if (id <= 0 || id >= n - 1)
      throw BoundaryDerivativeError("threshold_gradient needs an interior environment node");
  }

  std::vector<int> idx(y_index.begin(), y_index.end());
  std::size_t flat = grid.flatten(idx);
  Point y = grid.node(flat);
  double xbar = curve.values[flat];

  double dr_dx;
  if (tm.dr_dx) {
    dr_dx = tm.dr_dx(xbar, y);
  } else {
    double h = 1e-6 * (1.0 + std::abs(xbar));
    dr_dx = (tm.exit_at(xbar + h, y) - tm.exit_at(xbar - h, y)) / (2.0 * h);
  }
  if (dr_dx == 0.0)
    throw NumericError("threshold_gradient: exit payoff flat in x at " + to_string(y));

  double dr_dy;
  if (static_cast<std::size_t>(i) < tm.dr_denv.size() && tm.dr_denv[static_cast<std::size_t>(i)]) {
    dr_dy = tm.dr_denv[static_cast<std::size_t>(i)](xbar, y);
  } else {
    double h = 1e-6 * (1.0 + std::abs(y[i]));
    Point yu = y, yd = y;
    yu[i] += h;
    yd[i] -= h;
    dr_dy = (tm.exit_at(xbar, yu) - tm.exit_at(xbar, yd)) / (2.0 * h);
  }

  double dpsi = grid_central_diff(psi_star, idx, i);
  return -(dr_dy - dpsi) / dr_dx;
}

void validate_threshold(const ThresholdModel& tm, const DecisionModel& full_model,
                        int samples, std::uint64_t seed) {
  Rng rng(seed);
  const StateSpace& sp = full_model.space;
  double sign = tm.direction == Monotone::increasing ? 1.0 : -1.0;
  for (int s = 0; s < samples; ++s) {
    Point full;
    for (int d = 0; d < sp.dim; ++d) {
      double lo = sp.lower[static_cast<std::size_t>(d)], hi = sp.upper[static_cast<std::size_t>(d)];
      full.push_back(lo + rng.uniform() * (hi - lo));
    }
    Point y = full.tail();
    double x = full[0];
    double h = 1e-4 * (1.0 + std::abs(x));
    double diff = tm.exit_at(x + h, y) - tm.exit_at(x - h, y);
    if (!(sign * diff > 0.0))
      throw NumericError("exit payoff not strictly monotone in x near " + to_string(full));

    // transitions must ignore x
    std::vector<double> shock(static_cast<std::size_t>(full_model.shock_dim));
    for (double& v : shock) {
      v = full_model.shock_kind == ShockKind::normal ? rng.normal() : rng.uniform();
    }
    Point alt = full;
    alt[0] = sp.lower[0] + rng.uniform() * (sp.upper[0] - sp.lower[0]);
    Point n1 = full_model.step(full, shock);
    Point n2 = full_model.step(alt, shock);
    if (!(n1 == n2))
      throw NumericError("environment kernel depends on the threshold coordinate near " +
                         to_string(full));
  }
}

}  // namespace cvstop
