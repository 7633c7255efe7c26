#include "cvstop/model.hpp"

#include <cmath>

#include "cvstop/errors.hpp"

namespace cvstop {

std::vector<KernelMassCheck> check_kernel_mass(const DecisionModel& model, int n_states,
                                               int draws, std::uint64_t seed) {
  if (!model.kernel_density) throw ConfigError("model carries no kernel density");
  if (draws < 100) throw ConfigError("kernel mass check needs draws >= 100");

  const StateSpace& sp = model.space;
  double vol = 1.0;
  for (int d = 0; d < sp.dim; ++d)
    vol *= sp.upper[static_cast<std::size_t>(d)] - sp.lower[static_cast<std::size_t>(d)];

  std::vector<KernelMassCheck> out;
  for (int s = 0; s < n_states; ++s) {
    // states on the central diagonal of the box
    Point z;
    double f = n_states == 1 ? 0.5 : 0.25 + 0.5 * static_cast<double>(s) / (n_states - 1);
    for (int d = 0; d < sp.dim; ++d) {
      double lo = sp.lower[static_cast<std::size_t>(d)], hi = sp.upper[static_cast<std::size_t>(d)];
      z.push_back(lo + f * (hi - lo));
    }
    Rng rng(substream_seed(seed, static_cast<std::uint64_t>(s)));
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < draws; ++i) {
      Point zp;
      for (int d = 0; d < sp.dim; ++d) {
        double lo = sp.lower[static_cast<std::size_t>(d)], hi = sp.upper[static_cast<std::size_t>(d)];
        zp.push_back(lo + rng.uniform() * (hi - lo));
      }
      double v = vol * model.kernel_density(zp, z);
      if (!std::isfinite(v)) throw EvaluationError("kernel density non-finite at " + to_string(zp));
      sum += v;
      sumsq += v * v;
    }
    KernelMassCheck chk;
    chk.state = z;
    chk.estimate = sum / draws;
    double var = std::max(0.0, sumsq / draws - chk.estimate * chk.estimate);
    chk.se = std::sqrt(var / draws);
    chk.pass = std::abs(chk.estimate - 1.0) <= 3.0 * chk.se;
    out.push_back(chk);
  }
  return out;
}

}  // namespace cvstop
