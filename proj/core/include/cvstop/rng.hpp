#ifndef CVSTOP_RNG_HPP
#define CVSTOP_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace cvstop {

// Deterministic random stream.  Uniform and normal variates are derived from
// raw mt19937_64 output with fixed formulas, so a given seed produces the
// same doubles on every platform and build.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; consumes exactly two uniforms.
  double normal() {
    double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

// Mixes a stream index into a base seed; used to give every state or worker
// its own substream independent of scheduling.
inline std::uint64_t substream_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t x = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

enum class ShockKind { normal, uniform };

// A fixed matrix of unit shocks: `draws` paths, `steps` transitions each,
// `dim` shock coordinates per transition.  Generated once per solve and
// shared across states and iterations (common random numbers).
struct ShockSet {
  int draws = 0;
  int steps = 0;
  int dim = 0;
  std::vector<double> data;

  static ShockSet make(ShockKind kind, int draws, int steps, int dim, std::uint64_t seed) {
    ShockSet s;
    s.draws = draws;
    s.steps = steps;
    s.dim = dim;
    s.data.resize(static_cast<std::size_t>(draws) * steps * dim);
    Rng rng(seed);
    for (double& v : s.data) v = (kind == ShockKind::normal) ? rng.normal() : rng.uniform();
    return s;
  }

  std::span<const double> at(int draw, int step) const {
    std::size_t off = (static_cast<std::size_t>(draw) * steps + step) * dim;
    return {data.data() + off, static_cast<std::size_t>(dim)};
  }
};

}  // namespace cvstop

#endif
