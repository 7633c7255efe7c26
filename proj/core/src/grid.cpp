#include "cvstop/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cvstop/errors.hpp"

namespace cvstop {

StateSpace::StateSpace(std::vector<double> lo, std::vector<double> hi,
                       std::vector<std::string> axis_names,
                       std::vector<bool> open_flags)
    : dim(static_cast<int>(lo.size())),
      lower(std::move(lo)),
      upper(std::move(hi)),
      open(std::move(open_flags)),
      names(std::move(axis_names)) {
  if (dim < 1) throw ConfigError("state space needs dim >= 1");
  if (upper.size() != lower.size())
    throw ConfigError("state space bounds have mismatched lengths");
  for (int i = 0; i < dim; ++i) {
    if (!(lower[static_cast<std::size_t>(i)] < upper[static_cast<std::size_t>(i)]))
      throw ConfigError("state space requires lower < upper in every dimension");
  }
  if (names.empty()) {
    for (int i = 0; i < dim; ++i) names.push_back("z" + std::to_string(i));
  }
  if (open.empty()) open.assign(static_cast<std::size_t>(dim), false);
}

bool StateSpace::contains(const Point& z) const {
  if (z.dim() != dim) return false;
  for (int i = 0; i < dim; ++i) {
    if (z[i] < lower[static_cast<std::size_t>(i)] || z[i] > upper[static_cast<std::size_t>(i)])
      return false;
  }
  return true;
}

std::size_t Grid::size() const {
  std::size_t n = 1;
  for (const auto& ax : axes) n *= ax.size();
  return n;
}

Point Grid::node(std::size_t flat) const {
  Point p;
  // last dimension varies fastest
  std::size_t rem = flat;
  std::array<int, kMaxDim> idx{};
  for (int d = dim() - 1; d >= 0; --d) {
    std::size_t n = axes[static_cast<std::size_t>(d)].size();
    idx[static_cast<std::size_t>(d)] = static_cast<int>(rem % n);
    rem /= n;
  }
  for (int d = 0; d < dim(); ++d)
    p.push_back(axes[static_cast<std::size_t>(d)][static_cast<std::size_t>(idx[static_cast<std::size_t>(d)])]);
  return p;
}

std::vector<int> Grid::unflatten(std::size_t flat) const {
  std::vector<int> idx(static_cast<std::size_t>(dim()));
  std::size_t rem = flat;
  for (int d = dim() - 1; d >= 0; --d) {
    std::size_t n = axes[static_cast<std::size_t>(d)].size();
    idx[static_cast<std::size_t>(d)] = static_cast<int>(rem % n);
    rem /= n;
  }
  return idx;
}

std::size_t Grid::flatten(std::span<const int> idx) const {
  std::size_t flat = 0;
  for (int d = 0; d < dim(); ++d) {
    flat = flat * axes[static_cast<std::size_t>(d)].size() + static_cast<std::size_t>(idx[static_cast<std::size_t>(d)]);
  }
  return flat;
}

Grid make_grid(const StateSpace& space, const std::vector<int>& counts,
               const std::vector<GridScaling>& scaling) {
  if (static_cast<int>(counts.size()) != space.dim)
    throw ConfigError("make_grid: counts length must match state dimension");
  Grid g;
  g.names = space.names;
  for (int d = 0; d < space.dim; ++d) {
    int n = counts[static_cast<std::size_t>(d)];
    if (n < 2) throw ConfigError("make_grid: at least 2 nodes per dimension (got " + std::to_string(n) + ")");
    double lo = space.lower[static_cast<std::size_t>(d)];
    double hi = space.upper[static_cast<std::size_t>(d)];
    if (!std::isfinite(lo) || !std::isfinite(hi))
      throw ConfigError("make_grid: bounds must be finite for gridded dimensions");
    GridScaling sc = d < static_cast<int>(scaling.size()) ? scaling[static_cast<std::size_t>(d)] : GridScaling::uniform;
    std::vector<double> nodes(static_cast<std::size_t>(n));
    if (sc == GridScaling::uniform) {
      for (int i = 0; i < n; ++i)
        nodes[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    } else {
      if (!(lo > 0.0))
        throw ConfigError("make_grid: log-dense scaling needs a positive lower bound");
      double ratio = std::log(hi / lo);
      for (int i = 0; i < n; ++i)
        nodes[static_cast<std::size_t>(i)] = lo * std::exp(ratio * static_cast<double>(i) / (n - 1));
    }
    nodes.front() = lo;  // pin the extremes exactly
    nodes.back() = hi;
    g.axes.push_back(std::move(nodes));
  }
  return g;
}

GridFunction::GridFunction(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw ConfigError("grid function: value count does not match grid size");
  for (double v : values_) {
    if (!std::isfinite(v)) throw InputError("grid function: non-finite node value");
  }
}

GridFunction GridFunction::constant(Grid grid, double value) {
  std::size_t n = grid.size();
  return GridFunction(std::move(grid), std::vector<double>(n, value));
}

double GridFunction::operator()(const Point& z) const {
  int m = grid_.dim();
  if (z.dim() != m) throw InputError("grid function: query dimension mismatch");

  // Per-dimension cell index and interpolation weight, with clamping.
  std::array<std::size_t, kMaxDim> i0{};
  std::array<double, kMaxDim> w{};
  std::array<std::size_t, kMaxDim> stride{};
  std::size_t s = 1;
  for (int d = m - 1; d >= 0; --d) {
    stride[static_cast<std::size_t>(d)] = s;
    s *= grid_.axes[static_cast<std::size_t>(d)].size();
  }
  for (int d = 0; d < m; ++d) {
    double x = z[d];
    if (std::isnan(x)) throw InputError("grid function: NaN coordinate in query");
    const auto& ax = grid_.axes[static_cast<std::size_t>(d)];
    if (x <= ax.front()) {
      i0[static_cast<std::size_t>(d)] = 0;
      w[static_cast<std::size_t>(d)] = 0.0;
    } else if (x >= ax.back()) {
      i0[static_cast<std::size_t>(d)] = ax.size() - 2;
      w[static_cast<std::size_t>(d)] = 1.0;
    } else {
      auto it = std::upper_bound(ax.begin(), ax.end(), x);
      std::size_t hi = static_cast<std::size_t>(it - ax.begin());
      std::size_t lo = hi - 1;
      i0[static_cast<std::size_t>(d)] = lo;
      w[static_cast<std::size_t>(d)] = (x - ax[lo]) / (ax[hi] - ax[lo]);
    }
  }

  // Accumulate over the 2^m cell corners.
  double acc = 0.0;
  int corners = 1 << m;
  for (int c = 0; c < corners; ++c) {
    double cw = 1.0;
    std::size_t flat = 0;
    for (int d = 0; d < m; ++d) {
      int hi_bit = (c >> d) & 1;
      cw *= hi_bit ? w[static_cast<std::size_t>(d)] : 1.0 - w[static_cast<std::size_t>(d)];
      flat += (i0[static_cast<std::size_t>(d)] + static_cast<std::size_t>(hi_bit)) * stride[static_cast<std::size_t>(d)];
    }
    if (cw != 0.0) acc += cw * values_[flat];
  }
  return acc;
}

double sup_distance(const GridFunction& a, const GridFunction& b) {
  if (a.size() != b.size()) throw InputError("sup_distance: mismatched grids");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a.value_at(i) - b.value_at(i)));
  return m;
}

}  // namespace cvstop
