#ifndef CVSTOP_GRID_HPP
#define CVSTOP_GRID_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "cvstop/point.hpp"

namespace cvstop {

// Rectangular box the state lives in.  Infinite model domains are truncated
// to a finite box before gridding; the box is part of the model config.
struct StateSpace {
  int dim = 0;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<bool> open;           // bound excluded (informational)
  std::vector<std::string> names;   // coordinate labels for CSV output

  StateSpace() = default;
  StateSpace(std::vector<double> lo, std::vector<double> hi,
             std::vector<std::string> axis_names = {},
             std::vector<bool> open_flags = {});

  bool contains(const Point& z) const;
};

enum class GridScaling { uniform, log_dense_lower };

// Tensor-product grid: strictly increasing nodes per dimension.
struct Grid {
  std::vector<std::vector<double>> axes;
  std::vector<std::string> names;

  int dim() const { return static_cast<int>(axes.size()); }
  std::size_t size() const;
  Point node(std::size_t flat) const;
  std::vector<int> unflatten(std::size_t flat) const;
  std::size_t flatten(std::span<const int> idx) const;

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.axes == b.axes;
  }
};

// Builds a grid over `space`.  Uniform spacing by default; log_dense_lower
// places nodes geometrically from the lower bound so the mesh is finer near
// it (requires a positive lower bound).  Extreme nodes equal the bounds.
Grid make_grid(const StateSpace& space, const std::vector<int>& counts,
               const std::vector<GridScaling>& scaling = {});

// Values on a grid with multilinear interpolation inside the hull and
// clamp-to-nearest-node extrapolation outside it.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(Grid grid, std::vector<double> values);
  static GridFunction constant(Grid grid, double value);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  double value_at(std::size_t flat) const { return values_[flat]; }
  double& value_at(std::size_t flat) { return values_[flat]; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  // Multilinear interpolation; coordinates outside the hull are clamped to
  // the nearest node per dimension first.  NaN coordinates are rejected.
  double operator()(const Point& z) const;
  double eval(const Point& z) const { return (*this)(z); }

 private:
  Grid grid_;
  std::vector<double> values_;
};

// Largest absolute nodewise difference; both functions must share the grid
// shape (compared by node count).
double sup_distance(const GridFunction& a, const GridFunction& b);

}  // namespace cvstop

#endif
