#ifndef CVSTOP_POINT_HPP
#define CVSTOP_POINT_HPP

#include <array>
#include <cassert>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>

namespace cvstop {

// Highest state dimension supported by the fixed-capacity Point type.
inline constexpr int kMaxDim = 6;

// A state vector with value semantics and no heap traffic.  Operator sweeps
// construct millions of these per solve.
class Point {
 public:
  Point() = default;

  Point(std::initializer_list<double> xs) {
    assert(static_cast<int>(xs.size()) <= kMaxDim);
    for (double v : xs) x_[n_++] = v;
  }

  explicit Point(std::span<const double> xs) {
    assert(static_cast<int>(xs.size()) <= kMaxDim);
    for (double v : xs) x_[n_++] = v;
  }

  int dim() const { return n_; }
  double operator[](int i) const { return x_[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return x_[static_cast<std::size_t>(i)]; }

  void push_back(double v) {
    assert(n_ < kMaxDim);
    x_[static_cast<std::size_t>(n_++)] = v;
  }

  std::span<const double> view() const { return {x_.data(), static_cast<std::size_t>(n_)}; }

  // Drops the leading coordinate; used to project a full state onto the
  // environment coordinates of a threshold model.
  Point tail() const {
    Point p;
    for (int i = 1; i < n_; ++i) p.push_back(x_[static_cast<std::size_t>(i)]);
    return p;
  }

  // Prepends a coordinate (inverse of tail()).
  static Point join(double head, const Point& rest) {
    Point p;
    p.push_back(head);
    for (int i = 0; i < rest.dim(); ++i) p.push_back(rest[i]);
    return p;
  }

  friend bool operator==(const Point& a, const Point& b) {
    if (a.n_ != b.n_) return false;
    for (int i = 0; i < a.n_; ++i) {
      if (a.x_[static_cast<std::size_t>(i)] != b.x_[static_cast<std::size_t>(i)]) return false;
    }
    return true;
  }

 private:
  std::array<double, kMaxDim> x_{};
  int n_ = 0;
};

inline std::string to_string(const Point& p) {
  std::string s = "(";
  for (int i = 0; i < p.dim(); ++i) {
    if (i) s += ", ";
    s += std::to_string(p[i]);
  }
  return s + ")";
}

}  // namespace cvstop

#endif
