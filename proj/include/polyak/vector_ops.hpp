#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "polyak/error.hpp"

namespace polyak {

using Point = std::vector<double>;

inline void require_dimension(std::size_t expected, std::size_t actual) {
  if (expected != actual) throw DimensionError(expected, actual);
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  require_dimension(a.size(), b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double squared_norm(std::span<const double> a) { return dot(a, a); }

inline double norm(std::span<const double> a) { return std::sqrt(squared_norm(a)); }

inline Point difference(std::span<const double> a, std::span<const double> b) {
  require_dimension(a.size(), b.size());
  Point out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

inline double distance(std::span<const double> a, std::span<const double> b) {
  require_dimension(a.size(), b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double u = a[i] - b[i];
    s += u * u;
  }
  return std::sqrt(s);
}

}  // namespace polyak
