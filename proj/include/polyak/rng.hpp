#pragma once

// Portable seeded sampling.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. Distributions are implemented here rather than taken from
// <random>, whose algorithms are implementation-defined:
//   uniform  — top 53 bits of one engine draw, scaled to [0, 1)
//   normal   — Box–Muller on two uniforms, second value cached
//   sphere   — normalized vector of independent normals
//   ball     — sphere direction scaled by radius · u^(1/d)

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "polyak/error.hpp"
#include "polyak/vector_ops.hpp"

namespace polyak {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (cached_) {
      const double v = *cached_;
      cached_.reset();
      return v;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(theta);
    return r * std::cos(theta);
  }

  /// Uniformly distributed unit vector.
  Point direction(std::size_t dim) {
    if (dim == 0) throw InvalidArgument("dimension must be positive");
    Point v(dim);
    double n2 = 0.0;
    while (!(n2 > 1e-300)) {
      for (auto& c : v) c = normal();
      n2 = squared_norm(v);
    }
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& c : v) c *= inv;
    return v;
  }

  /// A point at exactly `radius` from `center`, uniform direction.
  Point on_sphere(std::span<const double> center, double radius) {
    Point v = direction(center.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = center[i] + radius * v[i];
    return v;
  }

  /// A point uniformly distributed in the closed ball.
  Point in_ball(std::span<const double> center, double radius) {
    Point v = direction(center.size());
    const double r = radius * std::pow(uniform(), 1.0 / static_cast<double>(center.size()));
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = center[i] + r * v[i];
    return v;
  }

 private:
  std::mt19937_64 engine_;
  std::optional<double> cached_;
};

inline std::vector<Point> sample_ball(Rng& rng, std::span<const double> center, double radius,
                                      std::size_t count) {
  std::vector<Point> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(rng.in_ball(center, radius));
  return out;
}

}  // namespace polyak
