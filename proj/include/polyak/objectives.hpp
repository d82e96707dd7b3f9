#pragma once

// Synthetic convex objectives with exact metadata.
//
// Four kinds cover the regimes of gradient descent analysis:
//   quadratic                 f = ½ Σ λ_i (x_i − x*_i)² + c         (α = min λ, β = max λ)
//   scaled-euclidean-norm     f = s ‖x − x*‖ + c                    (G = s, nonsmooth)
//   singular-quadratic        quadratic with some λ_i = 0           (α = 0, β = max λ)
//   strongly-convex-plus-l1   f = (a/2)‖x − x*‖² + w ‖x − x*‖₁ + c   (α = a, nonsmooth)

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polyak/error.hpp"
#include "polyak/vector_ops.hpp"

namespace polyak {

enum class ObjectiveKind {
  quadratic,
  scaled_euclidean_norm,
  singular_quadratic,
  strongly_convex_plus_l1,
};

inline std::string_view to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::quadratic: return "quadratic";
    case ObjectiveKind::scaled_euclidean_norm: return "scaled-euclidean-norm";
    case ObjectiveKind::singular_quadratic: return "singular-quadratic";
    case ObjectiveKind::strongly_convex_plus_l1: return "strongly-convex-plus-l1";
  }
  return "unknown";
}

inline ObjectiveKind parse_objective_kind(std::string_view name) {
  for (auto k : {ObjectiveKind::quadratic, ObjectiveKind::scaled_euclidean_norm,
                 ObjectiveKind::singular_quadratic,
                 ObjectiveKind::strongly_convex_plus_l1}) {
    if (to_string(k) == name) return k;
  }
  throw InvalidArgument("unknown objective kind '" + std::string(name) + "'");
}

/// Kind-specific coefficients. Only the fields relevant to the kind are read.
struct ObjectiveParams {
  std::vector<double> eigenvalues;  // quadratic kinds: diagonal curvature
  double norm_scale = 1.0;          // scaled-euclidean-norm
  double strong_convexity = 0.0;    // strongly-convex-plus-l1: quadratic coefficient
  double l1_weight = 0.0;           // strongly-convex-plus-l1
};

struct ObjectiveSpec {
  std::size_t dimension = 0;
  ObjectiveKind kind = ObjectiveKind::quadratic;
  double alpha = 0.0;
  std::optional<double> beta;         // nullopt: nonsmooth
  std::optional<double> lipschitz_G;  // nullopt: unbounded globally
  double f_star = 0.0;
  Point x_star;
  ObjectiveParams params;
  double offset = 0.0;

  bool smooth() const noexcept { return beta.has_value(); }
  bool strongly_convex() const noexcept { return alpha > 0.0; }
};

/// Values of h in [−kSuboptimalityClamp, 0) are round-off and clamp to 0.
inline constexpr double kSuboptimalityClamp = 1e-12;

inline ObjectiveSpec make_objective(ObjectiveKind kind, std::size_t dimension,
                                    ObjectiveParams params, Point x_star,
                                    double offset = 0.0) {
  if (dimension == 0) throw InvalidArgument("dimension must be positive");
  if (x_star.empty()) x_star.assign(dimension, 0.0);
  require_dimension(dimension, x_star.size());
  if (!std::isfinite(offset)) throw InvalidArgument("offset must be finite");

  ObjectiveSpec obj;
  obj.dimension = dimension;
  obj.kind = kind;
  obj.f_star = offset;
  obj.offset = offset;
  obj.x_star = std::move(x_star);

  switch (kind) {
    case ObjectiveKind::quadratic:
    case ObjectiveKind::singular_quadratic: {
      const auto& ev = params.eigenvalues;
      require_dimension(dimension, ev.size());
      for (double v : ev) {
        if (!(v >= 0.0) || !std::isfinite(v))
          throw InvalidArgument("eigenvalues must be finite and nonnegative");
      }
      const auto [lo, hi] = std::minmax_element(ev.begin(), ev.end());
      if (!(*hi > 0.0)) throw InvalidArgument("at least one eigenvalue must be positive");
      if (kind == ObjectiveKind::quadratic) {
        if (!(*lo > 0.0))
          throw InvalidArgument("quadratic kind requires a positive minimum eigenvalue");
        obj.alpha = *lo;
      } else {
        obj.alpha = 0.0;
      }
      obj.beta = *hi;
      break;
    }
    case ObjectiveKind::scaled_euclidean_norm:
      if (!(params.norm_scale > 0.0) || !std::isfinite(params.norm_scale))
        throw InvalidArgument("norm scale must be positive");
      obj.lipschitz_G = params.norm_scale;
      break;
    case ObjectiveKind::strongly_convex_plus_l1:
      if (!(params.strong_convexity > 0.0) || !std::isfinite(params.strong_convexity))
        throw InvalidArgument("strong convexity coefficient must be positive");
      if (!(params.l1_weight >= 0.0) || !std::isfinite(params.l1_weight))
        throw InvalidArgument("l1 weight must be nonnegative");
      obj.alpha = params.strong_convexity;
      break;
  }
  obj.params = std::move(params);
  return obj;
}

inline double evaluate(const ObjectiveSpec& obj, std::span<const double> x) {
  require_dimension(obj.dimension, x.size());
  const auto& xs = obj.x_star;
  switch (obj.kind) {
    case ObjectiveKind::quadratic:
    case ObjectiveKind::singular_quadratic: {
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double u = x[i] - xs[i];
        s += obj.params.eigenvalues[i] * u * u;
      }
      return 0.5 * s + obj.offset;
    }
    case ObjectiveKind::scaled_euclidean_norm:
      return obj.params.norm_scale * distance(x, xs) + obj.offset;
    case ObjectiveKind::strongly_convex_plus_l1: {
      double sq = 0.0;
      double l1 = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double u = x[i] - xs[i];
        sq += u * u;
        l1 += std::abs(u);
      }
      return 0.5 * obj.params.strong_convexity * sq + obj.params.l1_weight * l1 +
             obj.offset;
    }
  }
  return 0.0;
}

/// A (sub)gradient. At kinks the zero element of the subdifferential is
/// chosen, per coordinate for the l1 term.
inline Point gradient(const ObjectiveSpec& obj, std::span<const double> x) {
  require_dimension(obj.dimension, x.size());
  const auto& xs = obj.x_star;
  Point g(x.size(), 0.0);
  switch (obj.kind) {
    case ObjectiveKind::quadratic:
    case ObjectiveKind::singular_quadratic:
      for (std::size_t i = 0; i < x.size(); ++i)
        g[i] = obj.params.eigenvalues[i] * (x[i] - xs[i]);
      break;
    case ObjectiveKind::scaled_euclidean_norm: {
      const double r = distance(x, xs);
      if (r > 0.0) {
        const double c = obj.params.norm_scale / r;
        for (std::size_t i = 0; i < x.size(); ++i) g[i] = c * (x[i] - xs[i]);
      }
      break;
    }
    case ObjectiveKind::strongly_convex_plus_l1:
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double u = x[i] - xs[i];
        const double sign = u > 0.0 ? 1.0 : (u < 0.0 ? -1.0 : 0.0);
        g[i] = obj.params.strong_convexity * u + obj.params.l1_weight * sign;
      }
      break;
  }
  return g;
}

inline double suboptimality(const ObjectiveSpec& obj, std::span<const double> x) {
  const double h = evaluate(obj, x) - obj.f_star;
  if (h < -kSuboptimalityClamp)
    throw InvalidArgument("invalid f_star metadata: f(x) - f_star = " + std::to_string(h));
  return h < 0.0 ? 0.0 : h;
}

inline double distance_to_opt(const ObjectiveSpec& obj, std::span<const double> x) {
  require_dimension(obj.dimension, x.size());
  return distance(x, obj.x_star);
}

/// Max over coordinates of |analytic − central difference| / max(1, |analytic|).
inline double check_gradient_fd(const ObjectiveSpec& obj, std::span<const double> x,
                                double step) {
  require_dimension(obj.dimension, x.size());
  if (!(step > 0.0)) throw InvalidArgument("finite-difference step must be positive");
  const double margin = 10.0 * step;
  if (obj.kind == ObjectiveKind::scaled_euclidean_norm &&
      distance(x, obj.x_star) < margin)
    throw InvalidArgument("nondifferentiable point");
  if (obj.kind == ObjectiveKind::strongly_convex_plus_l1 && obj.params.l1_weight > 0.0) {
    for (std::size_t i = 0; i < x.size(); ++i)
      if (std::abs(x[i] - obj.x_star[i]) < margin)
        throw InvalidArgument("nondifferentiable point");
  }

  const Point g = gradient(obj, x);
  Point probe(x.begin(), x.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + step;
    const double up = evaluate(obj, probe);
    probe[i] = x[i] - step;
    const double down = evaluate(obj, probe);
    probe[i] = x[i];
    const double numeric = (up - down) / (2.0 * step);
    worst = std::max(worst, std::abs(g[i] - numeric) / std::max(1.0, std::abs(g[i])));
  }
  return worst;
}

/// Binds a run's start point. For singular quadratics the minimizer set is
/// affine; x_star becomes the orthogonal projection of x0 onto it. Other
/// kinds are returned unchanged.
inline ObjectiveSpec bind_start(ObjectiveSpec obj, std::span<const double> x0) {
  require_dimension(obj.dimension, x0.size());
  if (obj.kind == ObjectiveKind::singular_quadratic) {
    for (std::size_t i = 0; i < x0.size(); ++i)
      if (obj.params.eigenvalues[i] == 0.0) obj.x_star[i] = x0[i];
  }
  return obj;
}

/// The objective c·f, with every piece of metadata rescaled.
inline ObjectiveSpec scaled(const ObjectiveSpec& obj, double c) {
  if (!(c > 0.0)) throw InvalidArgument("scale factor must be positive");
  ObjectiveParams p = obj.params;
  for (double& v : p.eigenvalues) v *= c;
  p.norm_scale *= c;
  p.strong_convexity *= c;
  p.l1_weight *= c;
  return make_objective(obj.kind, obj.dimension, std::move(p), obj.x_star, c * obj.offset);
}

/// The objective x ↦ f(x − shift).
inline ObjectiveSpec translated(const ObjectiveSpec& obj, std::span<const double> shift) {
  require_dimension(obj.dimension, shift.size());
  ObjectiveSpec out = obj;
  for (std::size_t i = 0; i < shift.size(); ++i) out.x_star[i] += shift[i];
  return out;
}

/// Gradient norm bound valid on the ball ‖x − x*‖ ≤ radius. Kinds with
/// globally unbounded gradients get a ball-restricted bound; the norm kind
/// reports its global constant.
inline double gradient_bound_on_ball(const ObjectiveSpec& obj, double radius) {
  if (obj.lipschitz_G) return *obj.lipschitz_G;
  switch (obj.kind) {
    case ObjectiveKind::quadratic:
    case ObjectiveKind::singular_quadratic:
      return *obj.beta * radius;
    case ObjectiveKind::strongly_convex_plus_l1:
      return obj.params.strong_convexity * radius +
             obj.params.l1_weight * std::sqrt(static_cast<double>(obj.dimension));
    case ObjectiveKind::scaled_euclidean_norm:
      break;
  }
  return obj.params.norm_scale;
}

}  // namespace polyak
