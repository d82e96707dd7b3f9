#pragma once

// Closed-form convergence bounds and audits of the inequalities behind them.
//
// Two four-term bounds are evaluated (terms with unavailable moduli drop out):
//
//   B_T     = min{ G d0/√T,      β d0²/T,      2G²/(αT),     β d0² (1 − α/(2β))^T }
//   R_{T,γ} = min{ G d0/√(γT),   2β d0²/(γT),  G²/(γαT),     β d0² (1 − γα/β)^T }
//
// Exact Polyak runs satisfy min_t h_t ≤ R_{T,1}; lower-bound runs with a
// tight f̃ satisfy R_{T,1/2}. B_T is reported alongside, not enforced.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polyak/error.hpp"
#include "polyak/objectives.hpp"
#include "polyak/optimizer.hpp"
#include "polyak/vector_ops.hpp"

namespace polyak {

inline constexpr double kAbsoluteSlack = 1e-12;
inline constexpr double kRelativeSlack = 1e-9;

/// lhs ≤ rhs up to additive 1e-12 plus 1e-9 relative to `scale`.
inline bool holds_within_slack(double lhs, double rhs, double scale) {
  return lhs <= rhs + kAbsoluteSlack + kRelativeSlack * std::abs(scale);
}

struct BoundParams {
  double G = 0.0;
  double d0 = 0.0;
  double alpha = 0.0;          // 0: not strongly convex
  std::optional<double> beta;  // nullopt: nonsmooth
  long T = 1;
  double gamma = 1.0;
};

enum class BoundCase { convex, smooth, strongly_convex, well_conditioned };

inline std::string_view to_string(BoundCase c) {
  switch (c) {
    case BoundCase::convex: return "convex";
    case BoundCase::smooth: return "smooth";
    case BoundCase::strongly_convex: return "strongly_convex";
    case BoundCase::well_conditioned: return "well_conditioned";
  }
  return "unknown";
}

struct BoundReport {
  std::optional<double> term_convex;
  std::optional<double> term_smooth;
  std::optional<double> term_strongly_convex;
  std::optional<double> term_well_conditioned;
  double bound_value = 0.0;
  BoundCase active_case = BoundCase::convex;

  std::array<std::optional<double>, 4> terms() const {
    return {term_convex, term_smooth, term_strongly_convex, term_well_conditioned};
  }
};

namespace detail {

inline void validate_bound_params(const BoundParams& p) {
  if (p.T < 1) throw InvalidArgument("T must be >= 1");
  if (!(p.G >= 0.0) || !std::isfinite(p.G)) throw InvalidArgument("G must be finite and >= 0");
  if (!(p.d0 >= 0.0) || !std::isfinite(p.d0)) throw InvalidArgument("d0 must be finite and >= 0");
  if (!(p.alpha >= 0.0) || !std::isfinite(p.alpha)) throw InvalidArgument("alpha must be >= 0");
  if (p.beta && (!(*p.beta > 0.0) || !std::isfinite(*p.beta)))
    throw InvalidArgument("beta must be positive");
  if (p.beta && p.alpha > *p.beta) throw InvalidArgument("alpha must not exceed beta");
}

inline BoundReport finish(BoundReport r) {
  const auto terms = r.terms();
  bool found = false;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i] && (!found || *terms[i] < r.bound_value)) {
      r.bound_value = *terms[i];
      r.active_case = static_cast<BoundCase>(i);
      found = true;
    }
  }
  return r;
}

}  // namespace detail

inline BoundReport r_t_gamma(const BoundParams& p) {
  detail::validate_bound_params(p);
  if (!(p.gamma > 0.0 && p.gamma <= 1.0)) throw InvalidArgument("gamma must lie in (0, 1]");
  const double gT = p.gamma * static_cast<double>(p.T);
  BoundReport r;
  r.term_convex = p.G * p.d0 / std::sqrt(gT);
  if (p.beta) r.term_smooth = 2.0 * *p.beta * p.d0 * p.d0 / gT;
  if (p.alpha > 0.0) r.term_strongly_convex = p.G * p.G / (gT * p.alpha);
  if (p.beta && p.alpha > 0.0) {
    const double rate = std::max(0.0, 1.0 - p.gamma * p.alpha / *p.beta);
    r.term_well_conditioned =
        *p.beta * p.d0 * p.d0 * std::pow(rate, static_cast<double>(p.T));
  }
  return detail::finish(r);
}

/// Reference bound B_T: halved strong-convexity rates, no gamma factor (gamma is ignored).
inline BoundReport b_t(const BoundParams& p) {
  detail::validate_bound_params(p);
  const double T = static_cast<double>(p.T);
  BoundReport r;
  r.term_convex = p.G * p.d0 / std::sqrt(T);
  if (p.beta) r.term_smooth = *p.beta * p.d0 * p.d0 / T;
  if (p.alpha > 0.0) r.term_strongly_convex = 2.0 * p.G * p.G / (p.alpha * T);
  if (p.beta && p.alpha > 0.0) {
    const double rate = 1.0 - p.alpha / (2.0 * *p.beta);
    r.term_well_conditioned = *p.beta * p.d0 * p.d0 * std::pow(rate, T);
  }
  return detail::finish(r);
}

struct Compliance {
  double bound = 0.0;
  double achieved = 0.0;
  double margin = 0.0;  // bound − achieved
  bool pass = false;
};

inline Compliance check_compliance(double achieved, double bound) {
  return {bound, achieved, bound - achieved, holds_within_slack(achieved, bound, bound)};
}

/// Smallest suboptimality along a trajectory.
inline double min_suboptimality(std::span<const TrajectoryRecord> trajectory) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& rec : trajectory) {
    if (!rec.h) throw InvalidArgument("trajectory record lacks h");
    best = std::min(best, *rec.h);
  }
  return best;
}

struct Violation {
  long t = 0;
  std::string check;
  double lhs = 0.0;
  double rhs = 0.0;
};

namespace detail {

inline void require_audit_fields(const TrajectoryRecord& rec) {
  if (!rec.h || !rec.d) throw InvalidArgument("trajectory record lacks h or d");
}

/// Calls fn(current, next) for every record that was followed by a step.
template <typename Fn>
void for_each_step(std::span<const TrajectoryRecord> trajectory, Fn&& fn) {
  for (std::size_t i = 0; i + 1 < trajectory.size(); ++i) {
    require_audit_fields(trajectory[i]);
    require_audit_fields(trajectory[i + 1]);
    fn(trajectory[i], trajectory[i + 1]);
  }
}

}  // namespace detail

/// d_{t+1}² ≤ d_t² − 2η_t h_t + η_t² ‖∇_t‖², slack 1e-9·(1 + d_t²).
inline std::vector<Violation> check_lemma1(std::span<const TrajectoryRecord> trajectory) {
  std::vector<Violation> out;
  detail::for_each_step(trajectory, [&](const auto& cur, const auto& next) {
    const double d2 = *cur.d * *cur.d;
    const double lhs = *next.d * *next.d;
    const double rhs = d2 - 2.0 * cur.eta * *cur.h + cur.eta * cur.eta * cur.grad_sq_norm;
    if (!(lhs <= rhs + kRelativeSlack * (1.0 + d2)))
      out.push_back({cur.t, "lemma1", lhs, rhs});
  });
  return out;
}

struct DescentAudit {
  std::vector<Violation> violations;
  /// Steps with η_t > h_t/‖∇_t‖². The inequality is not checked there; such
  /// a step certifies that (f(x_t) + f̃)/2 ≤ f*.
  std::vector<long> condition_failures;

  bool passed() const { return violations.empty(); }
};

/// d_{t+1}² ≤ d_t² − γ h_t²/‖∇_t‖² on every step where η_t ≤ h_t/‖∇_t‖².
inline DescentAudit check_descent_condition(std::span<const TrajectoryRecord> trajectory,
                                            double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw InvalidArgument("gamma must lie in (0, 1]");
  DescentAudit audit;
  detail::for_each_step(trajectory, [&](const auto& cur, const auto& next) {
    if (cur.grad_sq_norm <= 0.0) return;
    const double h = *cur.h;
    if (cur.eta * cur.grad_sq_norm > h * (1.0 + 1e-12)) {
      audit.condition_failures.push_back(cur.t);
      return;
    }
    const double d2 = *cur.d * *cur.d;
    const double lhs = *next.d * *next.d;
    const double rhs = d2 - gamma * h * h / cur.grad_sq_norm;
    if (!holds_within_slack(lhs, rhs, d2)) audit.violations.push_back({cur.t, "descent", lhs, rhs});
  });
  return audit;
}

struct ASequenceAudit {
  std::vector<Violation> violations;
  std::vector<double> a;
  /// a_0 under the alternative constant γ·4α²d_0²/G², kept for reference.
  double a0_alternative_constant = 0.0;

  bool passed() const { return violations.empty(); }
};

/// a_t = γ α² d_t² / (4G²); checks a_t ≤ 1/(t+1) and a_{t+1} ≤ a_t (1 − a_t).
inline ASequenceAudit check_a_sequence(std::span<const TrajectoryRecord> trajectory,
                                       double alpha, double G, double gamma) {
  if (!(alpha > 0.0)) throw InvalidArgument("a-sequence audit requires alpha > 0");
  if (!(G > 0.0)) throw InvalidArgument("a-sequence audit requires G > 0");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw InvalidArgument("gamma must lie in (0, 1]");
  ASequenceAudit audit;
  const double c = gamma * alpha * alpha / (4.0 * G * G);
  for (const auto& rec : trajectory) {
    detail::require_audit_fields(rec);
    audit.a.push_back(c * *rec.d * *rec.d);
  }
  if (!trajectory.empty()) {
    const double d0 = *trajectory.front().d;
    audit.a0_alternative_constant = gamma * 4.0 * alpha * alpha * d0 * d0 / (G * G);
  }
  for (std::size_t i = 0; i < audit.a.size(); ++i) {
    const double t = static_cast<double>(trajectory[i].t);
    const double a = audit.a[i];
    if (!holds_within_slack(a, 1.0 / (t + 1.0), a))
      audit.violations.push_back({trajectory[i].t, "a_t <= 1/(t+1)", a, 1.0 / (t + 1.0)});
    if (i + 1 < audit.a.size()) {
      const double next = audit.a[i + 1];
      const double rhs = a * (1.0 - a);
      if (!holds_within_slack(next, rhs, a))
        audit.violations.push_back({trajectory[i].t, "a_{t+1} <= a_t(1-a_t)", next, rhs});
    }
  }
  return audit;
}

/// d_{t+1}² ≤ d_t² (1 − γα/β) on every step.
inline std::vector<Violation> check_geometric_contraction(
    std::span<const TrajectoryRecord> trajectory, double alpha, double beta, double gamma) {
  if (!(alpha > 0.0) || !(beta >= alpha)) throw InvalidArgument("requires 0 < alpha <= beta");
  std::vector<Violation> out;
  const double rate = 1.0 - gamma * alpha / beta;
  detail::for_each_step(trajectory, [&](const auto& cur, const auto& next) {
    const double d2 = *cur.d * *cur.d;
    const double lhs = *next.d * *next.d;
    if (!holds_within_slack(lhs, d2 * rate, d2))
      out.push_back({cur.t, "geometric_contraction", lhs, d2 * rate});
  });
  return out;
}

enum class PropertyFamily {
  strong_convexity_lower,   // (α/2) d² ≤ h
  smoothness_upper,         // h ≤ (β/2) d²
  gradient_lower,           // ‖∇‖²/(2β) ≤ h
  gradient_upper,           // h ≤ ‖∇‖²/(2α)
  distance_gradient_chain,  // ‖∇‖²/β² ≤ d² ≤ ‖∇‖²/α²
  subgradient,              // f(y) ≥ f(x) + ∇f(x)ᵀ(y − x)
};

inline constexpr std::array kAllPropertyFamilies = {
    PropertyFamily::strong_convexity_lower, PropertyFamily::smoothness_upper,
    PropertyFamily::gradient_lower,         PropertyFamily::gradient_upper,
    PropertyFamily::distance_gradient_chain, PropertyFamily::subgradient,
};

inline std::string_view to_string(PropertyFamily f) {
  switch (f) {
    case PropertyFamily::strong_convexity_lower: return "strong_convexity_lower";
    case PropertyFamily::smoothness_upper: return "smoothness_upper";
    case PropertyFamily::gradient_lower: return "gradient_lower";
    case PropertyFamily::gradient_upper: return "gradient_upper";
    case PropertyFamily::distance_gradient_chain: return "distance_gradient_chain";
    case PropertyFamily::subgradient: return "subgradient";
  }
  return "unknown";
}

inline bool applicable(PropertyFamily f, const ObjectiveSpec& obj) {
  switch (f) {
    case PropertyFamily::strong_convexity_lower:
    case PropertyFamily::gradient_upper: return obj.strongly_convex();
    case PropertyFamily::smoothness_upper:
    case PropertyFamily::gradient_lower: return obj.smooth();
    case PropertyFamily::distance_gradient_chain: return obj.smooth() && obj.strongly_convex();
    case PropertyFamily::subgradient: return true;
  }
  return false;
}

struct PropertyAudit {
  std::vector<Violation> violations;  // t is the sample index
  std::vector<PropertyFamily> checked;
  std::vector<PropertyFamily> not_applicable;
  std::size_t samples = 0;

  bool passed() const { return violations.empty(); }
};

/// Evaluates every applicable elementary inequality at each sample. The
/// subgradient inequality is checked on consecutive sample pairs (cyclic).
inline PropertyAudit check_elementary_properties(const ObjectiveSpec& obj,
                                                 std::span<const Point> samples) {
  PropertyAudit audit;
  audit.samples = samples.size();
  for (auto f : kAllPropertyFamilies)
    (applicable(f, obj) ? audit.checked : audit.not_applicable).push_back(f);

  const double a = obj.alpha;
  const double b = obj.beta.value_or(0.0);
  auto check = [&](std::size_t i, PropertyFamily fam, double lhs, double rhs) {
    if (!holds_within_slack(lhs, rhs, std::max(std::abs(lhs), std::abs(rhs))))
      audit.violations.push_back({static_cast<long>(i), std::string(to_string(fam)), lhs, rhs});
  };

  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Point& x = samples[i];
    const double fx = evaluate(obj, x);
    const double h = suboptimality(obj, x);
    const double d2 = std::pow(distance_to_opt(obj, x), 2);
    const Point g = gradient(obj, x);
    const double g2 = squared_norm(g);

    for (auto fam : audit.checked) {
      switch (fam) {
        case PropertyFamily::strong_convexity_lower: check(i, fam, 0.5 * a * d2, h); break;
        case PropertyFamily::smoothness_upper: check(i, fam, h, 0.5 * b * d2); break;
        case PropertyFamily::gradient_lower: check(i, fam, g2 / (2.0 * b), h); break;
        case PropertyFamily::gradient_upper: check(i, fam, h, g2 / (2.0 * a)); break;
        case PropertyFamily::distance_gradient_chain:
          check(i, fam, g2 / (b * b), d2);
          check(i, fam, d2, g2 / (a * a));
          break;
        case PropertyFamily::subgradient: {
          const Point& y = samples[(i + 1) % samples.size()];
          const double fy = evaluate(obj, y);
          const double linear = fx + dot(g, difference(y, x));
          if (!(fy >= linear - kRelativeSlack * (1.0 + std::abs(fy))))
            audit.violations.push_back({static_cast<long>(i), "subgradient", linear, fy});
          break;
        }
      }
    }
  }
  return audit;
}

}  // namespace polyak
