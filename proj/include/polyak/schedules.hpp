#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>

#include "polyak/error.hpp"

namespace polyak {

/// η_t = (f(x_t) − f*) / ‖∇_t‖²
struct PolyakExact {
  double f_star = 0.0;
};

/// η_t = (f(x_t) − f̃) / (2‖∇_t‖²), for a lower bound f̃ ≤ f*.
struct PolyakLowerBound {
  double f_tilde = 0.0;
};

struct Constant {
  double eta = 1.0;
};

/// η_t = 1 / (α (t + 1))
struct InverseT {
  double alpha = 1.0;
};

/// η_t = scale / √(t + 1)
struct InverseSqrtT {
  double scale = 1.0;
};

using ScheduleRule = std::variant<PolyakExact, PolyakLowerBound, Constant, InverseT, InverseSqrtT>;

struct Step {
  double eta;
};
struct Converged {};
using StepDecision = std::variant<Step, Converged>;

/// Squared gradient norms below this mean the iterate is numerically optimal.
inline constexpr double kConvergedGradSq = 1e-30;
/// Tolerated negative gap f(x_t) − f* (or − f̃) before a rule refuses to step.
inline constexpr double kNegativeGapTolerance = 1e-12;

inline std::string_view schedule_name(const ScheduleRule& rule) {
  return std::visit(
      [](const auto& r) -> std::string_view {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, PolyakExact>) return "polyak";
        else if constexpr (std::is_same_v<R, PolyakLowerBound>) return "polyak-lb";
        else if constexpr (std::is_same_v<R, Constant>) return "constant";
        else if constexpr (std::is_same_v<R, InverseT>) return "inv-t";
        else return "inv-sqrt-t";
      },
      rule);
}

inline bool is_polyak(const ScheduleRule& rule) {
  return std::holds_alternative<PolyakExact>(rule) ||
         std::holds_alternative<PolyakLowerBound>(rule);
}

/// Rejects baseline rules with nonpositive or nonfinite parameters.
inline void validate(const ScheduleRule& rule) {
  const auto positive = [](double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw InvalidArgument(std::string(what) + " must be positive");
  };
  std::visit(
      [&](const auto& r) {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, PolyakExact>) {
          if (!std::isfinite(r.f_star)) throw InvalidArgument("f_star must be finite");
        } else if constexpr (std::is_same_v<R, PolyakLowerBound>) {
          if (!std::isfinite(r.f_tilde)) throw InvalidArgument("f_tilde must be finite");
        } else if constexpr (std::is_same_v<R, Constant>) {
          positive(r.eta, "eta");
        } else if constexpr (std::is_same_v<R, InverseT>) {
          positive(r.alpha, "alpha");
        } else {
          positive(r.scale, "scale");
        }
      },
      rule);
}

inline StepDecision step_size(const ScheduleRule& rule, long t, double f_value,
                              double grad_sq_norm) {
  if (t < 0) throw InvalidArgument("iteration index must be nonnegative");
  if (!(grad_sq_norm >= 0.0))
    throw InvalidArgument("squared gradient norm must be nonnegative");
  if (grad_sq_norm < kConvergedGradSq) return Converged{};

  const double n = static_cast<double>(t) + 1.0;
  return std::visit(
      [&](const auto& r) -> StepDecision {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, PolyakExact>) {
          const double gap = f_value - r.f_star;
          if (gap < -kNegativeGapTolerance) throw ScheduleError("f_star is not a lower bound");
          return Step{std::max(gap, 0.0) / grad_sq_norm};
        } else if constexpr (std::is_same_v<R, PolyakLowerBound>) {
          const double gap = f_value - r.f_tilde;
          if (gap < -kNegativeGapTolerance)
            throw ScheduleError("f_tilde exceeds observed value");
          return Step{std::max(gap, 0.0) / (2.0 * grad_sq_norm)};
        } else if constexpr (std::is_same_v<R, Constant>) {
          return Step{r.eta};
        } else if constexpr (std::is_same_v<R, InverseT>) {
          return Step{1.0 / (r.alpha * n)};
        } else {
          return Step{r.scale / std::sqrt(n)};
        }
      },
      rule);
}

}  // namespace polyak
