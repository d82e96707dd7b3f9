#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "polyak/error.hpp"
#include "polyak/objectives.hpp"
#include "polyak/schedules.hpp"
#include "polyak/vector_ops.hpp"

namespace polyak {

struct RunConfig {
  long T = 1;
  ScheduleRule schedule = PolyakExact{};
  Point x0;
  bool record_points = false;
};

/// One row of a trajectory. The final record carries eta = 0 (no step taken).
struct TrajectoryRecord {
  long t = 0;
  double f = 0.0;
  std::optional<double> h;
  std::optional<double> d;
  double grad_sq_norm = 0.0;
  double eta = 0.0;
};

struct RunResult {
  Point best_point;
  double best_value = std::numeric_limits<double>::infinity();
  long best_index = 0;
  std::vector<TrajectoryRecord> trajectory;
  std::vector<Point> points;  // parallel to trajectory when record_points is set
  long steps_taken = 0;
  bool stopped_early = false;
};

/// x − η·∇ with no projection.
inline Point gd_step(std::span<const double> x, std::span<const double> grad, double eta) {
  require_dimension(x.size(), grad.size());
  if (!(eta >= 0.0) || !std::isfinite(eta))
    throw InvalidArgument("step size must be finite and nonnegative");
  Point out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - eta * grad[i];
  return out;
}

namespace detail {

struct RunOutcome {
  RunResult result;
  std::optional<ScheduleError> error;
};

/// Runs the loop and returns everything recorded up to a schedule failure
/// instead of throwing it.
inline RunOutcome run_gd_collect(const ObjectiveSpec& objective, const RunConfig& config) {
  if (config.T < 1) throw InvalidArgument("T must be >= 1");
  require_dimension(objective.dimension, config.x0.size());
  validate(config.schedule);

  RunOutcome out;
  RunResult& res = out.result;
  res.trajectory.reserve(static_cast<std::size_t>(config.T) + 1);

  Point x = config.x0;
  auto observe = [&](long t, double f, double gsn) -> TrajectoryRecord& {
    TrajectoryRecord rec;
    rec.t = t;
    rec.f = f;
    rec.h = suboptimality(objective, x);
    rec.d = distance_to_opt(objective, x);
    rec.grad_sq_norm = gsn;
    res.trajectory.push_back(rec);
    if (config.record_points) res.points.push_back(x);
    if (f < res.best_value) {
      res.best_value = f;
      res.best_index = t;
      res.best_point = x;
    }
    return res.trajectory.back();
  };

  for (long t = 0; t < config.T; ++t) {
    const double f = evaluate(objective, x);
    const Point g = gradient(objective, x);
    const double gsn = squared_norm(g);
    TrajectoryRecord& rec = observe(t, f, gsn);

    StepDecision decision;
    try {
      decision = step_size(config.schedule, t, f, gsn);
    } catch (const ScheduleError& e) {
      out.error = ScheduleError(e.reason(), t);
      return out;
    }
    if (std::holds_alternative<Converged>(decision)) {
      res.stopped_early = true;
      return out;
    }
    const double eta = std::get<Step>(decision).eta;
    rec.eta = eta;
    x = gd_step(x, g, eta);
    ++res.steps_taken;
  }

  const double f = evaluate(objective, x);
  const double gsn = squared_norm(gradient(objective, x));
  observe(config.T, f, gsn);
  return out;
}

}  // namespace detail

/// Gradient descent x_{t+1} = x_t − η_t ∇f(x_t) for t < T. The best iterate
/// is chosen among x_0..x_T. Stops early when the gradient vanishes.
inline RunResult run_gd(const ObjectiveSpec& objective, const RunConfig& config) {
  auto outcome = detail::run_gd_collect(objective, config);
  if (outcome.error) throw *outcome.error;
  return std::move(outcome.result);
}

struct AdaptiveEpoch {
  double f_tilde = 0.0;
  RunResult run;
  /// Steps where η_t > h_t/‖∇_t‖², i.e. f* − f̃ > h_t. Any such step
  /// certifies that the refined bound is still below f*.
  long condition_failures = 0;
  bool aborted = false;
};

struct LowerBoundViolation {
  long epoch = 0;
  long iteration = 0;
  std::string message;
};

struct AdaptiveResult {
  Point best_point;
  double best_value = std::numeric_limits<double>::infinity();
  long best_epoch = 0;
  long best_index = 0;
  long steps_taken = 0;
  bool stopped_early = false;
  std::vector<AdaptiveEpoch> epochs;
  /// f̃_0, f̃_1, ...; one more entry than completed epochs.
  std::vector<double> f_tildes;
  std::optional<LowerBoundViolation> violation;

  double final_f_tilde() const { return f_tildes.back(); }
};

/// Restarted lower-bound Polyak. Each epoch runs T steps from the same x0
/// with the current f̃_k, then sets f̃_{k+1} = (f(x̄_k) + f̃_k) / 2.
/// Returns the best point over all epochs. A lower-bound violation inside an
/// epoch ends the run and is reported in `violation`.
inline AdaptiveResult adaptive_polyak(const ObjectiveSpec& objective, const Point& x0, long T,
                                      long K, double f_tilde_0, bool record_points = false) {
  if (K < 1) throw InvalidArgument("K must be >= 1");
  if (!std::isfinite(f_tilde_0)) throw InvalidArgument("f_tilde_0 must be finite");

  AdaptiveResult out;
  out.f_tildes.push_back(f_tilde_0);
  double f_tilde = f_tilde_0;

  for (long k = 0; k < K; ++k) {
    RunConfig cfg{T, PolyakLowerBound{f_tilde}, x0, record_points};
    auto outcome = detail::run_gd_collect(objective, cfg);

    AdaptiveEpoch epoch;
    epoch.f_tilde = f_tilde;
    epoch.run = std::move(outcome.result);
    epoch.aborted = outcome.error.has_value();
    for (const auto& rec : epoch.run.trajectory) {
      if (rec.eta > 0.0 && rec.h && rec.eta * rec.grad_sq_norm > *rec.h) ++epoch.condition_failures;
    }

    out.steps_taken += epoch.run.steps_taken;
    if (epoch.run.best_value < out.best_value) {
      out.best_value = epoch.run.best_value;
      out.best_point = epoch.run.best_point;
      out.best_epoch = k;
      out.best_index = epoch.run.best_index;
    }
    const bool converged = epoch.run.stopped_early;
    const double epoch_best = epoch.run.best_value;
    out.epochs.push_back(std::move(epoch));

    if (outcome.error) {
      out.violation = LowerBoundViolation{k, outcome.error->iteration(), outcome.error->reason()};
      break;
    }
    f_tilde = 0.5 * (epoch_best + f_tilde);
    out.f_tildes.push_back(f_tilde);
    if (converged) {
      out.stopped_early = true;
      break;
    }
  }
  return out;
}

/// ceil(log₂(initial_gap / target)), at least 1.
inline long epochs_for_gap(double initial_gap, double target) {
  if (!(initial_gap > 0.0) || !(target > 0.0))
    throw InvalidArgument("gap and target must be positive");
  const double k = std::ceil(std::log2(initial_gap / target));
  return k < 1.0 ? 1L : static_cast<long>(k);
}

}  // namespace polyak
