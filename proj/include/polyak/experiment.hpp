#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "polyak/bounds.hpp"
#include "polyak/config.hpp"
#include "polyak/error.hpp"
#include "polyak/objectives.hpp"
#include "polyak/optimizer.hpp"
#include "polyak/rng.hpp"
#include "polyak/schedules.hpp"

namespace polyak {

/// A configuration with every random draw and default filled in.
struct ResolvedExperiment {
  ObjectiveSpec objective;
  Point x0;
  ScheduleRule schedule;
  double d0 = 0.0;
  double G = 0.0;  // gradient bound on the ball of radius d0 around x*
};

/// Default parameters for a schedule given the objective and start point.
inline ScheduleRule default_schedule(const ScheduleDescriptor& s, const ObjectiveSpec& obj,
                                     double d0, double G, long T) {
  if (s.name == "polyak") return PolyakExact{s.f_star.value_or(obj.f_star)};
  if (s.name == "polyak-lb") {
    if (!s.f_tilde) throw ConfigError("schedule.f_tilde: missing f_tilde");
    return PolyakLowerBound{*s.f_tilde};
  }
  if (s.name == "constant") {
    if (s.eta) return Constant{*s.eta};
    if (!obj.beta) throw ConfigError("schedule.eta: required for nonsmooth objectives");
    return Constant{1.0 / *obj.beta};
  }
  if (s.name == "inv-t") {
    if (s.alpha) return InverseT{*s.alpha};
    if (!(obj.alpha > 0.0)) throw ConfigError("schedule.alpha: required when the objective is not strongly convex");
    return InverseT{obj.alpha};
  }
  if (s.name == "inv-sqrt-t") {
    if (s.scale) return InverseSqrtT{*s.scale};
    if (!(d0 > 0.0 && G > 0.0)) throw ConfigError("schedule.scale: cannot default when d0 or G is zero");
    return InverseSqrtT{d0 / (G * std::sqrt(static_cast<double>(T)))};
  }
  throw ConfigError("schedule.name: unknown schedule '" + s.name + "'");
}

/// Draw order from the seeded generator: x* (if seeded), then x0 (if
/// seeded). Audit samples are drawn afterwards by run_experiment.
inline ResolvedExperiment resolve(const ExperimentConfig& cfg, Rng& rng) {
  const auto& od = cfg.objective;
  Point x_star;
  if (od.x_star) {
    x_star = *od.x_star;
  } else {
    x_star.assign(od.dimension, 0.0);
    if (od.x_star_radius > 0.0) x_star = rng.in_ball(x_star, od.x_star_radius);
  }
  ObjectiveParams params;
  params.eigenvalues = od.eigenvalues;
  params.norm_scale = od.norm_scale;
  params.strong_convexity = od.strong_convexity;
  params.l1_weight = od.l1_weight;

  ResolvedExperiment out;
  try {
    out.objective = make_objective(od.kind, od.dimension, std::move(params), x_star, od.offset);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("objective: ") + e.what());
  }
  out.x0 = cfg.start.x0 ? *cfg.start.x0 : rng.on_sphere(x_star, cfg.start.radius);
  out.objective = bind_start(std::move(out.objective), out.x0);
  out.d0 = distance_to_opt(out.objective, out.x0);
  out.G = gradient_bound_on_ball(out.objective, out.d0);
  if (cfg.adaptive) {
    out.schedule = PolyakLowerBound{cfg.adaptive->f_tilde0};
  } else {
    out.schedule = default_schedule(cfg.schedule, out.objective, out.d0, out.G, cfg.T);
  }
  try {
    validate(out.schedule);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("schedule: ") + e.what());
  }
  return out;
}

struct AuditSummary {
  std::string name;
  bool applicable = true;
  bool passed = true;
  std::size_t violation_count = 0;
  std::vector<Violation> first_violations;  // at most 10
  std::string note;
};

struct BoundSummary {
  std::string name;  // "R_T_gamma" or "B_T"
  double gamma = 1.0;
  BoundReport report;
  Compliance compliance;
  bool asserted = false;  // whether compliance counts toward the verdict
};

struct RunSummary {
  double best_value = 0.0;
  long best_index = 0;
  long steps_taken = 0;
  bool stopped_early = false;
  double min_h = 0.0;
  double max_grad_norm = 0.0;
};

struct AdaptiveSummary {
  long K = 0;
  double target = 0.0;
  long best_epoch = 0;
  std::vector<double> f_tildes;
  std::vector<long> epoch_steps;
  std::vector<long> epoch_condition_failures;
  std::optional<LowerBoundViolation> violation;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::string schedule;
  double f_star = 0.0;
  double d0 = 0.0;
  double G = 0.0;
  RunSummary run;
  std::optional<AdaptiveSummary> adaptive;
  std::vector<BoundSummary> bounds;
  std::vector<AuditSummary> audits;
  double wall_seconds = 0.0;
  /// Trajectory emitted to CSV; for adaptive runs, the epoch holding the best point.
  RunResult trajectory_run;

  bool passed() const {
    for (const auto& a : audits)
      if (a.applicable && !a.passed) return false;
    for (const auto& b : bounds)
      if (b.asserted && !b.compliance.pass) return false;
    return true;
  }
};

namespace detail {

inline AuditSummary summarize(std::string name, const std::vector<Violation>& v,
                              std::string note = {}) {
  AuditSummary a;
  a.name = std::move(name);
  a.violation_count = v.size();
  a.passed = v.empty();
  a.first_violations.assign(v.begin(), v.begin() + static_cast<long>(std::min<std::size_t>(v.size(), 10)));
  a.note = std::move(note);
  return a;
}

inline AuditSummary not_applicable(std::string name, std::string note) {
  AuditSummary a;
  a.name = std::move(name);
  a.applicable = false;
  a.note = std::move(note);
  return a;
}

inline void append(std::vector<Violation>& into, const std::vector<Violation>& from) {
  into.insert(into.end(), from.begin(), from.end());
}

inline double max_grad_norm(const RunResult& run) {
  double m = 0.0;
  for (const auto& r : run.trajectory) m = std::max(m, std::sqrt(r.grad_sq_norm));
  return m;
}

}  // namespace detail

/// Runs the configured experiment and audits it. Writes nothing.
inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  const auto started = std::chrono::steady_clock::now();
  Rng rng(cfg.seed);
  const ResolvedExperiment ex = resolve(cfg, rng);
  const ObjectiveSpec& obj = ex.objective;

  ExperimentReport rep;
  rep.config = cfg;
  rep.schedule = std::string(schedule_name(ex.schedule));
  rep.f_star = obj.f_star;
  rep.d0 = ex.d0;
  rep.G = ex.G;

  const auto bound_params = [&](double gamma) {
    return BoundParams{ex.G, ex.d0, obj.alpha, obj.beta, cfg.T, gamma};
  };

  // Runs whose steps satisfy the descent condition, paired with their γ.
  std::vector<std::pair<const RunResult*, double>> audited;
  std::vector<const RunResult*> all_runs;
  AdaptiveResult adaptive;

  if (cfg.adaptive) {
    const auto& ad = *cfg.adaptive;
    AdaptiveSummary sum;
    sum.target = ad.target.value_or(r_t_gamma(bound_params(0.5)).bound_value);
    const double gap = obj.f_star - ad.f_tilde0;
    if (ad.K) {
      sum.K = *ad.K;
    } else if (gap > 0.0 && sum.target > 0.0) {
      sum.K = epochs_for_gap(gap, sum.target);
    } else {
      sum.K = 1;
    }
    adaptive = adaptive_polyak(obj, ex.x0, cfg.T, sum.K, ad.f_tilde0, cfg.record_points);
    sum.best_epoch = adaptive.best_epoch;
    sum.f_tildes = adaptive.f_tildes;
    sum.violation = adaptive.violation;
    for (const auto& e : adaptive.epochs) {
      sum.epoch_steps.push_back(e.run.steps_taken);
      sum.epoch_condition_failures.push_back(e.condition_failures);
      all_runs.push_back(&e.run);
      if (e.condition_failures == 0 && e.f_tilde <= obj.f_star) audited.emplace_back(&e.run, 0.5);
    }
    rep.run.best_value = adaptive.best_value;
    rep.run.best_index = adaptive.best_index;
    rep.run.steps_taken = adaptive.steps_taken;
    rep.run.stopped_early = adaptive.stopped_early;
    rep.trajectory_run = adaptive.epochs[static_cast<std::size_t>(adaptive.best_epoch)].run;
    rep.adaptive = sum;
  } else {
    RunConfig rc{cfg.T, ex.schedule, ex.x0, cfg.record_points};
    rep.trajectory_run = run_gd(obj, rc);
    rep.run.best_value = rep.trajectory_run.best_value;
    rep.run.best_index = rep.trajectory_run.best_index;
    rep.run.steps_taken = rep.trajectory_run.steps_taken;
    rep.run.stopped_early = rep.trajectory_run.stopped_early;
    all_runs.push_back(&rep.trajectory_run);
  }
  rep.run.min_h = suboptimality(obj, rep.trajectory_run.best_point);
  for (const RunResult* r : all_runs)
    rep.run.max_grad_norm = std::max(rep.run.max_grad_norm, detail::max_grad_norm(*r));

  // The one-step distance recursion holds for any step size.
  {
    std::vector<Violation> v;
    for (const RunResult* r : all_runs) detail::append(v, check_lemma1(r->trajectory));
    rep.audits.push_back(detail::summarize("lemma1", v));
  }

  // Descent condition and which bound is asserted.
  const bool exact = std::holds_alternative<PolyakExact>(ex.schedule) && !cfg.adaptive;
  const bool exact_with_true_f_star =
      exact && std::get<PolyakExact>(ex.schedule).f_star == obj.f_star;
  std::optional<double> bound_gamma;
  if (exact_with_true_f_star) {
    audited.emplace_back(&rep.trajectory_run, 1.0);
    bound_gamma = 1.0;
  } else if (!cfg.adaptive && std::holds_alternative<PolyakLowerBound>(ex.schedule)) {
    const auto audit = check_descent_condition(rep.trajectory_run.trajectory, 0.5);
    if (audit.condition_failures.empty()) {
      audited.emplace_back(&rep.trajectory_run, 0.5);
      bound_gamma = 0.5;
    }
  }

  if (is_polyak(ex.schedule)) {
    std::vector<Violation> v;
    std::size_t failures = 0;
    for (const auto& [run, gamma] : audited) {
      const auto audit = check_descent_condition(run->trajectory, gamma);
      detail::append(v, audit.violations);
      failures += audit.condition_failures.size();
    }
    if (cfg.adaptive) {
      for (const auto& e : adaptive.epochs)
        if (e.condition_failures > 0) {
          const auto audit = check_descent_condition(e.run.trajectory, 0.5);
          detail::append(v, audit.violations);
          failures += audit.condition_failures.size();
        }
    } else if (!bound_gamma && !exact) {
      const auto audit = check_descent_condition(rep.trajectory_run.trajectory, 0.5);
      detail::append(v, audit.violations);
      failures += audit.condition_failures.size();
    }
    rep.audits.push_back(detail::summarize(
        "descent_condition", v,
        "steps where eta_t > h_t/|grad_t|^2 (lower bound refinement certified): " +
            std::to_string(failures)));
  } else {
    rep.audits.push_back(detail::not_applicable("descent_condition", "baseline schedule"));
  }

  // a-sequence and geometric contraction need the descent condition at every step.
  if (obj.strongly_convex() && ex.G > 0.0 && !audited.empty()) {
    std::vector<Violation> v;
    double alt = 0.0;
    for (const auto& [run, gamma] : audited) {
      const auto audit = check_a_sequence(run->trajectory, obj.alpha, ex.G, gamma);
      detail::append(v, audit.violations);
      alt = audit.a0_alternative_constant;
    }
    std::string note = "a_t = gamma*alpha^2*d_t^2/(4G^2); a_0 under gamma*4*alpha^2*d_0^2/G^2 = ";
    note += std::to_string(alt);
    rep.audits.push_back(detail::summarize("a_sequence", v, note));
  } else {
    rep.audits.push_back(detail::not_applicable(
        "a_sequence", "requires alpha > 0, G > 0 and a Polyak run satisfying the descent condition"));
  }
  if (obj.strongly_convex() && obj.smooth() && !audited.empty()) {
    std::vector<Violation> v;
    for (const auto& [run, gamma] : audited)
      detail::append(v, check_geometric_contraction(run->trajectory, obj.alpha, *obj.beta, gamma));
    rep.audits.push_back(detail::summarize("geometric_contraction", v,
                                           "d_{t+1}^2 <= d_t^2 (1 - gamma alpha/beta)"));
  } else {
    rep.audits.push_back(detail::not_applicable("geometric_contraction",
                                                "requires a well-conditioned objective and a Polyak run satisfying the descent condition"));
  }

  // The gradient bound G must hold along every audited run for the G terms to apply.
  if (!audited.empty()) {
    std::vector<Violation> v;
    for (const auto& [run, gamma] : audited)
      for (const auto& rec : run->trajectory) {
        const double g = std::sqrt(rec.grad_sq_norm);
        if (!holds_within_slack(g, ex.G, ex.G)) v.push_back({rec.t, "gradient_bound", g, ex.G});
      }
    rep.audits.push_back(detail::summarize("gradient_bound", v));
  } else {
    rep.audits.push_back(detail::not_applicable("gradient_bound", "no audited Polyak run"));
  }

  // Elementary properties at seeded points around x*.
  {
    const double radius = std::max(ex.d0, 1.0);
    const auto samples = sample_ball(rng, obj.x_star, radius, cfg.audit_samples);
    const auto audit = check_elementary_properties(obj, samples);
    std::string note = "checked:";
    for (auto f : audit.checked) note += " " + std::string(to_string(f));
    if (!audit.not_applicable.empty()) {
      note += "; not-applicable:";
      for (auto f : audit.not_applicable) note += " " + std::string(to_string(f));
    }
    rep.audits.push_back(detail::summarize("elementary_properties", audit.violations, note));
  }

  // Bounds.
  if (cfg.adaptive) {
    BoundSummary r{"R_T_gamma", 0.5, r_t_gamma(bound_params(0.5)), {}, false};
    const double achieved = rep.run.best_value - obj.f_star;
    r.compliance = check_compliance(achieved, 2.0 * r.report.bound_value);
    const double gap = obj.f_star - cfg.adaptive->f_tilde0;
    r.asserted = gap <= 0.0 || rep.adaptive->K >= epochs_for_gap(gap, r.report.bound_value);
    rep.bounds.push_back(r);
    BoundSummary b{"B_T", 1.0, b_t(bound_params(1.0)), {}, false};
    b.compliance = check_compliance(achieved, 2.0 * b.report.bound_value);
    rep.bounds.push_back(b);
  } else {
    const double g = bound_gamma.value_or(1.0);
    BoundSummary r{"R_T_gamma", g, r_t_gamma(bound_params(g)), {}, bound_gamma.has_value()};
    r.compliance = check_compliance(rep.run.min_h, r.report.bound_value);
    rep.bounds.push_back(r);
    BoundSummary b{"B_T", 1.0, b_t(bound_params(1.0)), {}, false};
    b.compliance = check_compliance(rep.run.min_h, b.report.bound_value);
    rep.bounds.push_back(b);
  }

  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return rep;
}

}  // namespace polyak
