#pragma once

// Built-in audit suite over the four regimes. Each regime contributes a few
// seeded experiments; the suite passes iff every experiment passes.

#include <cstddef>
#include <cstdint>
#include <future>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polyak/config.hpp"
#include "polyak/error.hpp"
#include "polyak/experiment.hpp"

namespace polyak {

inline const std::vector<std::string> kRegimes = {"convex", "smooth", "strongly-convex",
                                                  "well-conditioned"};

struct NamedConfig {
  std::string name;
  ExperimentConfig config;
};

namespace detail {

inline ExperimentConfig base_config(ObjectiveKind kind, std::size_t dim, long T,
                                    std::uint64_t seed) {
  ExperimentConfig c;
  c.objective.kind = kind;
  c.objective.dimension = dim;
  c.start.radius = 1.0;
  c.T = T;
  c.seed = seed;
  return c;
}

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = n == 1 ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

inline ExperimentConfig with_schedule(ExperimentConfig c, std::string name,
                                      std::optional<double> f_tilde = std::nullopt) {
  c.schedule.name = std::move(name);
  c.schedule.f_tilde = f_tilde;
  return c;
}

}  // namespace detail

/// Experiments for one regime ("all" for every regime).
inline std::vector<NamedConfig> verify_configs(std::string_view regime, std::uint64_t seed) {
  using detail::base_config;
  using detail::with_schedule;
  std::vector<NamedConfig> out;
  const bool all = regime == "all";
  bool known = all;

  if (all || regime == "convex") {
    known = true;
    auto c = base_config(ObjectiveKind::scaled_euclidean_norm, 10, 400, seed);
    c.objective.norm_scale = 1.0;
    out.push_back({"convex/norm/polyak", with_schedule(c, "polyak")});
    out.push_back({"convex/norm/polyak-lb", with_schedule(c, "polyak-lb", 0.0)});
  }
  if (all || regime == "smooth") {
    known = true;
    auto c = base_config(ObjectiveKind::singular_quadratic, 5, 100, seed);
    c.objective.eigenvalues = {0.0, 0.0, 1.0, 2.0, 4.0};
    out.push_back({"smooth/singular-quadratic/polyak", with_schedule(c, "polyak")});
    out.push_back({"smooth/singular-quadratic/polyak-lb", with_schedule(c, "polyak-lb", 0.0)});
  }
  if (all || regime == "strongly-convex") {
    known = true;
    auto q = base_config(ObjectiveKind::quadratic, 20, 1000, seed);
    q.objective.eigenvalues = detail::linspace(1.0, 10.0, 20);
    out.push_back({"strongly-convex/quadratic/polyak", with_schedule(q, "polyak")});
    out.push_back({"strongly-convex/quadratic/polyak-lb", with_schedule(q, "polyak-lb", 0.0)});

    auto l1 = base_config(ObjectiveKind::strongly_convex_plus_l1, 10, 1000, seed);
    l1.objective.strong_convexity = 1.0;
    l1.objective.l1_weight = 0.5;
    out.push_back({"strongly-convex/l1/polyak", with_schedule(l1, "polyak")});

    auto ad = base_config(ObjectiveKind::quadratic, 20, 500, seed);
    ad.objective.eigenvalues = detail::linspace(1.0, 10.0, 20);
    ad.objective.offset = 5.0;
    ad.schedule.name = "polyak-lb";
    ad.adaptive = AdaptiveDescriptor{std::nullopt, 0.0, std::nullopt};
    out.push_back({"strongly-convex/quadratic/adaptive", ad});
  }
  if (all || regime == "well-conditioned") {
    known = true;
    auto q = base_config(ObjectiveKind::quadratic, 20, 200, seed);
    q.objective.eigenvalues = detail::linspace(1.0, 10.0, 20);
    out.push_back({"well-conditioned/quadratic/polyak", with_schedule(q, "polyak")});
    out.push_back({"well-conditioned/quadratic/polyak-lb", with_schedule(q, "polyak-lb", 0.0)});
  }
  if (!known)
    throw ConfigError("unknown regime '" + std::string(regime) +
                      "' (expected all, convex, smooth, strongly-convex or well-conditioned)");
  return out;
}

/// Runs experiments concurrently; results keep the input order.
inline std::vector<ExperimentReport> run_all(const std::vector<NamedConfig>& configs) {
  std::vector<std::future<ExperimentReport>> futures;
  futures.reserve(configs.size());
  for (const auto& nc : configs)
    futures.push_back(std::async(std::launch::async, [&nc] { return run_experiment(nc.config); }));
  std::vector<ExperimentReport> reports;
  reports.reserve(configs.size());
  for (auto& f : futures) reports.push_back(f.get());
  return reports;
}

}  // namespace polyak
