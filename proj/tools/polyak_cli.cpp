// polyak — run, compare and audit gradient descent with Polyak step sizes.
//
// Exit codes: 0 success, 1 audit or compliance failure, 2 usage or config error.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polyak/polyak.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw polyak::ConfigError("cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct ConfigOptions {
  std::string path;
  std::vector<std::string> overrides;
  std::string out_dir;
  std::string format;
  bool svg = false;
  long T = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string schedule;
};

void add_config_options(CLI::App* cmd, ConfigOptions& o) {
  cmd->add_option("config", o.path, "Experiment config file")->required();
  cmd->add_option("--set", o.overrides, "Override a config value: section.key=value");
  cmd->add_option("--out", o.out_dir, "Output directory");
  cmd->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "text", "both"}));
  cmd->add_flag("--svg", o.svg, "Also write trajectory.svg");
  cmd->add_option("--T", o.T, "Horizon (overrides run.T)");
  cmd->add_option("--seed", o.seed, "Random seed (overrides run.seed)")
      ->each([&o](const std::string&) { o.seed_set = true; });
  cmd->add_option("--schedule", o.schedule, "Schedule name (overrides schedule.name)");
}

polyak::ExperimentConfig load_config(const ConfigOptions& o) {
  std::vector<std::string> overrides = o.overrides;
  if (o.T != 0) overrides.push_back("run.T=" + std::to_string(o.T));
  if (o.seed_set) overrides.push_back("run.seed=" + std::to_string(o.seed));
  if (!o.schedule.empty()) overrides.push_back("schedule.name=" + o.schedule);
  if (!o.out_dir.empty()) overrides.push_back("output.dir=" + o.out_dir);
  if (!o.format.empty()) overrides.push_back("output.format=" + o.format);
  if (o.svg) overrides.push_back("output.svg=true");
  return polyak::parse_config(read_file(o.path), overrides);
}

int cmd_run(const ConfigOptions& o) {
  const auto cfg = load_config(o);
  const auto report = polyak::run_experiment(cfg);
  polyak::write_report_text(std::cout, report);
  if (!cfg.output.dir.empty()) polyak::write_outputs(report, cfg.output.dir);
  return report.passed() ? kExitOk : kExitFailed;
}

int cmd_compare(const ConfigOptions& o, const std::vector<std::string>& schedules,
                std::optional<double> f_tilde) {
  const auto base = load_config(o);
  if (base.adaptive) throw polyak::ConfigError("compare does not support adaptive configs");
  std::vector<polyak::NamedConfig> runs;
  for (const auto& name : schedules) {
    if (std::find(polyak::kScheduleNames.begin(), polyak::kScheduleNames.end(), name) ==
        polyak::kScheduleNames.end())
      throw polyak::ConfigError("unknown schedule '" + name + "'");
    auto cfg = base;
    cfg.schedule = polyak::ScheduleDescriptor{};
    cfg.schedule.name = name;
    if (name == base.schedule.name) cfg.schedule = base.schedule;
    if (name == "polyak-lb" && !cfg.schedule.f_tilde)
      cfg.schedule.f_tilde = f_tilde.value_or(base.objective.offset);
    if (!base.output.dir.empty())
      cfg.output.dir = (std::filesystem::path(base.output.dir) / name).string();
    runs.push_back({name, cfg});
  }
  const auto reports = polyak::run_all(runs);

  std::printf("%-12s %-24s %-24s %-8s %-8s %s\n", "schedule", "best_value", "min_h", "steps",
              "early", "verdict");
  bool ok = true;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    std::printf("%-12s %-24s %-24s %-8ld %-8s %s\n", runs[i].name.c_str(),
                polyak::format_double(r.run.best_value).c_str(),
                polyak::format_double(r.run.min_h).c_str(), r.run.steps_taken,
                r.run.stopped_early ? "yes" : "no", r.passed() ? "PASS" : "FAIL");
    ok = ok && r.passed();
    if (!r.config.output.dir.empty()) polyak::write_outputs(r, r.config.output.dir);
  }
  return ok ? kExitOk : kExitFailed;
}

int cmd_verify(const std::string& regime, std::uint64_t seed, const std::string& out_dir,
               bool verbose) {
  const auto configs = polyak::verify_configs(regime, seed);
  const auto reports = polyak::run_all(configs);
  bool ok = true;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    std::cout << (r.passed() ? "PASS " : "FAIL ") << configs[i].name << "  min_h="
              << polyak::format_double(r.run.min_h) << '\n';
    if (verbose || !r.passed()) polyak::write_report_text(std::cout, r);
    if (!out_dir.empty()) {
      auto name = configs[i].name;
      std::replace(name.begin(), name.end(), '/', '_');
      polyak::write_outputs(r, std::filesystem::path(out_dir) / name);
    }
    ok = ok && r.passed();
  }
  std::cout << (ok ? "verify: all checks passed" : "verify: FAILED") << '\n';
  return ok ? kExitOk : kExitFailed;
}

int cmd_bounds(double G, double d0, double alpha, const std::string& beta, long T, double gamma) {
  polyak::BoundParams p;
  p.G = G;
  p.d0 = d0;
  p.alpha = alpha;
  if (beta != "inf" && beta != "infinite") {
    const auto b = polyak::detail::Reader::parse_double(beta);
    if (!b) throw polyak::ConfigError("--beta: expected a number or 'inf'");
    p.beta = *b;
  }
  p.T = T;
  p.gamma = gamma;
  std::vector<polyak::BoundSummary> rows;
  rows.push_back({"R_T_gamma", gamma, polyak::r_t_gamma(p), {}, false});
  rows.push_back({"B_T", 1.0, polyak::b_t(p), {}, false});
  polyak::write_bound_table(std::cout, rows);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gradient descent with Polyak step sizes: runs, comparisons and bound audits"};
  app.require_subcommand(1);

  ConfigOptions run_opts;
  auto* run = app.add_subcommand("run", "Run one experiment from a config file");
  add_config_options(run, run_opts);

  ConfigOptions cmp_opts;
  std::vector<std::string> schedules;
  std::optional<double> cmp_f_tilde;
  auto* compare = app.add_subcommand("compare", "Run one config under several schedules");
  add_config_options(compare, cmp_opts);
  compare->add_option("--schedules", schedules, "Comma-separated schedule names")
      ->required()
      ->delimiter(',');
  compare->add_option("--f-tilde", cmp_f_tilde, "Lower bound for polyak-lb (default f*)");

  std::string regime = "all";
  std::uint64_t verify_seed = 42;
  std::string verify_out;
  bool verbose = false;
  auto* verify = app.add_subcommand("verify", "Run the built-in audit suite");
  verify->add_option("--regime", regime, "Regime to verify")
      ->check(CLI::IsMember({"all", "convex", "smooth", "strongly-convex", "well-conditioned"}));
  verify->add_option("--seed", verify_seed, "Random seed");
  verify->add_option("--out", verify_out, "Write per-experiment outputs here");
  verify->add_flag("-v,--verbose", verbose, "Print full reports");

  double G = 0, d0 = 0, alpha = 0, gamma = 1.0;
  std::string beta = "inf";
  long T = 1;
  auto* bounds = app.add_subcommand("bounds", "Print both bound tables");
  bounds->add_option("--G", G, "Gradient norm bound")->required();
  bounds->add_option("--d0", d0, "Initial distance to the optimum")->required();
  bounds->add_option("--alpha", alpha, "Strong convexity modulus (0 if none)");
  bounds->add_option("--beta", beta, "Smoothness modulus or 'inf'");
  bounds->add_option("--T", T, "Horizon")->required();
  bounds->add_option("--gamma", gamma, "Descent fraction in (0, 1]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*run) return cmd_run(run_opts);
    if (*compare) return cmd_compare(cmp_opts, schedules, cmp_f_tilde);
    if (*verify) return cmd_verify(regime, verify_seed, verify_out, verbose);
    if (*bounds) return cmd_bounds(G, d0, alpha, beta, T, gamma);
  } catch (const polyak::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const polyak::InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitUsage;
  } catch (const polyak::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
