#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "polyak/bounds.hpp"
#include "polyak/config.hpp"
#include "polyak/error.hpp"
#include "polyak/experiment.hpp"
#include "polyak/optimizer.hpp"

namespace polyak {

/// 17 significant digits, enough to parse back to the same double.
inline std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] =
      std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  if (ec != std::errc()) throw Error("failed to format double");
  return std::string(buf.data(), ptr);
}

namespace detail {

inline std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    std::error_code ec(errno, std::generic_category());
    throw Error("cannot open '" + path.string() + "' for writing: " + ec.message());
  }
  return out;
}

inline void finish_write(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error("write to '" + path.string() + "' failed");
}

}  // namespace detail

inline constexpr std::string_view kTrajectoryCsvHeader = "t,f,h,d,grad_sq_norm,eta";

inline void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRecord>& trajectory) {
  out << kTrajectoryCsvHeader << '\n';
  for (const auto& r : trajectory) {
    out << r.t << ',' << format_double(r.f) << ',' << (r.h ? format_double(*r.h) : "") << ','
        << (r.d ? format_double(*r.d) : "") << ',' << format_double(r.grad_sq_norm) << ','
        << format_double(r.eta) << '\n';
  }
}

inline void emit_trajectory_csv(const RunResult& result, const std::filesystem::path& path) {
  auto out = detail::open_for_write(path);
  write_trajectory_csv(out, result.trajectory);
  detail::finish_write(out, path);
}

inline std::vector<TrajectoryRecord> parse_trajectory_csv(std::string_view text) {
  std::vector<TrajectoryRecord> out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  auto field = [&](std::string_view s, std::size_t line) -> std::optional<double> {
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw Error("malformed number '" + std::string(s) + "' on line " + std::to_string(line));
    return v;
  };
  while (pos < text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line_no == 1) {
      if (line != kTrajectoryCsvHeader) throw Error("unexpected trajectory CSV header");
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string_view> cols;
    std::size_t c = 0;
    while (true) {
      const auto comma = line.find(',', c);
      cols.push_back(line.substr(c, comma == std::string_view::npos ? line.size() - c : comma - c));
      if (comma == std::string_view::npos) break;
      c = comma + 1;
    }
    if (cols.size() != 6) throw Error("expected 6 columns on line " + std::to_string(line_no));
    TrajectoryRecord r;
    long t = 0;
    const auto [ptr, ec] = std::from_chars(cols[0].data(), cols[0].data() + cols[0].size(), t);
    if (ec != std::errc() || ptr != cols[0].data() + cols[0].size())
      throw Error("malformed index on line " + std::to_string(line_no));
    r.t = t;
    r.f = field(cols[1], line_no).value_or(0.0);
    r.h = field(cols[2], line_no);
    r.d = field(cols[3], line_no);
    r.grad_sq_norm = field(cols[4], line_no).value_or(0.0);
    r.eta = field(cols[5], line_no).value_or(0.0);
    out.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON report

namespace detail {

inline nlohmann::json opt(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

inline nlohmann::json opt(const std::optional<Point>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

inline nlohmann::json config_json(const ExperimentConfig& c) {
  using nlohmann::json;
  const auto& o = c.objective;
  json j;
  j["objective"] = {{"kind", std::string(to_string(o.kind))},
                    {"dimension", o.dimension},
                    {"eigenvalues", o.eigenvalues},
                    {"scale", o.norm_scale},
                    {"alpha", o.strong_convexity},
                    {"l1_weight", o.l1_weight},
                    {"x_star", opt(o.x_star)},
                    {"x_star_radius", o.x_star_radius},
                    {"offset", o.offset}};
  j["start"] = {{"x0", opt(c.start.x0)}, {"radius", c.start.radius}};
  j["schedule"] = {{"name", c.schedule.name},   {"f_star", opt(c.schedule.f_star)},
                   {"f_tilde", opt(c.schedule.f_tilde)}, {"eta", opt(c.schedule.eta)},
                   {"alpha", opt(c.schedule.alpha)},     {"scale", opt(c.schedule.scale)}};
  j["run"] = {{"T", c.T},
              {"seed", c.seed},
              {"record_points", c.record_points},
              {"audit_samples", c.audit_samples}};
  if (c.adaptive) {
    j["adaptive"] = {{"K", c.adaptive->K ? json(*c.adaptive->K) : json("auto")},
                     {"f_tilde0", c.adaptive->f_tilde0},
                     {"target", c.adaptive->target ? json(*c.adaptive->target) : json("auto")}};
  } else {
    j["adaptive"] = nullptr;
  }
  j["output"] = {{"dir", c.output.dir},
                 {"format", c.output.format},
                 {"svg", c.output.svg},
                 {"timing", c.output.timing}};
  return j;
}

inline nlohmann::json violation_json(const Violation& v) {
  return {{"t", v.t}, {"check", v.check}, {"lhs", v.lhs}, {"rhs", v.rhs}};
}

}  // namespace detail

inline nlohmann::json bound_report_json(const BoundReport& r) {
  return {{"term_convex", detail::opt(r.term_convex)},
          {"term_smooth", detail::opt(r.term_smooth)},
          {"term_strongly_convex", detail::opt(r.term_strongly_convex)},
          {"term_well_conditioned", detail::opt(r.term_well_conditioned)},
          {"bound_value", r.bound_value},
          {"active_case", std::string(to_string(r.active_case))}};
}

inline nlohmann::json report_json(const ExperimentReport& rep) {
  using nlohmann::json;
  json j;
  j["config"] = detail::config_json(rep.config);
  j["schedule"] = rep.schedule;
  j["f_star"] = rep.f_star;
  j["d0"] = rep.d0;
  j["G"] = rep.G;
  j["run"] = {{"best_value", rep.run.best_value},   {"best_index", rep.run.best_index},
              {"steps_taken", rep.run.steps_taken}, {"stopped_early", rep.run.stopped_early},
              {"min_h", rep.run.min_h},             {"max_grad_norm", rep.run.max_grad_norm}};
  if (rep.adaptive) {
    const auto& a = *rep.adaptive;
    json ad = {{"K", a.K},
               {"target", a.target},
               {"best_epoch", a.best_epoch},
               {"f_tildes", a.f_tildes},
               {"epoch_steps", a.epoch_steps},
               {"epoch_condition_failures", a.epoch_condition_failures}};
    if (a.violation) {
      ad["violation"] = {{"epoch", a.violation->epoch},
                         {"iteration", a.violation->iteration},
                         {"message", a.violation->message}};
    } else {
      ad["violation"] = nullptr;
    }
    j["adaptive"] = ad;
  } else {
    j["adaptive"] = nullptr;
  }
  j["bounds"] = json::array();
  for (const auto& b : rep.bounds) {
    j["bounds"].push_back({{"name", b.name},
                           {"gamma", b.gamma},
                           {"report", bound_report_json(b.report)},
                           {"compliance",
                            {{"bound", b.compliance.bound},
                             {"achieved", b.compliance.achieved},
                             {"margin", b.compliance.margin},
                             {"pass", b.compliance.pass}}},
                           {"asserted", b.asserted}});
  }
  j["audits"] = json::array();
  for (const auto& a : rep.audits) {
    json v = json::array();
    for (const auto& x : a.first_violations) v.push_back(detail::violation_json(x));
    j["audits"].push_back({{"name", a.name},
                           {"applicable", a.applicable},
                           {"passed", a.passed},
                           {"violation_count", a.violation_count},
                           {"first_violations", v},
                           {"note", a.note}});
  }
  j["passed"] = rep.passed();
  if (rep.config.output.timing) j["wall_seconds"] = rep.wall_seconds;
  return j;
}

// ---------------------------------------------------------------------------
// Text report

inline void write_bound_table(std::ostream& out, const std::vector<BoundSummary>& bounds) {
  const auto cell = [](const std::optional<double>& v) {
    std::ostringstream s;
    if (v) {
      s.precision(6);
      s << std::scientific << *v;
    } else {
      s << "n/a";
    }
    return s.str();
  };
  char line[256];
  std::snprintf(line, sizeof line, "  %-10s %-6s %-14s %-14s %-14s %-14s %-14s %s\n", "bound",
                "gamma", "convex", "beta-smooth", "alpha-strongly", "well-cond", "value", "active");
  out << line;
  for (const auto& b : bounds) {
    const auto& r = b.report;
    std::snprintf(line, sizeof line, "  %-10s %-6g %-14s %-14s %-14s %-14s %-14s %s\n",
                  b.name.c_str(), b.gamma, cell(r.term_convex).c_str(),
                  cell(r.term_smooth).c_str(), cell(r.term_strongly_convex).c_str(),
                  cell(r.term_well_conditioned).c_str(), cell(r.bound_value).c_str(),
                  std::string(to_string(r.active_case)).c_str());
    out << line;
  }
}

inline void write_report_text(std::ostream& out, const ExperimentReport& rep) {
  const auto& c = rep.config;
  out << "experiment: " << to_string(c.objective.kind) << " dim=" << c.objective.dimension
      << " schedule=" << rep.schedule << " T=" << c.T << " seed=" << c.seed << '\n';
  out << "f_star=" << format_double(rep.f_star) << " d0=" << format_double(rep.d0)
      << " G=" << format_double(rep.G) << '\n';
  out << "run: best_value=" << format_double(rep.run.best_value)
      << " best_index=" << rep.run.best_index << " steps_taken=" << rep.run.steps_taken
      << " stopped_early=" << (rep.run.stopped_early ? "true" : "false")
      << " min_h=" << format_double(rep.run.min_h) << '\n';
  if (rep.adaptive) {
    const auto& a = *rep.adaptive;
    out << "adaptive: K=" << a.K << " epochs_run=" << a.epoch_steps.size()
        << " best_epoch=" << a.best_epoch << " final_f_tilde=" << format_double(a.f_tildes.back())
        << '\n';
    if (a.violation)
      out << "  lower bound violated in epoch " << a.violation->epoch << " at iteration "
          << a.violation->iteration << ": " << a.violation->message << '\n';
  }
  out << "\nbounds:\n";
  write_bound_table(out, rep.bounds);
  for (const auto& b : rep.bounds) {
    out << "  " << b.name << (b.asserted ? "" : " (reported only)") << ": "
        << (b.compliance.pass ? "PASS" : "FAIL")
        << " margin=" << format_double(b.compliance.margin)
        << " achieved=" << format_double(b.compliance.achieved)
        << " bound=" << format_double(b.compliance.bound) << '\n';
  }
  out << "\naudits:\n";
  for (const auto& a : rep.audits) {
    out << "  " << a.name << ": ";
    if (!a.applicable) {
      out << "not-applicable";
    } else {
      out << (a.passed ? "PASS" : "FAIL") << " (" << a.violation_count << " violations)";
    }
    if (!a.note.empty()) out << " - " << a.note;
    out << '\n';
    for (const auto& v : a.first_violations)
      out << "    t=" << v.t << ' ' << v.check << " lhs=" << format_double(v.lhs)
          << " rhs=" << format_double(v.rhs) << '\n';
  }
  out << "\nverdict: " << (rep.passed() ? "PASS" : "FAIL") << '\n';
  out << "wall_seconds: " << rep.wall_seconds << '\n';
}

enum class ReportFormat { json, text };

inline void emit_report(const ExperimentReport& rep, const std::filesystem::path& path,
                        ReportFormat format) {
  auto out = detail::open_for_write(path);
  if (format == ReportFormat::json) {
    out << report_json(rep).dump(2) << '\n';
  } else {
    write_report_text(out, rep);
  }
  detail::finish_write(out, path);
}

// ---------------------------------------------------------------------------
// SVG: h_t against t on a log scale.

inline std::string trajectory_svg(const std::vector<TrajectoryRecord>& trajectory) {
  constexpr double width = 640, height = 400, margin = 50;
  constexpr double floor = 1e-300;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& r : trajectory) {
    const double v = std::log10(std::max(r.h.value_or(floor), floor));
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(hi > lo)) hi = lo + 1.0;
  const double tmax = trajectory.empty() ? 1.0 : std::max<double>(1.0, trajectory.back().t);

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
    << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin
    << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
    << height - margin << "\" stroke=\"black\"/>\n";
  s << "<text x=\"" << width / 2 << "\" y=\"" << height - 10
    << "\" text-anchor=\"middle\" font-size=\"12\">t (0.." << tmax << ")</text>\n";
  s << "<text x=\"12\" y=\"" << height / 2 << "\" font-size=\"12\" transform=\"rotate(-90 12 "
    << height / 2 << ")\" text-anchor=\"middle\">log10 h_t (" << lo << ".." << hi
    << ")</text>\n";
  s << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
  for (const auto& r : trajectory) {
    const double v = std::log10(std::max(r.h.value_or(floor), floor));
    const double x = margin + (width - 2 * margin) * static_cast<double>(r.t) / tmax;
    const double y = height - margin - (height - 2 * margin) * (v - lo) / (hi - lo);
    s << x << ',' << y << ' ';
  }
  s << "\"/>\n</svg>\n";
  return s.str();
}

/// Writes report(s), trajectory.csv and optionally trajectory.svg into `dir`.
inline void write_outputs(const ExperimentReport& rep, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create '" + dir.string() + "': " + ec.message());
  emit_trajectory_csv(rep.trajectory_run, dir / "trajectory.csv");
  const auto& fmt = rep.config.output.format;
  if (fmt == "json" || fmt == "both") emit_report(rep, dir / "report.json", ReportFormat::json);
  if (fmt == "text" || fmt == "both") emit_report(rep, dir / "report.txt", ReportFormat::text);
  if (rep.config.output.svg) {
    auto out = detail::open_for_write(dir / "trajectory.svg");
    out << trajectory_svg(rep.trajectory_run.trajectory);
    detail::finish_write(out, dir / "trajectory.svg");
  }
}

}  // namespace polyak
