#pragma once

// Experiment configuration documents.
//
// Grammar (one statement per line):
//
//   document  := { blank | comment | section | entry }
//   comment   := ('#' | ';') text
//   section   := '[' name ']'
//   entry     := key '=' value [ ' #' trailing comment ]
//   list      := [ '[' ] number { ',' number } [ ']' ]
//
// Entries must follow a section header. Unknown sections or keys, duplicate
// keys and malformed values are rejected with the offending line number.
// Recognized keys are listed in kKnownKeys; semantics are documented in
// README.md.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polyak/error.hpp"
#include "polyak/objectives.hpp"
#include "polyak/vector_ops.hpp"

namespace polyak {

struct ObjectiveDescriptor {
  ObjectiveKind kind = ObjectiveKind::quadratic;
  std::size_t dimension = 0;
  std::vector<double> eigenvalues;  // explicit, or expanded from `spectrum`
  double norm_scale = 1.0;
  double strong_convexity = 0.0;
  double l1_weight = 0.0;
  std::optional<Point> x_star;  // explicit; otherwise seeded
  double x_star_radius = 0.0;   // radius of the seeded x* ball around 0
  double offset = 0.0;
};

struct StartDescriptor {
  std::optional<Point> x0;  // explicit; otherwise seeded on a sphere around x*
  double radius = 1.0;
};

struct ScheduleDescriptor {
  std::string name = "polyak";
  std::optional<double> f_star;
  std::optional<double> f_tilde;
  std::optional<double> eta;
  std::optional<double> alpha;
  std::optional<double> scale;
};

struct AdaptiveDescriptor {
  std::optional<long> K;  // nullopt: chosen from the gap and target
  double f_tilde0 = 0.0;
  std::optional<double> target;  // nullopt: R_{T,1/2}
};

struct OutputDescriptor {
  std::string dir;  // empty: nothing written
  std::string format = "json";  // json | text | both
  bool svg = false;
  bool timing = false;  // include wall-clock time in json
};

struct ExperimentConfig {
  ObjectiveDescriptor objective;
  StartDescriptor start;
  ScheduleDescriptor schedule;
  long T = 1;
  std::uint64_t seed = 0;
  bool record_points = false;
  std::size_t audit_samples = 1000;
  std::optional<AdaptiveDescriptor> adaptive;
  OutputDescriptor output;
};

inline const std::vector<std::string> kScheduleNames = {"polyak", "polyak-lb", "constant",
                                                        "inv-t", "inv-sqrt-t"};

namespace detail {

inline const std::map<std::string, std::vector<std::string>, std::less<>> kKnownKeys = {
    {"objective",
     {"kind", "dimension", "eigenvalues", "spectrum", "scale", "alpha", "l1_weight", "x_star",
      "x_star_radius", "offset"}},
    {"start", {"x0", "radius"}},
    {"schedule", {"name", "f_star", "f_tilde", "eta", "alpha", "scale"}},
    {"run", {"T", "seed", "record_points", "audit_samples"}},
    {"adaptive", {"K", "f_tilde0", "target"}},
    {"output", {"dir", "format", "svg", "timing"}},
};

struct RawValue {
  std::string text;
  std::size_t line = 0;  // 0: command-line override
};

using RawDocument = std::map<std::string, std::map<std::string, RawValue>>;

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline bool known_key(std::string_view section, std::string_view key) {
  const auto it = kKnownKeys.find(section);
  return it != kKnownKeys.end() &&
         std::find(it->second.begin(), it->second.end(), key) != it->second.end();
}

inline void insert_entry(RawDocument& doc, const std::string& section, std::string_view key,
                         std::string_view value, std::size_t line, bool allow_replace) {
  if (key.empty()) throw ConfigError("empty key", line);
  if (!known_key(section, key))
    throw ConfigError("unknown key '" + section + "." + std::string(key) + "'", line);
  auto& slot = doc[section];
  const std::string k(key);
  if (!allow_replace && slot.count(k))
    throw ConfigError("duplicate key '" + section + "." + k + "'", line);
  slot[k] = RawValue{std::string(value), line};
}

inline RawDocument tokenize(std::string_view text) {
  RawDocument doc;
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view raw = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') {
      if (end == text.size()) break;
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("unterminated section header", line_no);
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!kKnownKeys.count(section))
        throw ConfigError("unknown section '" + section + "'", line_no);
      doc[section];
    } else {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no);
      if (section.empty()) throw ConfigError("entry outside of any section", line_no);
      std::string_view value = line.substr(eq + 1);
      for (std::size_t i = 0; i < value.size(); ++i) {
        if ((value[i] == '#' || value[i] == ';') && i > 0 && (value[i - 1] == ' ' || value[i - 1] == '\t')) {
          value = value.substr(0, i);
          break;
        }
      }
      value = trim(value);
      if (value.empty()) throw ConfigError("missing value", line_no);
      insert_entry(doc, section, trim(line.substr(0, eq)), value, line_no, false);
    }
    if (end == text.size()) break;
  }
  return doc;
}

/// Applies `section.key=value` overrides on top of a parsed document.
inline void apply_overrides(RawDocument& doc, const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    const auto dot = o.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq)
      throw ConfigError("override must look like section.key=value: '" + o + "'");
    const std::string section(trim(std::string_view(o).substr(0, dot)));
    if (!kKnownKeys.count(section)) throw ConfigError("unknown section '" + section + "'");
    const auto value = trim(std::string_view(o).substr(eq + 1));
    if (value.empty()) throw ConfigError("missing value in override '" + o + "'");
    insert_entry(doc, section, trim(std::string_view(o).substr(dot + 1, eq - dot - 1)), value, 0,
                 true);
  }
}

class Reader {
 public:
  explicit Reader(const RawDocument& doc) : doc_(doc) {}

  bool has_section(const std::string& s) const { return doc_.count(s) > 0; }

  const RawValue* find(const std::string& section, const std::string& key) const {
    const auto s = doc_.find(section);
    if (s == doc_.end()) return nullptr;
    const auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }

  [[noreturn]] void fail(const std::string& section, const std::string& key,
                         const std::string& what) const {
    const RawValue* v = find(section, key);
    throw ConfigError(section + "." + key + ": " + what, v ? v->line : 0);
  }

  std::optional<std::string> string(const std::string& section, const std::string& key) const {
    const RawValue* v = find(section, key);
    if (!v) return std::nullopt;
    return v->text;
  }

  std::optional<double> number(const std::string& section, const std::string& key) const {
    const RawValue* v = find(section, key);
    if (!v) return std::nullopt;
    const auto parsed = parse_double(v->text);
    if (!parsed) fail(section, key, "expected a number, got '" + v->text + "'");
    return parsed;
  }

  std::optional<long long> integer(const std::string& section, const std::string& key) const {
    const RawValue* v = find(section, key);
    if (!v) return std::nullopt;
    long long out = 0;
    const auto* first = v->text.data();
    const auto* last = first + v->text.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last)
      fail(section, key, "expected an integer, got '" + v->text + "'");
    return out;
  }

  std::optional<std::uint64_t> unsigned64(const std::string& section, const std::string& key) const {
    const RawValue* v = find(section, key);
    if (!v) return std::nullopt;
    std::uint64_t out = 0;
    const auto* first = v->text.data();
    const auto* last = first + v->text.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last)
      fail(section, key, "expected an unsigned 64-bit integer, got '" + v->text + "'");
    return out;
  }

  std::optional<bool> boolean(const std::string& section, const std::string& key) const {
    const RawValue* v = find(section, key);
    if (!v) return std::nullopt;
    if (v->text == "true" || v->text == "1" || v->text == "yes") return true;
    if (v->text == "false" || v->text == "0" || v->text == "no") return false;
    fail(section, key, "expected true or false, got '" + v->text + "'");
  }

  std::optional<std::vector<double>> list(const std::string& section, const std::string& key) const {
    const RawValue* v = find(section, key);
    if (!v) return std::nullopt;
    std::string_view body = trim(v->text);
    if (!body.empty() && body.front() == '[') {
      if (body.back() != ']') fail(section, key, "unterminated list");
      body = trim(body.substr(1, body.size() - 2));
    }
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= body.size()) {
      const auto comma = std::min(body.find(',', pos), body.size());
      const auto item = trim(body.substr(pos, comma - pos));
      const auto parsed = parse_double(item);
      if (!parsed) fail(section, key, "malformed list element '" + std::string(item) + "'");
      out.push_back(*parsed);
      pos = comma + 1;
    }
    return out;
  }

  static std::optional<double> parse_double(std::string_view s) {
    s = trim(s);
    double out = 0.0;
    const auto* first = s.data();
    const auto* last = first + s.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last || first == last || !std::isfinite(out)) return std::nullopt;
    return out;
  }

 private:
  const RawDocument& doc_;
};

}  // namespace detail

/// Parses and validates a configuration document. `overrides` hold
/// `section.key=value` assignments that replace file values.
inline ExperimentConfig parse_config(std::string_view text,
                                     const std::vector<std::string>& overrides = {}) {
  auto doc = detail::tokenize(text);
  detail::apply_overrides(doc, overrides);
  const detail::Reader r(doc);
  ExperimentConfig cfg;

  // [objective]
  auto& obj = cfg.objective;
  const auto kind = r.string("objective", "kind");
  if (!kind) throw ConfigError("objective.kind: missing");
  try {
    obj.kind = parse_objective_kind(*kind);
  } catch (const InvalidArgument& e) {
    r.fail("objective", "kind", e.what());
  }
  const auto dim = r.integer("objective", "dimension");
  if (!dim) throw ConfigError("objective.dimension: missing");
  if (*dim < 1) r.fail("objective", "dimension", "must be >= 1");
  obj.dimension = static_cast<std::size_t>(*dim);

  const bool quadratic_kind = obj.kind == ObjectiveKind::quadratic ||
                              obj.kind == ObjectiveKind::singular_quadratic;
  const auto eigen = r.list("objective", "eigenvalues");
  const auto spectrum = r.list("objective", "spectrum");
  if (quadratic_kind) {
    if (eigen && spectrum) r.fail("objective", "spectrum", "conflicts with eigenvalues");
    if (eigen) {
      if (eigen->size() != obj.dimension)
        r.fail("objective", "eigenvalues",
               "expected " + std::to_string(obj.dimension) + " values, got " +
                   std::to_string(eigen->size()));
      obj.eigenvalues = *eigen;
    } else if (spectrum) {
      if (spectrum->size() != 2) r.fail("objective", "spectrum", "expected 'low, high'");
      const double lo = (*spectrum)[0];
      const double hi = (*spectrum)[1];
      if (lo > hi) r.fail("objective", "spectrum", "low exceeds high");
      obj.eigenvalues.resize(obj.dimension);
      for (std::size_t i = 0; i < obj.dimension; ++i)
        obj.eigenvalues[i] = obj.dimension == 1
                                 ? hi
                                 : lo + (hi - lo) * static_cast<double>(i) /
                                            static_cast<double>(obj.dimension - 1);
    } else {
      throw ConfigError("objective: quadratic kinds need eigenvalues or spectrum");
    }
  } else {
    if (eigen) r.fail("objective", "eigenvalues", "only valid for quadratic kinds");
    if (spectrum) r.fail("objective", "spectrum", "only valid for quadratic kinds");
  }
  if (auto v = r.number("objective", "scale")) {
    if (obj.kind != ObjectiveKind::scaled_euclidean_norm)
      r.fail("objective", "scale", "only valid for scaled-euclidean-norm");
    obj.norm_scale = *v;
  }
  if (auto v = r.number("objective", "alpha")) {
    if (obj.kind != ObjectiveKind::strongly_convex_plus_l1)
      r.fail("objective", "alpha", "only valid for strongly-convex-plus-l1");
    obj.strong_convexity = *v;
  } else if (obj.kind == ObjectiveKind::strongly_convex_plus_l1) {
    throw ConfigError("objective.alpha: missing");
  }
  if (auto v = r.number("objective", "l1_weight")) {
    if (obj.kind != ObjectiveKind::strongly_convex_plus_l1)
      r.fail("objective", "l1_weight", "only valid for strongly-convex-plus-l1");
    obj.l1_weight = *v;
  }
  if (auto v = r.list("objective", "x_star")) {
    if (v->size() != obj.dimension) r.fail("objective", "x_star", "dimension mismatch");
    obj.x_star = *v;
  }
  if (auto v = r.number("objective", "x_star_radius")) {
    if (obj.x_star) r.fail("objective", "x_star_radius", "conflicts with x_star");
    if (*v < 0.0) r.fail("objective", "x_star_radius", "must be >= 0");
    obj.x_star_radius = *v;
  }
  obj.offset = r.number("objective", "offset").value_or(0.0);

  // [start]
  if (auto v = r.list("start", "x0")) {
    if (v->size() != obj.dimension) r.fail("start", "x0", "dimension mismatch");
    cfg.start.x0 = *v;
  }
  if (auto v = r.number("start", "radius")) {
    if (cfg.start.x0) r.fail("start", "radius", "conflicts with x0");
    if (*v < 0.0) r.fail("start", "radius", "must be >= 0");
    cfg.start.radius = *v;
  }

  // [schedule]
  auto& s = cfg.schedule;
  s.name = r.string("schedule", "name").value_or("polyak");
  if (std::find(kScheduleNames.begin(), kScheduleNames.end(), s.name) == kScheduleNames.end())
    r.fail("schedule", "name", "unknown schedule '" + s.name + "'");
  s.f_star = r.number("schedule", "f_star");
  s.f_tilde = r.number("schedule", "f_tilde");
  s.eta = r.number("schedule", "eta");
  s.alpha = r.number("schedule", "alpha");
  s.scale = r.number("schedule", "scale");
  const auto only_for = [&](const char* key, bool present, const char* name) {
    if (present && s.name != name)
      r.fail("schedule", key, std::string("only valid for schedule ") + name);
  };
  only_for("f_star", s.f_star.has_value(), "polyak");
  only_for("f_tilde", s.f_tilde.has_value(), "polyak-lb");
  only_for("eta", s.eta.has_value(), "constant");
  only_for("alpha", s.alpha.has_value(), "inv-t");
  only_for("scale", s.scale.has_value(), "inv-sqrt-t");
  if (s.name == "polyak-lb" && !s.f_tilde && !r.has_section("adaptive"))
    throw ConfigError("schedule.f_tilde: missing f_tilde");
  for (auto [key, v] : {std::pair{"eta", s.eta}, std::pair{"alpha", s.alpha},
                        std::pair{"scale", s.scale}}) {
    if (v && !(*v > 0.0)) r.fail("schedule", key, "must be positive");
  }

  // [run]
  const auto T = r.integer("run", "T");
  if (!T) throw ConfigError("run.T: missing");
  if (*T < 1) r.fail("run", "T", "T must be ≥ 1");
  cfg.T = static_cast<long>(*T);
  cfg.seed = r.unsigned64("run", "seed").value_or(0);
  cfg.record_points = r.boolean("run", "record_points").value_or(false);
  if (auto v = r.integer("run", "audit_samples")) {
    if (*v < 0) r.fail("run", "audit_samples", "must be >= 0");
    cfg.audit_samples = static_cast<std::size_t>(*v);
  }

  // [adaptive]
  if (r.has_section("adaptive")) {
    if (s.name != "polyak-lb" && r.find("schedule", "name"))
      r.fail("schedule", "name", "adaptive runs use polyak-lb");
    s.name = "polyak-lb";
    AdaptiveDescriptor a;
    const auto f0 = r.number("adaptive", "f_tilde0");
    if (!f0) throw ConfigError("adaptive.f_tilde0: missing");
    a.f_tilde0 = *f0;
    if (auto k = r.string("adaptive", "K"); k && *k != "auto") {
      const auto n = r.integer("adaptive", "K");
      if (*n < 1) r.fail("adaptive", "K", "must be >= 1 or auto");
      a.K = static_cast<long>(*n);
    }
    if (auto t = r.string("adaptive", "target"); t && *t != "auto") {
      const auto v = r.number("adaptive", "target");
      if (!(*v > 0.0)) r.fail("adaptive", "target", "must be positive");
      a.target = *v;
    }
    cfg.adaptive = a;
  }

  // [output]
  cfg.output.dir = r.string("output", "dir").value_or("");
  cfg.output.format = r.string("output", "format").value_or("json");
  if (cfg.output.format != "json" && cfg.output.format != "text" && cfg.output.format != "both")
    r.fail("output", "format", "expected json, text or both");
  cfg.output.svg = r.boolean("output", "svg").value_or(false);
  cfg.output.timing = r.boolean("output", "timing").value_or(false);
  return cfg;
}

}  // namespace polyak
