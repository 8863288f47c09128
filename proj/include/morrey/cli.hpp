#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "morrey/curves.hpp"
#include "morrey/error.hpp"
#include "morrey/experiments.hpp"
#include "morrey/morrey_norm.hpp"
#include "morrey/report_io.hpp"
#include "morrey/weights.hpp"

namespace morrey {

/// Flat key=value run configuration. Values stay textual until validated;
/// `line` remembers where each key came from (0 for command-line flags).
struct RunConfig {
  std::string command;
  std::map<std::string, std::string> values;
  std::map<std::string, int> line;

  bool has(const std::string& key) const { return values.count(key) > 0; }
  const std::string& text(const std::string& key) const { return values.at(key); }

  void set(const std::string& key, const std::string& value, int line_no = 0);

  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }
  long long integer(const std::string& key) const;
  long long integer_or(const std::string& key, long long fallback) const { return has(key) ? integer(key) : fallback; }
};

inline const std::set<std::string>& config_keys() {
  static const std::set<std::string> keys{"command", "p",     "lambda", "beta",  "alpha",     "weight", "direction",
                                          "x0",      "alphas", "curve", "n",     "levels",    "s",      "seed",
                                          "out",     "inequality"};
  return keys;
}

inline const std::set<std::string>& config_commands() {
  static const std::set<std::string> commands{"probe-hardy",       "probe-singular", "threshold-sweep",
                                              "verify-inequality", "curve-diagnostics", "morrey-norm",
                                              "weight-indices"};
  return commands;
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] inline void invalid(const std::string& key, const std::string& constraint) {
  fail(ErrorCode::validation_error, key + ": " + constraint);
}

inline double parse_number(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    invalid(key, "'" + text + "' is not a number");
  }
  if (used != text.size() || !std::isfinite(v)) invalid(key, "'" + text + "' is not a finite number");
  return v;
}

inline std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_number(key, trim(item)));
  if (out.empty()) invalid(key, "empty list");
  return out;
}

}  // namespace detail

inline void RunConfig::set(const std::string& key, const std::string& value, int line_no) {
  if (!config_keys().count(key)) {
    if (line_no > 0) fail(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    fail(ErrorCode::parse_error, "unknown key '" + key + "'");
  }
  values[key] = value;
  line[key] = line_no;
  if (key == "command") command = value;
}

inline double RunConfig::number(const std::string& key) const { return detail::parse_number(key, text(key)); }

inline long long RunConfig::integer(const std::string& key) const {
  const double v = number(key);
  if (v != std::floor(v) || std::abs(v) > 1e15) detail::invalid(key, "must be an integer");
  return static_cast<long long>(v);
}

/// Syntax only: one key=value per line, '#' starts a comment, keys must be
/// known and appear once.
inline RunConfig parse_config_text(const std::string& source) {
  RunConfig cfg;
  std::istringstream in(source);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, ErrorCode::parse_error,
            "line " + std::to_string(line_no) + ": expected key=value");
    const std::string key = detail::trim(line.substr(0, eq)), value = detail::trim(line.substr(eq + 1));
    require(!key.empty(), ErrorCode::parse_error, "line " + std::to_string(line_no) + ": empty key");
    require(!cfg.has(key), ErrorCode::parse_error,
            "line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    cfg.set(key, value, line_no);
  }
  return cfg;
}

/// "power:a", "power_log:a,b,A", "table:path" or a bare exponent.
inline WeightSpec parse_weight_spec(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return WeightSpec::power(detail::parse_number("weight", text));
  const std::string kind = text.substr(0, colon), rest = text.substr(colon + 1);
  if (kind == "power") return WeightSpec::power(detail::parse_number("weight", rest));
  if (kind == "power_log") {
    const auto v = detail::parse_list("weight", rest);
    if (v.size() != 3) detail::invalid("weight", "power_log needs alpha,beta,A");
    if (!(v[2] > 1)) detail::invalid("weight", "power_log needs A > 1");
    return WeightSpec::power_log(v[0], v[1], v[2]);
  }
  if (kind == "table") return load_weight_table(rest);
  detail::invalid("weight", "unknown weight kind '" + kind + "'");
}

namespace detail {

inline void need(const RunConfig& cfg, const std::string& key) {
  if (!cfg.has(key)) invalid(key, "required for command " + cfg.command);
}

inline void check_p(const RunConfig& cfg, double min_exclusive) {
  need(cfg, "p");
  const double p = cfg.number("p");
  if (min_exclusive >= 1 ? !(p > min_exclusive) : !(p >= 1)) invalid("p", min_exclusive >= 1 ? "need p > 1" : "need p >= 1");
}

inline void check_lambda(const RunConfig& cfg) {
  need(cfg, "lambda");
  const double l = cfg.number("lambda");
  if (!(l >= 0 && l < 1)) invalid("lambda", "must be in [0,1)");
}

inline void check_range(const RunConfig& cfg, const std::string& key, long long lo, long long hi) {
  if (!cfg.has(key)) return;
  const long long v = cfg.integer(key);
  if (v < lo || v > hi) invalid(key, "must be in [" + std::to_string(lo) + "," + std::to_string(hi) + "]");
}

inline void exactly_one(const RunConfig& cfg, const std::string& a, const std::string& b) {
  if (cfg.has(a) == cfg.has(b)) invalid(a, "give exactly one of " + a + " and " + b);
}

inline bool curve_is_file(const RunConfig& cfg) { return cfg.text("curve").rfind("file:", 0) == 0; }

}  // namespace detail

/// Range and presence checks for the chosen command; nothing is computed.
inline void validate_config(const RunConfig& cfg) {
  using namespace detail;
  if (cfg.has("lambda")) check_lambda(cfg);
  if (cfg.has("p")) check_p(cfg, 0);
  if (cfg.has("s")) {
    const double s = cfg.number("s");
    if (!(s > 0 && s < 1)) invalid("s", "must be in (0,1)");
  }
  if (cfg.has("seed") && cfg.integer("seed") < 0) invalid("seed", "must be non-negative");
  if (cfg.has("x0")) {
    const double x0 = cfg.number("x0");
    if (!(x0 >= 0 && x0 <= 1)) invalid("x0", "must be in [0,1]");
  }
  if (cfg.has("direction") && cfg.text("direction") != "lower" && cfg.text("direction") != "upper")
    invalid("direction", "must be lower or upper");
  if (cfg.has("out") && cfg.text("out").empty()) invalid("out", "empty path");
  if (cfg.has("curve") && !curve_is_file(cfg) && !parse_curve_kind(cfg.text("curve")))
    invalid("curve", "unknown curve family '" + cfg.text("curve") + "'");
  if (cfg.has("weight")) {
    try {
      (void)parse_weight_spec(cfg.text("weight"));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::validation_error) throw;
      invalid("weight", e.what());
    }
  }
  if (cfg.has("alpha")) (void)cfg.number("alpha");
  if (cfg.has("beta")) (void)cfg.number("beta");
  if (cfg.command.empty()) invalid("command", "missing");
  if (!config_commands().count(cfg.command)) invalid("command", "unknown command '" + cfg.command + "'");

  const std::string& c = cfg.command;
  if (c == "probe-hardy") {
    check_lambda(cfg);
    check_p(cfg, 0);
    exactly_one(cfg, "beta", "weight");
    check_range(cfg, "levels", 4, 10);
  } else if (c == "probe-singular") {
    check_lambda(cfg);
    check_p(cfg, 1);
    exactly_one(cfg, "alpha", "weight");
    check_range(cfg, "levels", 4, 10);
  } else if (c == "threshold-sweep") {
    check_lambda(cfg);
    check_p(cfg, 1);
    if (cfg.has("alphas")) (void)parse_list("alphas", cfg.text("alphas"));
    check_range(cfg, "levels", 4, 10);
  } else if (c == "verify-inequality") {
    need(cfg, "inequality");
    const std::string& ineq = cfg.text("inequality");
    if (ineq != "alvarez" && ineq != "fefferman" && ineq != "maximal")
      invalid("inequality", "must be alvarez, fefferman or maximal");
    need(cfg, "curve");
    if (curve_is_file(cfg)) invalid("curve", "verify-inequality needs a curve family to refine");
    if (ineq == "alvarez") {
      need(cfg, "s");
    } else {
      check_lambda(cfg);
      check_p(cfg, 1);
    }
    check_range(cfg, "n", 8, 1 << 16);
    check_range(cfg, "levels", 2, 6);
  } else if (c == "curve-diagnostics") {
    need(cfg, "curve");
    check_range(cfg, "n", 8, 1 << 16);
    check_range(cfg, "levels", 3, 8);
  } else if (c == "morrey-norm") {
    check_lambda(cfg);
    check_p(cfg, 0);
    need(cfg, "alpha");
    check_range(cfg, "n", 8, 1 << 16);
    check_range(cfg, "levels", 4, 10);
  } else if (c == "weight-indices") {
    check_lambda(cfg);
    check_p(cfg, 1);
    exactly_one(cfg, "alpha", "weight");
  }
}

inline RunConfig parse_config(const std::string& source) {
  RunConfig cfg = parse_config_text(source);
  validate_config(cfg);
  return cfg;
}

namespace detail {

inline WeightSpec config_weight(const RunConfig& cfg) {
  return cfg.has("weight") ? parse_weight_spec(cfg.text("weight")) : WeightSpec::power(cfg.number("alpha"));
}

inline std::uint64_t config_seed(const RunConfig& cfg) {
  return static_cast<std::uint64_t>(cfg.integer_or("seed", static_cast<long long>(TestFamily::default_seed)));
}

inline ExperimentReport run_curve_diagnostics(const RunConfig& cfg) {
  ExperimentReport r;
  const long long n = cfg.integer_or("n", 256);
  r.params["n"] = static_cast<double>(n);
  if (curve_is_file(cfg)) {
    const DiscretizedCurve c = load_curve(cfg.text("curve").substr(5));
    const CurveDiagnostics d = curve_diagnostics(c);
    r.name = "curve_diagnostics(file)";
    r.params["carleson"] = d.carleson_constant;
    r.params["arc_chord"] = d.arc_chord_constant;
    r.params["cusp_order"] = d.cusp_order_estimate;
    r.per_level.emplace_back(0, d.arc_chord_constant);
    r.constant_estimate = d.arc_chord_constant;
    r.verdict = std::isfinite(d.arc_chord_constant) ? Boundedness::bounded : Boundedness::unbounded;
    return r;
  }
  const CurveKind kind = *parse_curve_kind(cfg.text("curve"));
  const int levels = static_cast<int>(cfg.integer_or("levels", 4));
  r.name = "curve_diagnostics(" + to_string(kind) + ")";
  r.params["levels"] = levels;
  const CurveDiagnostics d = curve_diagnostics(generate_curve(kind, {}, n));
  r.params["carleson"] = d.carleson_constant;
  r.params["arc_chord"] = d.arc_chord_constant;
  r.params["cusp_order"] = d.cusp_order_estimate;
  const ArcChordTrend t = arc_chord_trend(kind, {}, n, levels);
  for (std::size_t i = 0; i < t.constants.size(); ++i) r.per_level.emplace_back(static_cast<int>(i), t.constants[i]);
  r.growth = t.fit;
  r.verdict = t.unbounded ? Boundedness::unbounded : Boundedness::bounded;
  r.constant_estimate = r.max_ratio();
  r.prediction = kind == CurveKind::cusp ? Boundedness::unbounded : Boundedness::bounded;
  return r;
}

inline ExperimentReport run_morrey_norm(const RunConfig& cfg) {
  const double p = cfg.number("p"), lambda = cfg.number("lambda"), gamma = cfg.number("alpha");
  const MembershipVerdict v = diagnose_membership([gamma](double x) { return cplx(std::pow(x, gamma)); }, 0.0, 1.0,
                                                  cfg.integer_or("n", 64), {p, lambda},
                                                  static_cast<int>(cfg.integer_or("levels", 5)));
  ExperimentReport r;
  r.name = "morrey_membership";
  r.params = {{"p", p}, {"lambda", lambda}, {"gamma", gamma}};
  for (std::size_t i = 0; i < v.norm_estimates.size(); ++i) {
    r.per_level.emplace_back(static_cast<int>(i), v.norm_estimates[i]);
    r.scales.push_back(1 / v.min_radii[i]);
  }
  r.growth = v.growth;
  r.verdict = v.member == Verdict::yes  ? Boundedness::bounded
              : v.member == Verdict::no ? Boundedness::unbounded
                                        : Boundedness::inconclusive;
  r.constant_estimate = r.per_level.back().second;
  r.prediction = gamma >= (lambda - 1) / p ? Boundedness::bounded : Boundedness::unbounded;
  r.note = "bounded = member of the space";
  return r;
}

inline ExperimentReport run_weight_indices(const RunConfig& cfg) {
  const double p = cfg.number("p"), lambda = cfg.number("lambda");
  const WeightSpec w = config_weight(cfg);
  const AdmissibleResult a = check_admissible(w, p, lambda);
  ExperimentReport r;
  r.name = "weight_indices";
  r.params = {{"p", p},
              {"lambda", lambda},
              {"m", a.indices.m_lower},
              {"M", a.indices.M_upper},
              {"margin", a.margin}};
  r.per_level.emplace_back(0, a.indices.M_upper);
  r.constant_estimate = a.margin;
  r.verdict = a.verdict ? Boundedness::bounded : Boundedness::unbounded;
  r.note = a.verdict ? "admissible" : "not admissible";
  return r;
}

inline std::vector<ExperimentReport> run_inequality(const RunConfig& cfg) {
  const CurveKind kind = *parse_curve_kind(cfg.text("curve"));
  CurveLadder ladder{kind, {}, cfg.integer_or("n", 256), static_cast<int>(cfg.integer_or("levels", 2))};
  const bool closed = kind == CurveKind::circle;
  const std::uint64_t seed = config_seed(cfg);
  TestFamily family = TestFamily::jumps(seed);
  if (closed)
    for (const FamilyMember& m : TestFamily::circle_harmonics(4).members) family.members.push_back(m);
  const std::string& ineq = cfg.text("inequality");
  if (ineq == "alvarez") return {verify_alvarez_perez(ladder, cfg.number("s"), family)};
  const double p = cfg.number("p"), lambda = cfg.number("lambda");
  if (ineq == "fefferman") {
    const TestFamily fs = closed ? TestFamily::jumps(seed) : TestFamily::vanishing_ends(TestFamily::jumps(seed));
    return {verify_fefferman_stein(ladder, p, lambda, fs)};
  }
  return {verify_morrey_boundedness_maximal(ladder, p, lambda, family)};
}

}  // namespace detail

/// Runs the validated command and returns its reports.
inline std::vector<ExperimentReport> execute(const RunConfig& cfg) {
  using namespace detail;
  validate_config(cfg);
  const std::string& c = cfg.command;
  const int levels = static_cast<int>(cfg.integer_or("levels", 5));
  if (c == "probe-hardy") {
    const HardyDirection d =
        cfg.has("direction") && cfg.text("direction") == "upper" ? HardyDirection::upper : HardyDirection::lower;
    const HardyParams hp = cfg.has("beta") ? HardyParams::power(cfg.number("beta"), d)
                                           : HardyParams::weighted(parse_weight_spec(cfg.text("weight")), d);
    const double p = cfg.number("p"), lambda = cfg.number("lambda");
    return {probe_hardy(p, lambda, hp, TestFamily::standard(p, lambda, config_seed(cfg)), levels)};
  }
  if (c == "probe-singular") {
    const double p = cfg.number("p"), lambda = cfg.number("lambda"), x0 = cfg.number_or("x0", 0.0);
    return {probe_weighted_singular(p, lambda, config_weight(cfg), x0,
                                    TestFamily::for_nodes(p, lambda, {x0}, config_seed(cfg)), levels)};
  }
  if (c == "threshold-sweep") {
    std::vector<double> alphas;
    if (cfg.has("alphas")) {
      alphas = parse_list("alphas", cfg.text("alphas"));
    } else {
      for (int i = -4; i <= 8; ++i) alphas.push_back(i / 10.0);
    }
    return threshold_sweep(cfg.number("p"), cfg.number("lambda"), alphas, levels, config_seed(cfg));
  }
  if (c == "verify-inequality") return run_inequality(cfg);
  if (c == "curve-diagnostics") return {run_curve_diagnostics(cfg)};
  if (c == "morrey-norm") return {run_morrey_norm(cfg)};
  return {run_weight_indices(cfg)};
}

/// 0: every prediction met, 2: some verdict contradicts its prediction,
/// 3: some verdict inconclusive.
inline int exit_code_for(const std::vector<ExperimentReport>& reports) {
  bool inconclusive = false;
  for (const auto& r : reports) {
    if (r.prediction && r.verdict != Boundedness::inconclusive && *r.prediction != r.verdict) return 2;
    if (r.verdict == Boundedness::inconclusive) inconclusive = true;
  }
  return inconclusive ? 3 : 0;
}

/// Executes, writes CSV and summary, and maps the outcome to an exit code;
/// any error is printed to `err` and yields 1.
inline int run(const RunConfig& cfg, std::ostream& err = std::cerr) {
  try {
    validate_config(cfg);
    const std::string out = cfg.has("out") ? cfg.text("out") : "morrey_lab.csv";
    const auto dir = std::filesystem::path(out).parent_path();
    require(dir.empty() || std::filesystem::is_directory(dir), ErrorCode::io_error,
            "output directory of '" + out + "' does not exist");
    const auto reports = execute(cfg);
    emit_report(reports, out);
    return exit_code_for(reports);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace morrey
