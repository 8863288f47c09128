#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "morrey/error.hpp"
#include "morrey/experiments.hpp"

namespace morrey {

inline std::string format_g9(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string params_field(const std::map<std::string, double>& params) {
  std::string out;
  for (const auto& [k, v] : params) {
    if (!out.empty()) out += ';';
    out += k + "=" + format_g9(v);
  }
  return out;
}

inline std::vector<const ExperimentReport*> sorted_by_name(const std::vector<ExperimentReport>& reports) {
  std::vector<const ExperimentReport*> order;
  for (const auto& r : reports) order.push_back(&r);
  std::stable_sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->name < b->name; });
  return order;
}

}  // namespace detail

inline const char* csv_header() {
  return "name,params,level,ratio,exponent,residual,verdict,constant_estimate,paper_bound";
}

/// One row per (report, level), reports ordered by name.
inline std::string format_csv(const std::vector<ExperimentReport>& reports) {
  require(!reports.empty(), ErrorCode::empty_report_list, "no reports to write");
  std::ostringstream out;
  out << csv_header() << '\n';
  for (const ExperimentReport* r : detail::sorted_by_name(reports)) {
    const std::string bound = r->paper_bound ? format_g9(*r->paper_bound) : "";
    for (const auto& [level, ratio] : r->per_level) {
      out << detail::csv_field(r->name) << ',' << detail::csv_field(detail::params_field(r->params)) << ',' << level
          << ',' << format_g9(ratio) << ',' << format_g9(r->growth.exponent) << ',' << format_g9(r->growth.residual)
          << ',' << to_string(r->verdict) << ',' << format_g9(r->constant_estimate) << ',' << bound << '\n';
    }
  }
  return out.str();
}

inline std::string format_summary(const std::vector<ExperimentReport>& reports) {
  require(!reports.empty(), ErrorCode::empty_report_list, "no reports to write");
  std::ostringstream out;
  for (const ExperimentReport* r : detail::sorted_by_name(reports)) {
    out << r->name << ": " << to_string(r->verdict) << " (" << r->growth_kind
        << " exponent " << format_g9(r->growth.exponent) << ", residual " << format_g9(r->growth.residual)
        << "), constant " << format_g9(r->constant_estimate);
    if (r->paper_bound) out << ", bound " << format_g9(*r->paper_bound);
    if (r->prediction)
      out << ", predicted " << to_string(*r->prediction) << (r->matches_prediction() ? " [match]" : " [MISMATCH]");
    else if (r->paper_undetermined)
      out << ", paper-undetermined";
    if (!r->note.empty()) out << "; " << r->note;
    out << '\n';
  }
  return out.str();
}

inline std::string summary_path(const std::string& csv_path) {
  return std::filesystem::path(csv_path).replace_extension(".summary.txt").string();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorCode::io_error, "cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  require(static_cast<bool>(out), ErrorCode::io_error, "write to '" + path + "' failed");
}

/// CSV at `path` plus a human-readable `.summary.txt` sibling.
inline void emit_report(const std::vector<ExperimentReport>& reports, const std::string& path) {
  const std::string csv = format_csv(reports), summary = format_summary(reports);
  write_text(path, csv);
  write_text(summary_path(path), summary);
}

}  // namespace morrey
