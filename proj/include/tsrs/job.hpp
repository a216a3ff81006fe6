#pragma once

// Batch jobs for the command line front end: JSON job descriptions in,
// deterministic JSON reports out (numbers printed with 17 significant digits).

#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "tsrs/error.hpp"
#include "tsrs/expr.hpp"
#include "tsrs/identities.hpp"
#include "tsrs/integrator.hpp"
#include "tsrs/scale_parser.hpp"
#include "tsrs/timescale.hpp"

namespace tsrs {

inline const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names{"by_parts", "transition", "comparison"};
  return names;
}

struct JobSpec {
  std::string scale;
  std::string f;
  std::string g;
  double a = 0.0;
  double b = 0.0;
  BoxKind kind = BoxKind::Delta;
  std::optional<double> tol;
  std::vector<std::string> checks;
  std::vector<double> points;  // explicit partition for `sums`
};

struct JobReport {
  BoxKind kind = BoxKind::Delta;
  double lower = 0.0;
  double upper = 0.0;
  double value = 0.0;
  bool exact = false;
  std::size_t refinements = 0;
  std::size_t partition_size = 0;
  std::map<std::string, double> check_residuals;
  std::map<std::string, double> check_allowances;
  std::vector<std::string> warnings;
};

inline BoxKind parse_kind(std::string_view s) {
  if (s == "delta") return BoxKind::Delta;
  if (s == "nabla") return BoxKind::Nabla;
  throw Error(ErrorCode::InvalidArgument, "kind must be \"delta\" or \"nabla\", got \"" + std::string(s) + "\"");
}

namespace detail {

inline double json_number(const nlohmann::json& v, const char* key) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_number(v.get<std::string>());
  throw Error(ErrorCode::InvalidArgument, std::string("field '") + key + "' must be a number or a numeric string");
}

}  // namespace detail

/// Fields present in `doc` override those already in `job`; each override of
/// a value that was set differently is reported in `warnings`.
inline void merge_job_json(JobSpec& job, std::vector<std::string>& set_fields, const nlohmann::json& doc,
                           std::vector<std::string>& warnings) {
  if (!doc.is_object()) throw Error(ErrorCode::InvalidArgument, "job file must hold a JSON object");
  auto overrides = [&](const std::string& key) {
    for (const auto& s : set_fields)
      if (s == key) {
        warnings.push_back("job file overrides command line value of '" + key + "'");
        return;
      }
    set_fields.push_back(key);
  };
  for (const auto& [key, v] : doc.items()) {
    if (key == "scale" || key == "f" || key == "g" || key == "kind") {
      if (!v.is_string()) throw Error(ErrorCode::InvalidArgument, "field '" + key + "' must be a string");
      overrides(key);
      auto s = v.get<std::string>();
      if (key == "scale") job.scale = s;
      else if (key == "f") job.f = s;
      else if (key == "g") job.g = s;
      else job.kind = parse_kind(s);
    } else if (key == "a") {
      overrides(key);
      job.a = detail::json_number(v, "a");
    } else if (key == "b") {
      overrides(key);
      job.b = detail::json_number(v, "b");
    } else if (key == "tol") {
      overrides(key);
      job.tol = detail::json_number(v, "tol");
    } else if (key == "checks") {
      if (!v.is_array()) throw Error(ErrorCode::InvalidArgument, "field 'checks' must be an array");
      overrides(key);
      job.checks.clear();
      for (const auto& c : v) job.checks.push_back(c.get<std::string>());
    } else if (key == "points") {
      if (!v.is_array()) throw Error(ErrorCode::InvalidArgument, "field 'points' must be an array");
      overrides(key);
      job.points.clear();
      for (const auto& p : v) job.points.push_back(detail::json_number(p, "points"));
    } else {
      warnings.push_back("ignored unknown field '" + key + "'");
    }
  }
}

inline JobSpec parse_job(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SyntaxError(e.byte, e.what());
  }
  JobSpec job;
  std::vector<std::string> set, warnings;
  merge_job_json(job, set, doc, warnings);
  return job;
}

namespace detail {

inline void validate_job(const JobSpec& job) {
  if (job.scale.empty()) throw Error(ErrorCode::InvalidArgument, "missing scale");
  if (job.f.empty()) throw Error(ErrorCode::InvalidArgument, "missing f");
  if (job.g.empty()) throw Error(ErrorCode::InvalidArgument, "missing g");
  if (job.tol && !(*job.tol > 0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
  for (const auto& c : job.checks) {
    bool ok = false;
    for (const auto& k : known_checks()) ok = ok || c == k;
    if (!ok) throw Error(ErrorCode::InvalidArgument, "unknown check '" + c + "'");
  }
}

inline IntegratorConfig job_config(const JobSpec& job) {
  IntegratorConfig cfg;
  if (job.tol) cfg.tol = *job.tol;
  return cfg;
}

inline void run_checks(const JobSpec& job, const Expr& f, const Expr& g, const TimeScale& scale,
                       const IntegratorConfig& cfg, JobReport& report) {
  for (const auto& name : job.checks) {
    double residual = 0.0, allowance = 0.0;
    if (name == "by_parts") {
      auto r = by_parts_residual(f, g, scale, job.a, job.b, job.kind, cfg);
      residual = r.residual;
      allowance = r.allowance;
    } else if (name == "transition") {
      auto r = transition_residual(f, g, scale, job.a, job.b, job.kind, cfg);
      residual = r.residual;
      allowance = r.allowance;
    } else {
      auto r = comparison_check(f, g, scale, job.a, job.b, cfg);
      residual = r.violation;
      allowance = r.allowance;
    }
    report.check_residuals[name] = residual;
    report.check_allowances[name] = allowance;
    if (residual > allowance) report.warnings.push_back("check '" + name + "' residual exceeds its allowance");
  }
}

}  // namespace detail

/// Integrate and run the requested checks.
inline JobReport run(const JobSpec& job) {
  detail::validate_job(job);
  TimeScale scale = parse_scale(job.scale);
  Expr f = parse_expr(job.f), g = parse_expr(job.g);
  IntegratorConfig cfg = detail::job_config(job);
  IntegralResult r = integrate(f, g, scale, job.a, job.b, job.kind, cfg);
  JobReport report;
  report.kind = r.kind;
  report.lower = r.lower;
  report.upper = r.upper;
  report.value = r.value;
  report.exact = r.exact;
  report.refinements = r.refinements;
  report.partition_size = r.final_partition_size;
  detail::run_checks(job, f, g, scale, cfg, report);
  return report;
}

/// Run only the residual checks (all three when none are requested).
inline JobReport run_checks_only(JobSpec job) {
  if (job.checks.empty()) job.checks = known_checks();
  detail::validate_job(job);
  TimeScale scale = parse_scale(job.scale);
  Expr f = parse_expr(job.f), g = parse_expr(job.g);
  JobReport report;
  report.kind = job.kind;
  detail::run_checks(job, f, g, scale, detail::job_config(job), report);
  return report;
}

/// L_□ and U_□ for the explicit partition in `job.points`.
inline DarbouxSums run_sums(const JobSpec& job) {
  detail::validate_job(job);
  TimeScale scale = parse_scale(job.scale);
  Partition p(scale, job.points);
  return darboux_sums(p, parse_expr(job.f), parse_expr(job.g), job.kind);
}

// ---------------------------------------------------------------------------
// Output

namespace detail {

inline std::string json_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string json_string(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

inline std::string json_map(const std::map<std::string, double>& m) {
  std::string out = "{";
  bool first = true;
  for (const auto& [k, v] : m) {
    if (!first) out += ",";
    first = false;
    out += json_string(k) + ":" + json_double(v);
  }
  return out + "}";
}

inline std::string json_list(const std::vector<std::string>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + json_string(v[i]);
  return out + "]";
}

}  // namespace detail

inline std::string to_json(const JobReport& r) {
  using namespace detail;
  std::ostringstream os;
  os << "{\"kind\":" << json_string(to_string(r.kind)) << ",\"lower\":" << json_double(r.lower)
     << ",\"upper\":" << json_double(r.upper) << ",\"value\":" << json_double(r.value)
     << ",\"exact\":" << (r.exact ? "true" : "false") << ",\"refinements\":" << r.refinements
     << ",\"partition_size\":" << r.partition_size << ",\"check_residuals\":" << json_map(r.check_residuals)
     << ",\"check_allowances\":" << json_map(r.check_allowances) << ",\"warnings\":" << json_list(r.warnings)
     << "}";
  return os.str();
}

inline std::string to_json(const DarbouxSums& s) {
  using namespace detail;
  std::ostringstream os;
  os << "{\"kind\":" << json_string(to_string(s.kind)) << ",\"lower\":" << json_double(s.lower)
     << ",\"upper\":" << json_double(s.upper) << ",\"partition_size\":" << s.partition_size
     << ",\"rounding_slack\":" << json_double(s.slack) << "}";
  return os.str();
}

inline std::string error_json(ErrorCode code, std::string_view message, const IntegralResult* last = nullptr) {
  using namespace detail;
  std::ostringstream os;
  os << "{\"error\":{\"code\":" << json_string(to_string(code)) << ",\"status\":" << exit_status(code)
     << ",\"message\":" << json_string(message);
  if (last)
    os << ",\"enclosure\":{\"lower\":" << json_double(last->lower) << ",\"upper\":" << json_double(last->upper)
       << ",\"value\":" << json_double(last->value) << ",\"refinements\":" << last->refinements << "}";
  os << "}}";
  return os.str();
}

inline std::string pretty(const JobReport& r) {
  using namespace detail;
  std::ostringstream os;
  os << to_string(r.kind) << " integral in [" << json_double(r.lower) << ", " << json_double(r.upper) << "]\n"
     << "value        " << json_double(r.value) << (r.exact ? "  (exact finite sum)" : "") << "\n"
     << "refinements  " << r.refinements << "\n"
     << "partition    " << r.partition_size << " points\n";
  for (const auto& [k, v] : r.check_residuals)
    os << "check " << k << ": residual " << json_double(v) << " (allowance " << json_double(r.check_allowances.at(k))
       << ")\n";
  for (const auto& w : r.warnings) os << "warning: " << w << "\n";
  return os.str();
}

}  // namespace tsrs
