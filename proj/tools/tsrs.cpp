// tsrs: command line front end for time-scale Riemann–Stieltjes integration.
//
//   tsrs integrate [job.json] [--scale S --f F --g G --a A --b B --kind K --tol E --check C ...] [--pretty]
//   tsrs sums      [job.json] --points "t0,t1,...,tn" [...]
//   tsrs check     [job.json] [--check C ...] [...]

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tsrs/job.hpp"

namespace {

struct Inputs {
  std::string job_file;
  std::string scale, f, g, a, b, kind, tol, points;
  std::vector<std::string> checks;
  bool pretty = false;
};

void add_job_options(CLI::App* cmd, Inputs& in) {
  cmd->add_option("job", in.job_file, "JSON job file");
  cmd->add_option("--scale", in.scale, "time scale, e.g. qscale(2) or union(points(0); interval(1,2))");
  cmd->add_option("--f", in.f, "integrand f(t)");
  cmd->add_option("--g", in.g, "strictly increasing integrator g(t)");
  cmd->add_option("--a", in.a, "lower limit (integer, decimal or p/q)");
  cmd->add_option("--b", in.b, "upper limit (integer, decimal or p/q)");
  cmd->add_option("--kind", in.kind, "delta or nabla");
  cmd->add_option("--tol", in.tol, "target enclosure width");
  cmd->add_option("--check", in.checks, "by_parts, transition or comparison (repeatable)");
  cmd->add_flag("--pretty", in.pretty, "human-readable summary instead of JSON");
}

std::vector<double> parse_point_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(tsrs::parse_number(item));
  return out;
}

tsrs::JobSpec build_job(const Inputs& in, std::vector<std::string>& warnings) {
  tsrs::JobSpec job;
  std::vector<std::string> set;
  auto mark = [&](const std::string& v, const char* key) {
    if (!v.empty()) set.emplace_back(key);
    return !v.empty();
  };
  if (mark(in.scale, "scale")) job.scale = in.scale;
  if (mark(in.f, "f")) job.f = in.f;
  if (mark(in.g, "g")) job.g = in.g;
  if (mark(in.a, "a")) job.a = tsrs::parse_number(in.a);
  if (mark(in.b, "b")) job.b = tsrs::parse_number(in.b);
  if (mark(in.kind, "kind")) job.kind = tsrs::parse_kind(in.kind);
  if (mark(in.tol, "tol")) job.tol = tsrs::parse_number(in.tol);
  if (!in.checks.empty()) {
    set.emplace_back("checks");
    job.checks = in.checks;
  }
  if (mark(in.points, "points")) job.points = parse_point_list(in.points);
  if (!in.job_file.empty()) {
    std::ifstream file(in.job_file);
    if (!file) throw tsrs::Error(tsrs::ErrorCode::InvalidArgument, "cannot read job file '" + in.job_file + "'");
    std::stringstream buf;
    buf << file.rdbuf();
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::parse_error& e) {
      throw tsrs::SyntaxError(e.byte, e.what());
    }
    tsrs::merge_job_json(job, set, doc, warnings);
  }
  return job;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verified Riemann–Stieltjes delta/nabla integrals on time scales"};
  app.require_subcommand(1);
  Inputs in;
  auto* integrate_cmd = app.add_subcommand("integrate", "enclose the integral and run optional checks");
  auto* sums_cmd = app.add_subcommand("sums", "lower/upper Darboux–Stieltjes sums for an explicit partition");
  auto* check_cmd = app.add_subcommand("check", "run residual checks only");
  for (auto* cmd : {integrate_cmd, sums_cmd, check_cmd}) add_job_options(cmd, in);
  sums_cmd->add_option("--points", in.points, "comma-separated partition points");

  CLI11_PARSE(app, argc, argv);

  try {
    std::vector<std::string> warnings;
    tsrs::JobSpec job = build_job(in, warnings);
    if (sums_cmd->parsed()) {
      std::cout << tsrs::to_json(tsrs::run_sums(job)) << "\n";
      for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
      return 0;
    }
    tsrs::JobReport report = check_cmd->parsed() ? tsrs::run_checks_only(job) : tsrs::run(job);
    report.warnings.insert(report.warnings.begin(), warnings.begin(), warnings.end());
    std::cout << (in.pretty ? tsrs::pretty(report) : tsrs::to_json(report) + "\n");
    return 0;
  } catch (const tsrs::NoConvergenceError& e) {
    std::cerr << tsrs::error_json(e.code(), e.detail(), &e.result()) << "\n";
    return tsrs::exit_status(e.code());
  } catch (const tsrs::Error& e) {
    std::cerr << tsrs::error_json(e.code(), e.detail()) << "\n";
    return tsrs::exit_status(e.code());
  } catch (const std::exception& e) {
    std::cerr << tsrs::error_json(tsrs::ErrorCode::InvalidArgument, e.what()) << "\n";
    return tsrs::exit_status(tsrs::ErrorCode::InvalidArgument);
  }
}
