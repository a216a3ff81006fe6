#include <gtest/gtest.h>

#include <set>

#include "tsrs/job.hpp"

namespace {

using namespace tsrs;

TEST(Job, ParsesFileFields) {
  JobSpec job = parse_job(R"j({"scale":"qscale(2)","f":"t","g":"t^2","a":"1/4","b":1,"kind":"nabla",
                              "tol":1e-6,"checks":["by_parts"]})j");
  EXPECT_EQ(job.scale, "qscale(2)");
  EXPECT_EQ(job.a, 0.25);
  EXPECT_EQ(job.b, 1);
  EXPECT_EQ(job.kind, BoxKind::Nabla);
  EXPECT_EQ(job.tol, 1e-6);
  EXPECT_EQ(job.checks, std::vector<std::string>{"by_parts"});
}

TEST(Job, FileWinsWithWarning) {
  JobSpec job;
  job.f = "1";
  std::vector<std::string> set{"f"}, warnings;
  merge_job_json(job, set, nlohmann::json::parse(R"j({"f":"t","g":"t"})j"), warnings);
  EXPECT_EQ(job.f, "t");
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("'f'"), std::string::npos);
}

TEST(Job, MalformedJson) {
  EXPECT_THROW(parse_job("{\"scale\": "), SyntaxError);
  try {
    parse_job(R"j({"kind":"sideways"})j");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
  }
}

TEST(Job, QScaleDelta) {
  JobReport r = run(parse_job(R"j({"scale":"qscale(2)","f":"t","g":"t^2","a":0,"b":1,"kind":"delta","tol":1e-9})j"));
  EXPECT_NEAR(r.value, 0.428571428, 1e-9);
  EXPECT_FALSE(r.exact);
  EXPECT_LE(r.lower, 3.0 / 7);
  EXPECT_GE(r.upper, 3.0 / 7);
}

TEST(Job, IntegerGridNablaWithChecks) {
  JobReport r = run(parse_job(R"j({"scale":"uniform(0,3,1)","f":"t","g":"t^2","a":0,"b":3,"kind":"nabla",
                                  "checks":["by_parts","transition","comparison"]})j"));
  EXPECT_EQ(r.value, 22);
  EXPECT_TRUE(r.exact);
  EXPECT_EQ(r.check_residuals.at("by_parts"), 0);
  EXPECT_EQ(r.check_residuals.at("transition"), 0);
  EXPECT_EQ(r.check_residuals.at("comparison"), 0);
  EXPECT_TRUE(r.warnings.empty());
}

TEST(Job, DecreasingIntegrator) {
  try {
    run(parse_job(R"j({"scale":"uniform(0,3,1)","f":"t","g":"-t","a":0,"b":3,"kind":"delta"})j"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GNotIncreasing);
  }
}

TEST(Job, OutputIsDeterministic) {
  JobSpec job = parse_job(R"j({"scale":"qscale(3)","f":"exp(t)","g":"t^2 + t","a":0,"b":1,"tol":1e-8})j");
  EXPECT_EQ(to_json(run(job)), to_json(run(job)));
  auto doc = nlohmann::json::parse(to_json(run(job)));
  EXPECT_EQ(doc.at("kind"), "delta");
  EXPECT_TRUE(doc.at("check_residuals").is_object());
}

TEST(Job, SumsOnExplicitPartition) {
  JobSpec job = parse_job(R"j({"scale":"qscale(2)","f":"t","g":"t^2","points":[0,"1/8","1/4","1/2",1]})j");
  DarbouxSums s = run_sums(job);
  EXPECT_EQ(s.lower, 219.0 / 512);
  EXPECT_EQ(s.upper, 219.0 / 512 + 1.0 / 1024);
}

TEST(Job, CheckOnlyRunsAllChecks) {
  JobReport r = run_checks_only(parse_job(R"j({"scale":"uniform(0,3,1)","f":"t","g":"t^2","a":0,"b":3})j"));
  EXPECT_EQ(r.check_residuals.size(), known_checks().size());
}

TEST(Errors, CodesAndStatusesAreDistinct) {
  std::set<std::string> names;
  std::set<int> statuses;
  for (int c = static_cast<int>(ErrorCode::InvalidRatio); c <= static_cast<int>(ErrorCode::InvalidArgument); ++c) {
    auto code = static_cast<ErrorCode>(c);
    names.insert(std::string(to_string(code)));
    statuses.insert(exit_status(code));
    EXPECT_GT(exit_status(code), 1);
    EXPECT_LT(exit_status(code), 126);
  }
  EXPECT_EQ(names.size(), 16u);
  EXPECT_EQ(statuses.size(), 16u);
}

TEST(Errors, ErrorJsonCarriesEnclosure) {
  IntegralResult last{0.5, 0.75, 0.625, false, 3, 9, BoxKind::Delta};
  auto doc = nlohmann::json::parse(error_json(ErrorCode::NoConvergence, "budget", &last));
  EXPECT_EQ(doc["error"]["code"], "NoConvergence");
  EXPECT_EQ(doc["error"]["status"], exit_status(ErrorCode::NoConvergence));
  EXPECT_EQ(doc["error"]["enclosure"]["lower"], 0.5);
}

}  // namespace
