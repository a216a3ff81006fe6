#include <gtest/gtest.h>

#include "tsrs/identities.hpp"

namespace {

using namespace tsrs;

const Expr t = Expr::var();
const Expr t2 = pow(Expr::var(), 2);

IntegratorConfig coarse(double tol) {
  IntegratorConfig cfg;
  cfg.tol = tol;
  return cfg;
}

TEST(Transition, IntegerGridExact) {
  CheckResult r = transition_residual(t, t2, make_uniform(0, 3, 1), 0, 3, BoxKind::Delta);
  EXPECT_EQ(r.residual, 0);
  EXPECT_EQ(r.lhs.value, 13);
  EXPECT_EQ(r.rhs.value, 13);
}

TEST(Transition, RealInterval) {
  CheckResult r = transition_residual(t, t2, make_interval(0, 1), 0, 1, BoxKind::Delta, coarse(1e-5));
  EXPECT_LT(r.residual, 2e-5);
  EXPECT_TRUE(r.holds());
  EXPECT_TRUE(r.rhs.encloses(2.0 / 3));
}

TEST(Transition, ConstantIntegrandOnQScale) {
  CheckResult r = transition_residual(Expr::constant(1), t2, make_qscale(2), 0, 1, BoxKind::Nabla);
  EXPECT_TRUE(r.holds());
  EXPECT_TRUE(r.lhs.encloses(1));
}

TEST(ByParts, IntegerGridDelta) {
  CheckResult r = by_parts_residual(t, t2, make_uniform(0, 3, 1), 0, 3, BoxKind::Delta);
  EXPECT_EQ(r.lhs.value, 13);
  EXPECT_EQ(r.rhs.value, 14);
  EXPECT_EQ(r.residual, 0);
}

TEST(ByParts, IntegerGridNabla) {
  CheckResult r = by_parts_residual(t, t2, make_uniform(0, 3, 1), 0, 3, BoxKind::Nabla);
  EXPECT_EQ(r.lhs.value, 22);
  EXPECT_EQ(r.rhs.value, 5);
  EXPECT_EQ(r.residual, 0);
}

TEST(ByParts, EmptyRange) {
  CheckResult r = by_parts_residual(t, t2, make_qscale(2), 0.5, 0.5, BoxKind::Delta);
  EXPECT_EQ(r.residual, 0);
}

TEST(ByParts, QScale) {
  for (BoxKind kind : {BoxKind::Delta, BoxKind::Nabla}) {
    CheckResult r = by_parts_residual(t, t2, make_qscale(2), 0, 1, kind);
    EXPECT_TRUE(r.holds()) << r.residual << " > " << r.allowance;
  }
}

TEST(Substitution, SquareMapOnIntegers) {
  CheckResult r = substitution_check(t, t, t2, make_points({1, 2, 3, 4}), 1, 4, BoxKind::Delta);
  EXPECT_EQ(r.residual, 0);
  EXPECT_EQ(r.lhs.value, 86);
  EXPECT_EQ(r.rhs.value, 86);
}

TEST(Substitution, IdentityMap) {
  CheckResult r = substitution_check(t, t2, t, make_qscale(2), 0, 1, BoxKind::Delta);
  EXPECT_EQ(r.residual, 0);
}

TEST(Substitution, AffineMapOfCluster) {
  CheckResult r = substitution_check(t, t2, parse_expr("2*t + 1"), make_qscale(2), 0, 1, BoxKind::Nabla);
  EXPECT_TRUE(r.holds());
}

TEST(Substitution, DecreasingMapRejected) {
  try {
    substitution_check(t, t, parse_expr("(t - 1)^2"), make_uniform(0, 1, 0.25), 0, 1, BoxKind::Delta);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PhiNotIncreasing);
  }
  EXPECT_NO_THROW(substitution_check(t, t, t2, make_uniform(0, 1, 0.25), 0, 1, BoxKind::Delta));
}

TEST(Substitution, NonAffineMapOfClusterUnsupported) {
  try {
    substitution_check(t, t, t2, make_qscale(2), 0, 1, BoxKind::Delta);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedScale);
  }
}

TEST(Comparison, IntegerGridOrdering) {
  ComparisonResult r = comparison_check(t, t2, make_uniform(0, 3, 1), 0, 3, coarse(1e-9));
  EXPECT_EQ(r.delta.value, 13);
  EXPECT_EQ(r.nabla.value, 22);
  EXPECT_NEAR(r.classical.value, 18, 1e-3);
  EXPECT_TRUE(r.classical.encloses(18));
  EXPECT_TRUE(r.holds());
}

TEST(Comparison, DecreasingIntegrandReverses) {
  ComparisonResult r = comparison_check(parse_expr("3 - t"), t2, make_uniform(0, 3, 1), 0, 3, coarse(1e-9));
  EXPECT_GT(r.delta.value, r.nabla.value);
  EXPECT_TRUE(r.holds());
}

}  // namespace
