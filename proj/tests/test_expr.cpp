#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support/oracles.hpp"
#include "support/random_cases.hpp"
#include "tsrs/expr.hpp"

namespace {

using namespace tsrs;

TEST(Parse, Basics) {
  EXPECT_EQ(parse_expr("t"), Expr::var());
  EXPECT_EQ(parse_expr("t^2"), pow(Expr::var(), 2));
  EXPECT_EQ(parse_expr(" 2 * t + 1 "), Expr::constant(2) * Expr::var() + Expr::constant(1));
  EXPECT_EQ(parse_expr("-t^2"), -pow(Expr::var(), 2));
  EXPECT_EQ(parse_expr("t^(-1)"), pow(Expr::var(), -1));
  EXPECT_EQ(parse_expr("exp(ln(sqrt(t)))"), exp(ln(sqrt(Expr::var()))));
}

TEST(Parse, UnclosedParenAtEnd) {
  try {
    parse_expr("1/(1+t");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.code(), ErrorCode::SyntaxError);
    EXPECT_EQ(e.position(), 6u);
  }
}

TEST(Parse, Rejects) {
  for (const char* bad : {"", "t +", "sin(t)", "t^1.5", "x", "2 t", "((t)"}) {
    EXPECT_THROW(parse_expr(bad), SyntaxError) << bad;
  }
}

TEST(Parse, RoundTripsThroughPrinter) {
  for (const char* text : {"t^2 + t", "1/(1 + t)", "exp(-t)", "-2*t^2 + exp(t/2)", "(t - 1)^3", "ln(t + 2)*t"}) {
    Expr e = parse_expr(text);
    EXPECT_EQ(parse_expr(to_string(e)), e) << text << " -> " << to_string(e);
  }
}

TEST(Eval, Examples) {
  EXPECT_EQ(eval(parse_expr("t^2"), 0.5), 0.25);
  EXPECT_EQ(eval(parse_expr("exp(0)"), 7), 1);
  EXPECT_THROW(eval(parse_expr("1/t"), 0), Error);
  try {
    eval(parse_expr("1/t"), 0);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DomainError);
  }
  EXPECT_THROW(eval(parse_expr("ln(t)"), 0), Error);
  EXPECT_THROW(eval(parse_expr("sqrt(t)"), -1), Error);
}

TEST(EvalInterval, MonotonePowerIsExact) {
  Enclosure e = eval_interval(parse_expr("t^2"), 0, 0.5);
  EXPECT_EQ(e.lo, 0);
  EXPECT_EQ(e.hi, 0.25);
}

TEST(EvalInterval, DegenerateIsPointValue) {
  for (double a : {0.0, 0.3, -2.5, 1e10}) {
    Enclosure e = eval_interval(Expr::var(), a, a);
    EXPECT_EQ(e.lo, a);
    EXPECT_EQ(e.hi, a);
  }
}

TEST(EvalInterval, DependencyEffectStaysSound) {
  Enclosure e = eval_interval(parse_expr("t - t"), 0, 1);
  EXPECT_TRUE(e.contains(0));
  EXPECT_LE(e.width(), 2 + 1e-15);
}

TEST(EvalInterval, SingularityIsDomainError) {
  EXPECT_THROW(eval_interval(parse_expr("1/t"), -1, 1), Error);
  EXPECT_THROW(eval_interval(parse_expr("ln(t)"), 0, 1), Error);
}

// Interval bounds contain sampled point values.
TEST(EvalInterval, Soundness) {
  tsrs::testing::Rng rng(21);
  for (int trial = 0; trial < 1000; ++trial) {
    Expr f = tsrs::testing::random_f(rng);
    double lo = tsrs::testing::uniform_real(rng, 0, 2.5);
    double hi = lo + tsrs::testing::uniform_real(rng, 0, 0.5);
    Enclosure e = eval_interval(f, lo, hi);
    for (int k = 0; k <= 8; ++k) {
      double t = k == 8 ? hi : lo + (hi - lo) * k / 8;
      double v = eval(f, t);
      ASSERT_TRUE(e.contains(v)) << to_string(f) << " on [" << lo << ", " << hi << "] at " << t;
    }
  }
}

TEST(EvalInterval, WidthShrinksWithInterval) {
  Expr f = parse_expr("exp(t)*t^3 - 1/(1 + t)");
  double prev = INFINITY;
  for (double w = 0.5; w > 1e-6; w /= 4) {
    double width = eval_interval(f, 1, 1 + w).width();
    EXPECT_LT(width, prev);
    prev = width;
  }
  EXPECT_LT(prev, 1e-4);
}

TEST(Differentiate, Examples) {
  EXPECT_EQ(differentiate(parse_expr("t^2")), Expr::constant(2) * Expr::var());
  EXPECT_EQ(differentiate(parse_expr("exp(t)")), parse_expr("exp(t)"));
  Expr d = differentiate(parse_expr("t*ln(t)"));
  EXPECT_NEAR(eval(d, 1), 1, 1e-15);
  auto fn = [](double t) { return t * std::log(t); };
  EXPECT_NEAR(tsrs::testing::central_difference(fn, 1), 1, 1e-6);
}

TEST(Differentiate, AgreesWithFiniteDifference) {
  tsrs::testing::Rng rng(22);
  for (int trial = 0; trial < 200; ++trial) {
    Expr f = tsrs::testing::random_f(rng);
    Expr d = differentiate(f);
    double t = tsrs::testing::uniform_real(rng, 0.1, 2.5);
    double fd = tsrs::testing::central_difference([&](double x) { return eval(f, x); }, t);
    EXPECT_NEAR(eval(d, t), fd, 1e-6 * std::max(1.0, std::fabs(fd))) << to_string(f) << " at " << t;
  }
}

TEST(BoxDerivative, Examples) {
  Expr g = parse_expr("t^2");
  EXPECT_EQ(box_derivative(g, make_uniform(0, 3, 1), 1, BoxKind::Delta), 3);
  EXPECT_EQ(box_derivative(g, make_interval(0, 3), 1, BoxKind::Delta), 2);
  EXPECT_EQ(box_derivative(g, make_qscale(2), 0.5, BoxKind::Nabla), 0.75);
}

TEST(Compose, SubstitutesVariable) {
  Expr c = compose(parse_expr("t + 1"), parse_expr("t^2"));
  EXPECT_EQ(eval(c, 3), 10);
  EXPECT_TRUE(is_constant(differentiate(parse_expr("3*t + 2"))));
  EXPECT_FALSE(is_constant(parse_expr("t")));
}

}  // namespace
