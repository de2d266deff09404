#include <gtest/gtest.h>

#include "hjdyn/error.hpp"
#include "hjdyn/zero.hpp"

using namespace hjdyn;

TEST(ZeroTest, SymbolicZero) {
  const ZeroVerdict v = is_zero(parse("(x+y)^2 - x^2 - 2*x*y - y^2"));
  EXPECT_EQ(v.kind, ZeroKind::symbolic);
  EXPECT_EQ(v.tag(), "symbolically-zero");
}

TEST(ZeroTest, NumericZeroUnderRoots) {
  // sqrt(x^2) - x vanishes only for positive x.
  ZeroTestOptions o;
  o.sampler.positive = {"x"};
  const Expr e = parse("sqrt(x^2*y) - x*sqrt(y)");
  const ZeroVerdict v = is_zero(e, o);
  EXPECT_TRUE(v.zero());
  ZeroTestOptions plain;
  plain.sampler.ranges["x"] = {-2.0, -0.5};
  EXPECT_FALSE(is_zero(e, plain).zero());
}

TEST(ZeroTest, NumericIdentityThroughCancellation) {
  // (1 - y^2/(1+y^2)) (1+y^2) = 1 after the canonical form keeps the fraction.
  const ZeroVerdict v = is_zero(parse("sqrt(1 - y^2/(1 + y^2)) - 1/sqrt(1 + y^2)"));
  EXPECT_EQ(v.kind, ZeroKind::numeric);
  EXPECT_EQ(v.probes, 20);
  EXPECT_LT(v.residual, 1e-12);
  EXPECT_EQ(v.tag(), "numerically-zero");
}

TEST(ZeroTest, NonzeroHasWitness) {
  const ZeroVerdict v = is_zero(parse("x*y - y*x + 1e-6*x"));
  EXPECT_EQ(v.kind, ZeroKind::nonzero);
  EXPECT_EQ(v.witness.count("x"), 1u);
  EXPECT_GT(v.residual, 1e-9);
}

TEST(ZeroTest, OpaqueFunctionsAreGeneric) {
  // True for any V, false for a specific one only.
  EXPECT_TRUE(is_zero(parse("d[V,0](x)*2*x - 2*x*d[V,0](x)", {"V"})).zero());
  EXPECT_FALSE(is_zero(parse("V(x) - V(-x)", {"V"})).zero());
}

TEST(ZeroTest, DeterministicForSeed) {
  const Expr e = parse("x^3 - y");
  ZeroTestOptions o;
  o.sampler.seed = 7;
  const ZeroVerdict a = is_zero(e, o);
  const ZeroVerdict b = is_zero(e, o);
  EXPECT_EQ(a.witness, b.witness);
}

TEST(ZeroTest, NoDomainRaises) {
  ZeroTestOptions o;
  o.max_retries = 5;
  EXPECT_THROW(is_zero(parse("sqrt(-1 - x^2) + x"), o), EvalError);
}

TEST(Sampler, RangePrecedence) {
  SamplerConfig c;
  c.ranges["a"] = {3.0, 4.0};
  c.positive = {"a", "b"};
  const Sampler s(c);
  EXPECT_EQ(s.range_of("a", {}).lo, 3.0);
  EXPECT_EQ(s.range_of("b", {}).lo, 0.5);
  EXPECT_EQ(s.range_of("r", {"r"}).lo, 0.1);
  EXPECT_EQ(s.range_of("z", {}).lo, -1.0);
}
