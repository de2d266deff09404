#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hjdyn/error.hpp"
#include "hjdyn/expr.hpp"

using namespace hjdyn;

namespace {

const Expr x = Expr::symbol("x");
const Expr y = Expr::symbol("y");
const Expr z = Expr::symbol("z");

}  // namespace

TEST(Canonical, CollectsLikeTerms) {
  EXPECT_EQ(2 * x + 3 * x, 5 * x);
  EXPECT_EQ(x - x, Expr(0));
  EXPECT_EQ(x * pow(x, -1), Expr(1));
  EXPECT_EQ((x + y) - (y + x), Expr(0));
  EXPECT_EQ(Expr(0.1) + Expr(0.2) - Expr(0.3), Expr(0));
}

TEST(Canonical, ExpandsProductsAndSmallPowers) {
  EXPECT_EQ(pow(x + y, 2), x * x + 2 * x * y + y * y);
  EXPECT_EQ((x + 1) * (x - 1), x * x - 1);
  EXPECT_EQ(pow(x + y, 2).str(), "x^2 + y^2 + 2*x*y");
}

TEST(Canonical, FoldsPowersAndRoots) {
  EXPECT_EQ(pow(pow(x, 2), 3), pow(x, 6));
  EXPECT_EQ(pow(sqrt(x), 2), x);
  EXPECT_EQ(pow(sqrt(x), 3), x * sqrt(x));
  EXPECT_EQ(sqrt(Expr(4)), Expr(2));
  EXPECT_EQ(pow(x, 0), Expr(1));
  EXPECT_EQ(pow(Expr(2), Expr(10)), Expr(1024));
}

TEST(Canonical, SqrtOfSquareNeedsPositivity) {
  const Expr e = sqrt(x * x);
  EXPECT_NE(e, x);
  EXPECT_EQ(simplify(e, Assumptions{{"x"}}), x);
  EXPECT_EQ(simplify(sqrt(4 * x * x * y), Assumptions{{"x"}}), 2 * x * sqrt(y));
}

TEST(Canonical, SimplifyIsIdempotentOnRawTrees) {
  const Expr r = raw::sum({raw::product({Expr(2), x}), raw::negate(x), raw::power(y, Expr(1))});
  const Expr s = simplify(r);
  EXPECT_EQ(s, x + y);
  EXPECT_EQ(simplify(s), s);
}

TEST(Print, DivisionAndNegation) {
  EXPECT_EQ((x / y).str(), "x/y");
  EXPECT_EQ((x - y).str(), "x - y");
  EXPECT_EQ((-x).str(), "-x");
  EXPECT_EQ((Expr(0.5) * pow(x, 2)).str(), "0.5*x^2");
  EXPECT_EQ(Expr::apply("V", {x, y}).str(), "V(x, y)");
  EXPECT_EQ(Expr::derivative("V", {0}, {x}).str(), "d[V,0](x)");
}

TEST(Parse, PrecedenceAndAssociativity) {
  EXPECT_EQ(parse("2^3^2"), Expr(512));
  EXPECT_EQ(parse("-x^2"), -(x * x));
  EXPECT_EQ(parse("x - y - z"), x - y - z);
  EXPECT_EQ(parse("x/y/z"), x / (y * z));
  EXPECT_EQ(parse("2*x^-1"), 2 / x);
  EXPECT_EQ(parse("1e-3*x"), Expr(1e-3) * x);
}

TEST(Parse, FunctionsAndDerivatives) {
  const Expr v = parse("V(q1, q2) + d[V,1](q1, q2)", {"V"});
  const Expr q1 = Expr::symbol("q1"), q2 = Expr::symbol("q2");
  EXPECT_EQ(v, Expr::apply("V", {q1, q2}) + Expr::derivative("V", {1}, {q1, q2}));
  EXPECT_EQ(parse("sqrt(x^2 + 1)"), sqrt(x * x + 1));
}

TEST(Parse, ErrorsCarryOffsets) {
  try {
    parse("x + foo(1)");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 4u);
  }
  EXPECT_THROW(parse("x +"), ParseError);
  EXPECT_THROW(parse("(x"), ParseError);
  EXPECT_THROW(parse("V + 1", {"V"}), ParseError);
  EXPECT_EQ(parse("V"), Expr::symbol("V"));
}

TEST(Calculus, Derivatives) {
  EXPECT_EQ(differentiate(pow(x, 3), "x"), 3 * x * x);
  EXPECT_EQ(differentiate(sqrt(x), "x"), Expr(0.5) / sqrt(x));
  EXPECT_EQ(differentiate(x * y + y, "y"), x + 1);
  const Expr v = Expr::apply("V", {x * x});
  EXPECT_EQ(differentiate(v, "x"), 2 * x * Expr::derivative("V", {0}, {x * x}));
  EXPECT_THROW(differentiate(pow(Expr(2), x), "x"), AnalysisError);
}

TEST(Calculus, SubstituteAndFunctions) {
  EXPECT_EQ(substitute(x * y, {{"y", x + 1}}), x * x + x);
  FunctionTable t{{"V", FunctionDef{{"u"}, pow(Expr::symbol("u"), 2) / 2}}};
  EXPECT_EQ(substitute_functions(Expr::apply("V", {y}) + x, t), x + Expr(0.5) * y * y);
  EXPECT_EQ(substitute_functions(Expr::derivative("V", {0}, {y}), t), y);
  EXPECT_DOUBLE_EQ(evaluate(Expr::apply("V", {y}), {{"y", 3.0}}, t), 4.5);
}

TEST(Evaluate, DomainErrors) {
  EXPECT_DOUBLE_EQ(evaluate(x * x + y, {{"x", 2.0}, {"y", 1.0}}), 5.0);
  EXPECT_THROW(evaluate(x, {}), EvalError);
  EXPECT_THROW(evaluate(sqrt(x), {{"x", -1.0}}), EvalError);
  EXPECT_THROW(evaluate(1 / x, {{"x", 0.0}}), EvalError);
  EXPECT_THROW(evaluate(Expr::apply("V", {x}), {{"x", 0.0}}), EvalError);
}

TEST(Queries, SymbolsAndFunctions) {
  const Expr e = parse("V(q) + p^2/2 + sqrt(m)", {"V"});
  EXPECT_EQ(free_symbols(e), (SymbolSet{"m", "p", "q"}));
  EXPECT_EQ(functions_used(e).at("V"), 1u);
  EXPECT_TRUE(depends_on(e, "q"));
  EXPECT_FALSE(depends_on(e, "t"));
  EXPECT_EQ(symbols_under_root(e), (SymbolSet{"m"}));
}

// ---- property suite over random raw trees ---------------------------------

namespace {

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  Expr tree(int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 7);
    switch (pick(rng_)) {
      case 0:
        return Expr(static_cast<double>(small(rng_)));
      case 1:
        return vars_[std::uniform_int_distribution<std::size_t>(0, 2)(rng_)];
      case 2:
      case 3:
        return raw::sum({tree(depth - 1), tree(depth - 1)});
      case 4:
      case 5:
        return raw::product({tree(depth - 1), tree(depth - 1)});
      case 6:
        return raw::power(tree(depth - 1), Expr(static_cast<double>(std::uniform_int_distribution<int>(2, 3)(rng_))));
      default:
        return raw::negate(tree(depth - 1));
    }
  }

  Bindings point() {
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    return {{"x", u(rng_)}, {"y", u(rng_)}, {"z", u(rng_)}};
  }

 private:
  std::mt19937_64 rng_;
  std::uniform_int_distribution<int> small{-3, 3};
  std::vector<Expr> vars_{x, y, z};
};

double scale_of(const Expr& e, const Bindings& b) {
  // Sum of absolute term values bounds the rounding in the expanded form.
  if (e.kind() != Kind::sum) return std::abs(evaluate(e, b));
  double s = 0.0;
  for (const Expr& c : e.children()) s += std::abs(evaluate(c, b));
  return s;
}

}  // namespace

TEST(Property, SimplifyPreservesValue) {
  Generator gen(11);
  for (int i = 0; i < 300; ++i) {
    const Expr r = gen.tree(4);
    const Expr s = simplify(r);
    for (int k = 0; k < 3; ++k) {
      const Bindings b = gen.point();
      const double want = evaluate(r, b);
      EXPECT_NEAR(evaluate(s, b), want, 1e-10 * (1.0 + scale_of(s, b))) << r.str() << " -> " << s.str();
    }
  }
}

TEST(Property, SimplifyIsIdempotentAndPrintRoundTrips) {
  Generator gen(12);
  for (int i = 0; i < 300; ++i) {
    const Expr s = simplify(gen.tree(4));
    EXPECT_EQ(simplify(s), s) << s.str();
    EXPECT_EQ(parse(s.str()), s) << s.str();
  }
}

TEST(Property, DerivativeMatchesCentralDifference) {
  Generator gen(13);
  for (int i = 0; i < 200; ++i) {
    const Expr s = simplify(gen.tree(3));
    const Expr ds = differentiate(s, "x");
    Bindings b = gen.point();
    const double h = 1e-5;
    Bindings lo = b, hi = b;
    lo["x"] -= h;
    hi["x"] += h;
    const double fd = (evaluate(s, hi) - evaluate(s, lo)) / (2 * h);
    EXPECT_NEAR(evaluate(ds, b), fd, 1e-5 * (1.0 + std::abs(fd))) << s.str();
  }
}

TEST(Property, OperatorsAgreeWithSimplifiedRawTrees) {
  Generator gen(14);
  for (int i = 0; i < 200; ++i) {
    const Expr a = gen.tree(3);
    const Expr b = gen.tree(3);
    EXPECT_EQ(a * b, simplify(raw::product({a, b})));
    EXPECT_EQ(a + b, simplify(raw::sum({a, b})));
    EXPECT_EQ(a - b, simplify(raw::sum({a, raw::negate(b)})));
  }
}
