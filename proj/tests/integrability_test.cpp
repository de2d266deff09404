#include <gtest/gtest.h>

#include <random>

#include "hjdyn/error.hpp"
#include "hjdyn/integrability.hpp"
#include "hjdyn/system_file.hpp"
#include "hjdyn/systems.hpp"

using namespace hjdyn;

namespace {

PhaseSpace two_pairs() { return PhaseSpace{{{"q1", "p1", false}, {"q2", "p2", false}}}; }

HJPDESet from_text(const char* text) { return build_constraints(parse_system_file(text)); }

}  // namespace

TEST(Bracket, Canonical) {
  const PhaseSpace ph = two_pairs();
  const Expr q1 = Expr::symbol("q1"), p1 = Expr::symbol("p1"), q2 = Expr::symbol("q2"),
             p2 = Expr::symbol("p2");
  EXPECT_EQ(poisson_bracket(q1, p1, ph), Expr(1));
  EXPECT_EQ(poisson_bracket(p1, q1, ph), Expr(-1));
  EXPECT_EQ(poisson_bracket(q1, p2, ph), Expr(0));
  EXPECT_EQ(poisson_bracket(q1, q2, ph), Expr(0));
  EXPECT_EQ(poisson_bracket(q1 * q1, p1 * p1, ph), 4 * q1 * p1);
}

TEST(Bracket, AntisymmetryLeibnizJacobi) {
  const PhaseSpace ph = two_pairs();
  std::mt19937_64 rng(5);
  const std::vector<Expr> atoms{Expr::symbol("q1"), Expr::symbol("p1"), Expr::symbol("q2"),
                                Expr::symbol("p2")};
  auto poly = [&] {
    std::uniform_int_distribution<int> c(-2, 2), a(0, 3);
    Expr e(0);
    for (int t = 0; t < 3; ++t) e = e + c(rng) * atoms[a(rng)] * atoms[a(rng)] + c(rng) * atoms[a(rng)];
    return e;
  };
  for (int i = 0; i < 25; ++i) {
    const Expr f = poly(), g = poly(), h = poly();
    EXPECT_EQ(poisson_bracket(f, g, ph), -poisson_bracket(g, f, ph));
    EXPECT_EQ(poisson_bracket(f * g, h, ph), f * poisson_bracket(g, h, ph) + g * poisson_bracket(f, h, ph));
    const Expr jacobi = poisson_bracket(f, poisson_bracket(g, h, ph), ph) +
                        poisson_bracket(g, poisson_bracket(h, f, ph), ph) +
                        poisson_bracket(h, poisson_bracket(f, g, ph), ph);
    EXPECT_EQ(jacobi, Expr(0));
  }
}

TEST(Surface, SolvesPrimaryForItsMomentum) {
  const HJPDESet set = build_constraints(instantiate("parametrized_oscillator"));
  const ConstraintSurface s(set.constraints, set.phase);
  EXPECT_EQ(s.project(Expr::symbol("p_t")), parse("-p_q^2/2 - V(q)", {"V"}));
  EXPECT_EQ(s.project(set.constraints[0].expression), Expr(0));
}

TEST(Variation, TemplatesAreIntegrable) {
  for (const std::string& id : template_ids()) {
    const IntegrabilityReport r = consistency_iterate(build_constraints(instantiate(id)));
    EXPECT_TRUE(r.integrable) << id;
    EXPECT_EQ(r.generations.size(), 1u) << id;
    EXPECT_TRUE(r.relations.empty()) << id;
  }
}

TEST(Variation, UnknownLabel) {
  const HJPDESet set = build_constraints(instantiate("parametrized_oscillator"));
  EXPECT_EQ(total_variation(set, "H'_t"), Expr(0));
  EXPECT_THROW(total_variation(set, "H'_x"), AnalysisError);
}

TEST(Iterate, GaugeSystemGainsOneFirstClassSecondary) {
  // p_q2 = 0; H0 = p_q1^2/2 + p_q1 q2 so {p_q2, H0} = -p_q1 gives p_q1 = 0.
  const HJPDESet set = from_text("coordinates = q1, q2\nlagrangian = (q1dot - q2)^2/2\n");
  const IntegrabilityReport r = consistency_iterate(set);
  ASSERT_EQ(r.generations.size(), 2u);
  ASSERT_EQ(r.generations[1].size(), 1u);
  const Constraint* c = r.set.find(r.generations[1][0]);
  ASSERT_NE(c, nullptr);
  EXPECT_EQ(c->expression * c->expression, parse("p_q1^2"));
  EXPECT_TRUE(r.integrable);
  EXPECT_TRUE(r.relations.empty());
  for (const auto& [label, tag] : r.classification.constraints) EXPECT_EQ(tag, ClassTag::first_class) << label;
}

TEST(Iterate, SyntheticChainAndRelation) {
  // q1dot^2/2 + q1 q2: p_q2 = 0 -> q1 = 0 -> p_q1 = 0 -> q2 = 0, then the
  // last variation is a multiple of dq2.
  const IntegrabilityReport r = consistency_iterate(from_text("coordinates = q1, q2\nlagrangian = q1dot^2/2 + q1*q2\n"));
  ASSERT_EQ(r.generations.size(), 4u);
  const std::vector<Expr> chain{parse("q1"), parse("p_q1"), parse("q2")};
  for (std::size_t g = 1; g < 4; ++g) {
    ASSERT_EQ(r.generations[g].size(), 1u);
    const Expr e = r.set.find(r.generations[g][0])->expression;
    EXPECT_TRUE(e == chain[g - 1] || e == -chain[g - 1]) << e.str();
  }
  EXPECT_FALSE(r.integrable);
  ASSERT_EQ(r.relations.size(), 1u);
  EXPECT_TRUE(depends_on(r.relations[0], "dq2"));
  for (const auto& [label, tag] : r.classification.constraints) EXPECT_EQ(tag, ClassTag::second_class) << label;
}

TEST(Iterate, ConstantConstraintIsAContradiction) {
  EXPECT_THROW(consistency_iterate(from_text("coordinates = q1, q2\nlagrangian = q1dot^2/2 + q2\n")),
               ContradictionError);
}

TEST(Classify, PrimaryOfParametrizedSystemIsFirstClass) {
  const Classification c = classify(build_constraints(instantiate("relativistic_charged")));
  ASSERT_EQ(c.constraints.size(), 1u);
  EXPECT_EQ(c.constraints[0].second, ClassTag::first_class);
  EXPECT_EQ(to_string(ClassTag::second_class), "second-class");
}
