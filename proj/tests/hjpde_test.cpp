#include <gtest/gtest.h>

#include "hjdyn/error.hpp"
#include "hjdyn/hjpde.hpp"
#include "hjdyn/system_file.hpp"
#include "hjdyn/systems.hpp"

using namespace hjdyn;

TEST(Constraints, ParametrizedOscillator) {
  const HJPDESet set = build_constraints(instantiate("parametrized_oscillator"));
  ASSERT_EQ(set.constraints.size(), 1u);
  const Constraint& c = set.constraints[0];
  EXPECT_EQ(c.label, "H'_t");
  EXPECT_EQ(c.parameter, "t");
  EXPECT_EQ(c.generation, 0);
  EXPECT_EQ(c.expression, parse("p_t + p_q^2/2 + V(q)", {"V"}));
  EXPECT_EQ(c.hamiltonian, parse("p_q^2/2 + V(q)", {"V"}));
  ASSERT_EQ(set.phase.pairs.size(), 2u);
  EXPECT_TRUE(set.phase.pairs[0].parameter);
  EXPECT_FALSE(set.phase.pairs[1].parameter);
  EXPECT_EQ(set.phase.slots(), (std::vector<std::string>{"t", "q", "p_t", "p_q"}));
}

TEST(Constraints, ParametrizedRegularHasOneConstraint) {
  const HJPDESet set = build_constraints(instantiate("parametrized_regular", {{"n", "3"}}));
  ASSERT_EQ(set.constraints.size(), 1u);
  EXPECT_EQ(set.constraints[0].expression,
            parse("p_t + (p_q1^2 + p_q2^2 + p_q3^2)/2 + V(q1, q2, q3)", {"V"}));
}

TEST(Constraints, FreeRelativistic) {
  const HJPDESet set = build_constraints(instantiate("relativistic_free"));
  ASSERT_EQ(set.constraints.size(), 1u);
  EXPECT_EQ(set.constraints[0].label, "H'_0");
  EXPECT_EQ(set.constraints[0].expression, parse("p0 + sqrt(p1^2 + p2^2 + p3^2 + m^2*c^2)"));
}

TEST(CanonicalHamiltonian, VanishesForReparametrizationInvariantSystems) {
  EXPECT_EQ(build_constraints(instantiate("parametrized_oscillator")).vanishing.kind, ZeroKind::symbolic);
  EXPECT_EQ(build_constraints(instantiate("parametrized_regular")).vanishing.kind, ZeroKind::symbolic);
  EXPECT_TRUE(build_constraints(instantiate("relativistic_free")).vanishing.zero());
  EXPECT_TRUE(build_constraints(instantiate("relativistic_charged")).vanishing.zero());
}

TEST(CanonicalHamiltonian, RegularSystemKeepsItsEnergy) {
  const HJPDESet set = build_constraints(parse_system_file("coordinates = q\nlagrangian = qdot^2/2 - q^2/2\n"));
  EXPECT_TRUE(set.constraints.empty());
  EXPECT_EQ(set.canonical_hamiltonian, parse("p_q^2/2 + q^2/2"));
  EXPECT_EQ(set.vanishing.kind, ZeroKind::nonzero);
}

TEST(CanonicalHamiltonian, NeedsAnalyzedSystem) {
  EXPECT_THROW(canonical_hamiltonian(instantiate("parametrized_oscillator")), AnalysisError);
}

TEST(ClosedForms, DisagreementIsReported) {
  LagrangianSystem sys = instantiate("relativistic_free");
  sys.closed_forms.hamiltonians["qdot0"] = parse("sqrt(p1^2 + p2^2 + p3^2 + 2*m^2*c^2)");
  EXPECT_THROW(build_constraints(sys), AnalysisError);
}
