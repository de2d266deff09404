#include <gtest/gtest.h>

#include "hjdyn/error.hpp"
#include "hjdyn/legendre.hpp"
#include "hjdyn/system_file.hpp"
#include "hjdyn/systems.hpp"

using namespace hjdyn;

TEST(Coordinates, DefaultNames) {
  const Coordinate c = make_coordinate("q");
  EXPECT_EQ(c.velocity, "qdot");
  EXPECT_EQ(c.momentum, "p_q");
  EXPECT_EQ(c.label, "H'_q");
}

TEST(Momenta, OscillatorByHand) {
  // L = tdot (qprime^2 / (2 tdot^2) - V): p_q = qprime/tdot,
  // p_t = -qprime^2/(2 tdot^2) - V.
  const LagrangianSystem sys = instantiate("parametrized_oscillator");
  const auto p = conjugate_momenta(sys);
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[0].first, "p_t");
  EXPECT_EQ(p[0].second, parse("-qprime^2/(2*tdot^2) - V(q)", {"V"}));
  EXPECT_EQ(p[1].second, parse("qprime/tdot"));
}

TEST(Hessian, RanksOfTheTemplates) {
  EXPECT_EQ(hessian(instantiate("parametrized_oscillator")).rank, 1);
  EXPECT_EQ(hessian(instantiate("parametrized_regular", {{"n", "3"}})).rank, 3);
  EXPECT_EQ(hessian(instantiate("relativistic_free")).rank, 3);
  EXPECT_EQ(hessian(instantiate("relativistic_charged")).rank, 3);
}

TEST(Hessian, NullDirectionOfParametrizedSystem) {
  // Homogeneity: the velocity vector itself spans the kernel.
  const HessianReport h = hessian(instantiate("parametrized_oscillator"));
  ASSERT_EQ(h.null_directions.size(), 1u);
  const Bindings& b = h.samples.front();
  const double tdot = b.at("tdot"), qp = b.at("qprime");
  const auto& n = h.null_directions[0];
  EXPECT_NEAR(n[0] * qp - n[1] * tdot, 0.0, 1e-9);
}

TEST(Solve, OscillatorVelocity) {
  const LagrangianSystem sys = analyze_lagrangian(instantiate("parametrized_oscillator"));
  EXPECT_EQ(*sys.rank, 1);
  ASSERT_EQ(sys.unsolved.size(), 1u);
  EXPECT_EQ(sys.coordinates[sys.unsolved[0]].name, "t");
  EXPECT_EQ(sys.solved.at("qprime"), parse("p_q*tdot"));
}

TEST(Solve, RegularLinearSystem) {
  // p1 = 2 q1dot + q2dot, p2 = q1dot + q2dot.
  const LagrangianSystem sys = analyze_lagrangian(
      parse_system_file("coordinates = q1, q2\nlagrangian = q1dot^2 + q1dot*q2dot + q2dot^2/2 - q1*q2\n"));
  EXPECT_EQ(*sys.rank, 2);
  EXPECT_TRUE(sys.unsolved.empty());
  EXPECT_EQ(sys.solved.at("q1dot"), parse("p_q1 - p_q2"));
  EXPECT_EQ(sys.solved.at("q2dot"), parse("2*p_q2 - p_q1"));
}

TEST(Solve, RelativisticClosedForm) {
  const LagrangianSystem sys = analyze_lagrangian(instantiate("relativistic_free", {{"m", "1"}, {"c", "1"}}));
  EXPECT_EQ(sys.coordinates[sys.unsolved.at(0)].name, "q0");
  const Bindings at{{"p1", 3.0}, {"p2", 0.0}, {"p3", 0.0}, {"qdot0", 2.0}};
  EXPECT_NEAR(evaluate(sys.solved.at("qdot1"), at), 2.0 * 3.0 / std::sqrt(10.0), 1e-14);
}

TEST(Parametrize, HomogeneousOfDegreeOne) {
  const LagrangianSystem reg = parse_system_file("coordinates = q\nlagrangian = qdot^2/2 - q^4\n");
  const LagrangianSystem par = parametrize(reg);
  ASSERT_EQ(par.coordinates.size(), 2u);
  EXPECT_EQ(par.coordinates[0].name, "t");
  EXPECT_EQ(par.coordinates[1].velocity, "qprime");
  EXPECT_TRUE(par.positive.count("tdot"));
  const Expr scaled = substitute(par.lagrangian, {{"tdot", 3 * Expr::symbol("tdot")},
                                                  {"qprime", 3 * Expr::symbol("qprime")}});
  EXPECT_EQ(scaled, 3 * par.lagrangian);
  EXPECT_EQ(*analyze_lagrangian(par).rank, 1);
}

TEST(Parametrize, RejectsSingularOrClashingInput) {
  EXPECT_THROW(parametrize(parse_system_file("coordinates = a, b\nlagrangian = adot*b\n")), AnalysisError);
  EXPECT_THROW(parametrize(parse_system_file("coordinates = t\nlagrangian = tdot^2\n")), AnalysisError);
}

TEST(Parametrize, ExplicitTimeBecomesACoordinate) {
  const LagrangianSystem par =
      parametrize(parse_system_file("coordinates = q\nparameters = t\nlagrangian = t*qdot^2/2\n"));
  EXPECT_EQ(par.coordinates[0].name, "t");
  EXPECT_FALSE(par.parameters.count("t"));
  EXPECT_EQ(par.lagrangian, parse("t*qprime^2/(2*tdot)"));
}
