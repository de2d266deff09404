#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hjdyn/eom.hpp"
#include "hjdyn/error.hpp"
#include "hjdyn/system_file.hpp"
#include "hjdyn/systems.hpp"

using namespace hjdyn;

namespace {

EquationsOfMotion eom_of(std::string_view id, const TemplateParams& params = {}) {
  return derive_eom(build_constraints(instantiate(id, params)));
}

double slot(const Trajectory& tr, const PhaseState& s, std::string_view name) {
  for (std::size_t i = 0; i < tr.slots.size(); ++i)
    if (tr.slots[i] == name) return s.values[i];
  throw std::out_of_range(std::string(name));
}

IntegrateOptions span(double end, double step, std::size_t every = 1) {
  IntegrateOptions o;
  o.end = end;
  o.step = step;
  o.record_every = every;
  return o;
}

}  // namespace

TEST(Eom, OscillatorRates) {
  const EquationsOfMotion eom = eom_of("parametrized_oscillator", {{"V", "q^2/2"}});
  ASSERT_EQ(eom.generators.size(), 1u);
  EXPECT_EQ(eom.rate("t", "t"), Expr(1));
  EXPECT_EQ(concretize(eom.rate("t", "q"), eom), parse("p_q"));
  EXPECT_EQ(concretize(eom.rate("t", "p_q"), eom), parse("-q"));
  EXPECT_EQ(eom.rate("t", "p_t"), Expr(0));
  EXPECT_THROW(eom.rate("s", "q"), ConfigError);
}

TEST(Eom, RejectsNonIntegrableSet) {
  EXPECT_THROW(derive_eom(build_constraints(
                   parse_system_file("coordinates = q1, q2\nlagrangian = q1dot^2/2 + q1*q2\n"))),
               AnalysisError);
}

TEST(Initial, ConstrainedMomentumIsOnTheSurface) {
  const EquationsOfMotion eom = eom_of("parametrized_oscillator", {{"V", "q^2/2"}});
  const PhaseState s = initial_state(eom, {{"q", 1.0}, {"p_q", 2.0}}, 0.5);
  EXPECT_EQ(s.parameter, 0.5);
  EXPECT_EQ(s.values, (std::vector<double>{0.5, 1.0, -2.5, 2.0}));
  EXPECT_THROW(initial_state(eom, {{"x", 1.0}}, 0.0), ConfigError);
}

TEST(Integrate, StepIsShrunkToDivideTheSpan) {
  const EquationsOfMotion eom = eom_of("parametrized_oscillator", {{"V", "q^2/2"}});
  const PhaseState s = initial_state(eom, {{"q", 1.0}}, 0.0);
  const Trajectory tr = integrate(eom, s, span(1.0, 0.3));
  EXPECT_EQ(tr.samples.size(), 5u);
  EXPECT_DOUBLE_EQ(tr.step, 0.25);
  EXPECT_DOUBLE_EQ(tr.samples.back().parameter, 1.0);
  EXPECT_EQ(integrate(eom, s, span(1.0, 1e-3)).samples.size(), 1001u);
  EXPECT_THROW(integrate(eom, s, span(1.0, 0.0)), ConfigError);
  EXPECT_THROW(integrate(eom, s, span(1.0, -1.0)), ConfigError);
}

TEST(Integrate, RecordEvery) {
  const EquationsOfMotion eom = eom_of("parametrized_oscillator", {{"V", "q^2/2"}});
  const PhaseState s = initial_state(eom, {{"q", 1.0}}, 0.0);
  const Trajectory tr = integrate(eom, s, span(1.0, 0.01, 10));
  ASSERT_EQ(tr.samples.size(), 11u);
  EXPECT_NEAR(tr.samples[3].parameter, 0.3, 1e-14);
}

TEST(Integrate, OscillatorAgainstClosedForm) {
  const EquationsOfMotion eom = eom_of("parametrized_oscillator", {{"V", "q^2/2"}});
  const PhaseState s = initial_state(eom, {{"q", 0.3}, {"p_q", -1.2}}, 0.0);
  const Trajectory tr = integrate(eom, s, span(2 * std::numbers::pi, 1e-3, 100));
  for (const PhaseState& got : tr.samples) {
    const PhaseState want = reference_solution(eom, s, got.parameter);
    for (std::size_t i = 0; i < got.values.size(); ++i) EXPECT_NEAR(got.values[i], want.values[i], 1e-11);
    EXPECT_NEAR(got.values[1], 0.3 * std::cos(got.parameter) - 1.2 * std::sin(got.parameter), 1e-11);
  }
  EXPECT_LT(tr.max_residual, 1e-12);
  EXPECT_FALSE(tr.surface_violated);
}

TEST(Integrate, FreeParticleMomentaAreConstant) {
  const EquationsOfMotion eom = eom_of("relativistic_free", {{"m", "2"}, {"c", "1"}});
  const PhaseState s = initial_state(eom, {{"p1", 1.0}, {"p2", -2.0}, {"p3", 0.5}}, 0.0);
  const Trajectory tr = integrate(eom, s, span(3.0, 0.01));
  const double e = std::sqrt(1.0 + 4.0 + 0.25 + 4.0);
  const PhaseState& last = tr.samples.back();
  EXPECT_NEAR(slot(tr, last, "q1"), 3.0 * 1.0 / e, 1e-12);
  EXPECT_NEAR(slot(tr, last, "q2"), -3.0 * 2.0 / e, 1e-12);
  EXPECT_NEAR(slot(tr, last, "q3"), 3.0 * 0.5 / e, 1e-12);
  EXPECT_EQ(slot(tr, last, "p1"), 1.0);
  EXPECT_EQ(slot(tr, last, "p0"), -e);
  const PhaseState want = reference_solution(eom, s, 3.0);
  for (std::size_t i = 0; i < want.values.size(); ++i) EXPECT_NEAR(last.values[i], want.values[i], 1e-12);
}

TEST(Integrate, ActionOfFreeParticle) {
  // Z = -m^2 c^2 / E per unit q0.
  const EquationsOfMotion eom = eom_of("relativistic_free", {{"m", "1"}, {"c", "1"}});
  const PhaseState s = initial_state(eom, {{"p1", 3.0}}, 0.0);
  const Trajectory tr = integrate(eom, s, span(10.0, 0.1));
  EXPECT_NEAR(action_along(tr), -10.0 / std::sqrt(10.0), 1e-12);
}

TEST(Integrate, BlowUpIsAnEvalError) {
  const EquationsOfMotion eom = eom_of("parametrized_oscillator", {{"V", "-q^4"}});
  const PhaseState s = initial_state(eom, {{"q", 10.0}}, 0.0);
  EXPECT_THROW(integrate(eom, s, span(1.0, 1e-3)), EvalError);
}

TEST(Integrate, TinyToleranceFlagsTheSurface) {
  const EquationsOfMotion eom = eom_of("parametrized_oscillator", {{"V", "q^2/2"}});
  const PhaseState s = initial_state(eom, {{"q", 1.0}}, 0.0);
  IntegrateOptions opt = span(50.0, 0.1);
  opt.surface_tol = 1e-300;
  const Trajectory tr = integrate(eom, s, opt);
  EXPECT_TRUE(tr.surface_violated);
  EXPECT_EQ(tr.residuals.size(), tr.samples.size());
}

TEST(Reference, UnsupportedSystem) {
  const EquationsOfMotion eom = eom_of("parametrized_oscillator", {{"V", "q^4"}});
  EXPECT_THROW(reference_solution(eom, initial_state(eom, {}, 0.0), 1.0), ConfigError);
}

TEST(Gauge, ReparametrizedFreeParticle) {
  const EquationsOfMotion eom = eom_of("parametrized_regular", {{"n", "1"}, {"V", "q1^2/2"}});
  const Expr tau = Expr::symbol("tau");
  const GaugeReport r = gauge_independence_check(eom, {{"q1", 1.0}}, span(3.0, 1e-3),
                                                 {{"linear", tau}, {"cubic", tau + pow(tau, 3) / 10}}, 301);
  EXPECT_LT(r.max_deviation, 1e-8);
  EXPECT_EQ(r.grid.size(), 301u);
  EXPECT_THROW(gauge_independence_check(eom, {{"q1", 1.0}}, span(3.0, 1e-3),
                                        {{"linear", tau}, {"folded", tau - pow(tau, 3)}}, 301),
               ConfigError);
}
