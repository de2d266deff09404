#include <gtest/gtest.h>

#include "hjdyn/error.hpp"
#include "hjdyn/system_file.hpp"
#include "hjdyn/systems.hpp"

using namespace hjdyn;

TEST(Templates, Ids) {
  EXPECT_EQ(template_ids(), (std::vector<std::string>{"parametrized_regular", "parametrized_oscillator",
                                                      "relativistic_charged", "relativistic_free"}));
}

TEST(Templates, ParametrizedRegularDimension) {
  const LagrangianSystem s = instantiate("parametrized_regular", {{"n", "3"}});
  ASSERT_EQ(s.coordinates.size(), 4u);
  EXPECT_EQ(s.coordinates[0].name, "t");
  EXPECT_EQ(s.coordinates[3].name, "q3");
  EXPECT_EQ(instantiate("parametrized_regular").coordinates.size(), 3u);
}

TEST(Templates, GivenConstantsAreSubstituted) {
  const LagrangianSystem s = instantiate("relativistic_free", {{"m", "2"}, {"c", "3"}});
  EXPECT_FALSE(depends_on(s.lagrangian, "m"));
  EXPECT_FALSE(depends_on(s.lagrangian, "c"));
  const LagrangianSystem sym = instantiate("relativistic_free");
  EXPECT_TRUE(depends_on(sym.lagrangian, "m"));
}

TEST(Templates, PotentialFromExpression) {
  const LagrangianSystem s = instantiate("parametrized_oscillator", {{"V", "q^2/2"}});
  EXPECT_EQ(s.lagrangian, parse("qprime^2/(2*tdot) - tdot*V(q)", {"V"}));
  EXPECT_EQ(s.definitions.at("V").body, parse("q^2/2"));
}

TEST(Templates, InvalidParameters) {
  EXPECT_THROW(instantiate("pendulum"), ConfigError);
  EXPECT_THROW(instantiate("relativistic_free", {{"m", "-1"}}), ConfigError);
  EXPECT_THROW(instantiate("relativistic_free", {{"c", "0"}}), ConfigError);
  EXPECT_THROW(instantiate("relativistic_free", {{"m", "heavy"}}), ConfigError);
  EXPECT_THROW(instantiate("relativistic_free", {{"e", "1"}}), ConfigError);
  EXPECT_THROW(instantiate("parametrized_regular", {{"n", "0"}}), ConfigError);
  EXPECT_THROW(instantiate("parametrized_regular", {{"n", "1.5"}}), ConfigError);
  EXPECT_THROW(instantiate("parametrized_oscillator", {{"n", "2"}}), ConfigError);
  EXPECT_THROW(instantiate("parametrized_oscillator", {{"V", "x^2"}}), ConfigError);
  EXPECT_THROW(instantiate("parametrized_oscillator", {{"V", "q^"}}), ParseError);
}

TEST(Uri, SplitsAndDecodes) {
  const auto [id, params] = parse_template_uri("template:relativistic_charged?m=2&A0=-q1%2Bq2");
  EXPECT_EQ(id, "relativistic_charged");
  EXPECT_EQ(params.at("m"), "2");
  EXPECT_EQ(params.at("A0"), "-q1+q2");
  EXPECT_EQ(parse_template_uri("template:relativistic_free").second.size(), 0u);
  EXPECT_THROW(parse_template_uri("template:x?m"), ConfigError);
}

TEST(SystemFile, FullExample) {
  const LagrangianSystem s = parse_system_file(
      "# anharmonic\n"
      "coordinates = x\n"
      "parameters = k=2, g\n"
      "functions = W\n"
      "W(u) = u^4\n"
      "lagrangian = xdot^2/2 - k*x^2/2 - g*W(x)  # trailing\n");
  ASSERT_EQ(s.coordinates.size(), 1u);
  EXPECT_EQ(s.coordinates[0].velocity, "xdot");
  EXPECT_EQ(s.parameter_values.at("k"), 2.0);
  EXPECT_TRUE(s.parameters.count("g"));
  EXPECT_EQ(s.definitions.at("W").params, (std::vector<std::string>{"u"}));
}

TEST(SystemFile, PrimeVelocities) {
  const LagrangianSystem s = parse_system_file("coordinates = t, q\nlagrangian = qprime^2/(2*tprime)\n");
  EXPECT_EQ(s.coordinates[0].velocity, "tprime");
  EXPECT_EQ(s.coordinates[1].velocity, "qprime");
}

TEST(SystemFile, Errors) {
  EXPECT_THROW(parse_system_file("coordinates = q\n"), ConfigError);
  EXPECT_THROW(parse_system_file("coordinates = q\nlagrangian = qdot^2 + r\n"), ConfigError);
  EXPECT_THROW(parse_system_file("coordinates = q\ncoordinates = r\nlagrangian = qdot^2\n"), ConfigError);
  EXPECT_THROW(parse_system_file("coordinates = q\nmass = 1\nlagrangian = qdot^2\n"), ConfigError);
  EXPECT_THROW(parse_system_file("coordinates = q\nlagrangian = qdot^^2\n"), ParseError);
}

TEST(SystemFile, TemplateKey) {
  const LagrangianSystem s = parse_system_file("template = relativistic_free\nm = 3\n");
  EXPECT_EQ(s.id, "relativistic_free");
  EXPECT_FALSE(depends_on(s.lagrangian, "m"));
}

TEST(Load, SelectorKinds) {
  EXPECT_EQ(load_system("template:parametrized_oscillator").id, "parametrized_oscillator");
  EXPECT_THROW(load_system("/nonexistent/system.txt"), IoError);
}
