#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "hjdyn/error.hpp"
#include "hjdyn/systems.hpp"

using namespace hjdyn;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "hjdyn");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "hjdyn_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

}  // namespace

TEST(Cli, AnalyzeWritesJson) {
  const Outcome o = run({"analyze", "--system", "template:parametrized_oscillator"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto j = nlohmann::json::parse(o.out);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["rank"], 1);
  EXPECT_EQ(j["vanishing"], "symbolically-zero");
  ASSERT_EQ(j["constraints"].size(), 1u);
  EXPECT_EQ(j["constraints"][0]["label"], "H'_t");
  EXPECT_EQ(parse(j["constraints"][0]["expression"].get<std::string>(), {"V"}),
            parse("p_t + p_q^2/2 + V(q)", {"V"}));
  EXPECT_EQ(j["integrability"]["integrable"], true);
  EXPECT_EQ(j["classification"]["constraints"][0]["tag"], "first-class");
}

TEST(Cli, AnalyzeContradictionExitsOne) {
  const fs::path sys = scratch("contradiction.sys");
  std::ofstream(sys) << "coordinates = q1, q2\nlagrangian = q1dot^2/2 + q2\n";
  const Outcome o = run({"analyze", "--system", sys.string()});
  EXPECT_EQ(o.code, cli::kContradiction);
  EXPECT_FALSE(o.err.empty());
}

TEST(Cli, IoErrorsExitTwo) {
  EXPECT_EQ(run({"analyze", "--system", "/nonexistent/x.sys"}).code, cli::kIoError);
  EXPECT_EQ(run({"analyze", "--system", "template:relativistic_free", "-o", "/nonexistent/dir/out.json"}).code,
            cli::kIoError);
}

TEST(Cli, BadInputExitsFour) {
  EXPECT_EQ(run({}).code, cli::kBadInput);
  EXPECT_EQ(run({"simulate", "--system", "template:nope"}).code, cli::kBadInput);
  EXPECT_EQ(run({"simulate", "--system", "template:relativistic_free", "--initial", "w=1"}).code, cli::kBadInput);
  EXPECT_EQ(run({"quantize", "--potential", "q^2/2", "--relativistic", "m=1,c=1"}).code, cli::kBadInput);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, SimulateFreeParticle) {
  const Outcome o = run({"simulate", "--system", "template:relativistic_free?m=1&c=1", "--initial", "p=3,0,0",
                         "--t-span", "0:1", "--dt", "0.1"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto rows = lines(o.out);
  ASSERT_EQ(rows.size(), 12u);
  EXPECT_EQ(rows[0], "q0,q1,q2,q3,p1,p2,p3,p0,Z,constraint_residual");
  EXPECT_EQ(rows[1].substr(0, 8), "0,0,0,0,");
  for (std::size_t i = 2; i < rows.size(); ++i) EXPECT_NE(rows[i].find(",3,0,0,"), std::string::npos) << rows[i];
}

TEST(Cli, SimulateOscillatorHeaderAndDeterminism) {
  const std::vector<std::string> args{"simulate", "--system", "template:parametrized_oscillator?V=q^2/2",
                                      "--initial", "q=1,p=0", "--t-span", "0:3", "--dt", "0.01",
                                      "--record-every", "10"};
  const fs::path a = scratch("a.csv"), b = scratch("b.csv");
  auto with = [&](const fs::path& p) {
    auto v = args;
    v.push_back("-o");
    v.push_back(p.string());
    return v;
  };
  ASSERT_EQ(run(with(a)).code, 0);
  ASSERT_EQ(run(with(b)).code, 0);
  const std::string text = slurp(a);
  EXPECT_EQ(text, slurp(b));
  const auto rows = lines(text);
  EXPECT_EQ(rows[0], "t,q,p_q,p_t,Z,constraint_residual");
  EXPECT_EQ(rows.size(), 32u);
  EXPECT_EQ(rows[1], "0,1,0,-0.5,0,0");
}

TEST(Cli, QuantizeSnapshots) {
  const Outcome o = run({"quantize", "--potential", "q^2/2", "--initial", "gaussian:center=0,width=1",
                         "--grid", "16", "--domain", "-4:4", "--dt", "0.01", "--steps", "10",
                         "--snapshot-every", "5"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto rows = lines(o.out);
  EXPECT_EQ(rows[0], "t,x,re,im");
  EXPECT_EQ(rows.size(), 1u + 3u * 16u);
  EXPECT_EQ(rows[1].substr(0, 5), "0,-4,");
}

TEST(Cli, QuantizeWarnsOnBoundaryContact) {
  const Outcome o = run({"quantize", "--potential", "0", "--initial", "gaussian:center=3.5,width=1",
                         "--grid", "64", "--domain", "-4:4", "--steps", "2"});
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.err.find("outer 10%"), std::string::npos);
}

TEST(Cli, VerifyOneCriterion) {
  const Outcome o = run({"verify", "--criterion", "8"});
  EXPECT_EQ(o.code, 0) << o.out;
  EXPECT_NE(o.out.find("1/1 criteria passed"), std::string::npos);
}

TEST(Cli, VerifyFailureExitsThree) {
  // An impossible surface tolerance makes criterion 6 fail.
  const Outcome o = run({"--tol-surface", "1e-300", "verify", "--criterion", "6"});
  EXPECT_EQ(o.code, cli::kVerifyFailed) << o.out;
}

TEST(CliParse, Ranges) {
  EXPECT_EQ(cli::parse_range("0:10"), std::make_pair(0.0, 10.0));
  EXPECT_EQ(cli::parse_range("-1.5:2e1"), std::make_pair(-1.5, 20.0));
  EXPECT_THROW(cli::parse_range("5"), ConfigError);
  EXPECT_THROW(cli::parse_range("3:1"), ConfigError);
}

TEST(CliParse, InitialValues) {
  const EquationsOfMotion eom = derive_eom(build_constraints(instantiate("relativistic_free")));
  const Bindings b = cli::parse_initial("q=1,2,0, p=3,0,-1", eom);
  EXPECT_EQ(b.at("q1"), 1.0);
  EXPECT_EQ(b.at("q2"), 2.0);
  EXPECT_EQ(b.at("p1"), 3.0);
  EXPECT_EQ(b.at("p3"), -1.0);
  EXPECT_EQ(cli::parse_initial("p2=4", eom).at("p2"), 4.0);
  EXPECT_THROW(cli::parse_initial("p=1,2,3,4", eom), ConfigError);
  EXPECT_THROW(cli::parse_initial("q=1,2", eom), ConfigError);
  EXPECT_THROW(cli::parse_initial("q=x", eom), ConfigError);
  EXPECT_EQ(cli::parse_assignments("m=2,c=3").size(), 2u);
}
