#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "nmsim/cli.hpp"
#include "nmsim/errors.hpp"

using namespace nmsim;
using namespace nmsim::cli;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
  const auto p = std::filesystem::temp_directory_path() / ("nmsim_test_" + name);
  std::ofstream(p) << body;
  return p;
}

}  // namespace

TEST(Cli, RunCsvDefault) {
  const Result r = invoke({"run"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 7u);
  EXPECT_EQ(ls[0], kCsvHeader);
  EXPECT_EQ(ls[3].substr(0, 2), "2,");
}

TEST(Cli, RunStepsAndRegime) {
  const Result r = invoke({"run", "--steps", "3", "--regime", "reset", "--noise", "paper-defaults"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(r.out).size(), 5u);
}

TEST(Cli, RunJsonSchema) {
  const Result r = invoke({"run", "--format", "json", "--tomography"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema"], kRunSchema);
  EXPECT_EQ(j["rows"].size(), 6u);
  EXPECT_EQ(j["config"]["regime"], "coherent");
  EXPECT_TRUE(j["rows"][0].contains("reconstructed_sa"));
}

TEST(Cli, DeterministicOutput) {
  const std::vector<std::string> args{"run", "--noise", "paper-defaults", "--tomography-counts", "3000",
                                      "--seed", "11", "--format", "json"};
  EXPECT_EQ(invoke(args).out, invoke(args).out);
}

TEST(Cli, ConfigFileAndOverrides) {
  const auto cfg = temp_file("a.cfg", "# comment\nregime = reset\nsteps = 2\nalpha = 0.6\n");
  Result r = invoke({"run", "--config", cfg.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(r.out).size(), 4u);
  r = invoke({"run", "--config", cfg.string(), "--steps", "4"});
  EXPECT_EQ(lines(r.out).size(), 6u);
}

TEST(Cli, NoiseKnobsEnableNoise) {
  dynamics::SimConfig c;
  apply_config(c, {{"bs2_reflect_v", "0.6"}});
  EXPECT_TRUE(c.noise.enabled);
  EXPECT_EQ(c.noise.bs2_reflect_v, 0.6);
  EXPECT_EQ(c.noise.spurious_fraction, 0.05);
  dynamics::SimConfig d;
  EXPECT_THROW(apply_config(d, {{"noise", "off"}, {"bs2_reflect_v", "0.6"}}), ConfigError);
  EXPECT_THROW(apply_config(d, {{"stepz", "3"}}), ConfigError);
  EXPECT_THROW(apply_config(d, {{"steps", "3.5"}}), ConfigError);
}

TEST(Cli, KeyValueParsing) {
  std::istringstream ok("a = 1\n\n  b=two  # trailing\n");
  const auto kv = parse_key_values(ok, "mem");
  EXPECT_EQ(kv.at("a"), "1");
  EXPECT_EQ(kv.at("b"), "two");
  std::istringstream dup("a = 1\na = 2\n");
  EXPECT_THROW(parse_key_values(dup, "mem"), ConfigError);
  std::istringstream bad("just text\n");
  EXPECT_THROW(parse_key_values(bad, "mem"), ConfigError);
  EXPECT_EQ(parse_list("0.1, 0.2,0.3"), (std::vector<double>{0.1, 0.2, 0.3}));
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"frobnicate"}).code, 2);
  EXPECT_EQ(invoke({"run", "--steps", "x"}).code, 2);
  EXPECT_EQ(invoke({"run", "--alpha", "2"}).code, 2);
  EXPECT_EQ(invoke({"run", "--regime", "sideways"}).code, 2);
  EXPECT_EQ(invoke({"run", "--config", "/nonexistent/file.cfg"}).code, 2);
  EXPECT_EQ(invoke({"run", "--format", "xml"}).code, 2);
  EXPECT_EQ(invoke({"run", "--ideal", "--noise", "paper-defaults"}).code, 2);
  EXPECT_EQ(invoke({"tomo-demo", "--state", "ghz"}).code, 2);
  EXPECT_EQ(invoke({"run", "--help"}).code, 0);
}

TEST(Cli, CompileIsing) {
  Result r = invoke({"compile-ising", "--phi", "0.7853981633974483"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("1.52091700349"), std::string::npos);
  r = invoke({"compile-ising", "--phi", "0", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(nlohmann::json::parse(r.out)["params"]["J"].get<double>(), 1.5707963267948966, 1e-12);
  r = invoke({"compile-ising", "--phi", "3.5"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("no solution"), std::string::npos);
  EXPECT_EQ(invoke({"compile-ising", "--phi", "0.5", "--n", "0"}).code, 2);
}

TEST(Cli, TomoDemo) {
  for (const char* state : {"bell", "mixed", "step-4"}) {
    const Result r = invoke({"tomo-demo", "--state", state, "--counts", "10000", "--seed", "3"});
    ASSERT_EQ(r.code, 0) << state << r.err;
    EXPECT_NE(r.out.find("fidelity"), std::string::npos);
  }
  const Result exact = invoke({"tomo-demo", "--state", "bell"});
  const auto pos = exact.out.find("trace_distance");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_LT(std::stod(exact.out.substr(pos + 14)), 1e-12);
}

TEST(Cli, SweepWritesFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "nmsim_test_sweep";
  std::filesystem::remove_all(dir);
  const Result r = invoke({"sweep", "--param", "phase", "--values", "0,0.5,1", "--out-dir", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(r.out).size(), 4u);
  EXPECT_TRUE(std::filesystem::exists(dir / "phase_2.csv"));
  EXPECT_EQ(invoke({"sweep", "--param", "gamma", "--values", "1"}).code, 2);
}

TEST(Cli, OutputFile) {
  const auto p = std::filesystem::temp_directory_path() / "nmsim_test_out.csv";
  ASSERT_EQ(invoke({"run", "--out", p.string()}).code, 0);
  std::ifstream in(p);
  std::string first;
  std::getline(in, first);
  EXPECT_EQ(first, kCsvHeader);
}

TEST(Cli, RunInvariantsCheck) {
  dynamics::SimConfig c;
  auto recs = dynamics::run(c);
  EXPECT_NO_THROW(check_run_invariants(c, recs));
  recs.pop_back();
  EXPECT_THROW(check_run_invariants(c, recs), InvariantViolation);
}
