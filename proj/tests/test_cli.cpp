#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "disclab/cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = disclab::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("disclab_cli_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n' ? 1 : 0;
  return n;
}

}  // namespace

TEST(Cli, GenWritesPointFile) {
  const auto path = temp_path("pts8.csv");
  const auto r = run({"gen", "--sequence", "vdc", "--base", "2", "--count", "8", "--out", path});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const auto text = slurp(path);
  EXPECT_EQ(lines(text), 8u);
  EXPECT_EQ(text.substr(0, 10), "0.5\n0.25\n0");
  std::filesystem::remove(path);
}

TEST(Cli, GenJson) {
  const auto r = run({"--format", "json", "gen", "--sequence", "kronecker", "--alpha", "0.5", "--count", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["kind"], "kronecker");
  EXPECT_EQ(j["values"], (std::vector<double>{0.5, 0.0, 0.5}));
}

TEST(Cli, StarOnFourPoints) {
  const auto path = temp_path("pts4.csv");
  ASSERT_EQ(run({"gen", "--sequence", "vdc", "--count", "4", "--out", path}).code, 0);
  auto r = run({"star", "--in", path});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "0.25\n");
  r = run({"star", "--in", path, "--x", "0.5", "--n", "3"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "n,x,count_below,disc\n3,0.5,1,-0.5\n");
  r = run({"star", "--in", path, "--n", "3"});
  EXPECT_EQ(r.code, 1);
  r = run({"star", "--in", path, "--x", "0.5", "--n", "5"});
  EXPECT_EQ(r.code, 1);
  std::filesystem::remove(path);
}

TEST(Cli, BoundOptimizeJson) {
  const auto r = run({"bound", "--optimize", "--tol", "1e-8", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["a_star"].get<double>(), 3.71866, 1e-3);
  EXPECT_NEAR(j["c_star_lower"].get<double>(), 0.0646363, 1e-5);
  EXPECT_TRUE(j.contains("chi_a_star"));
  EXPECT_TRUE(j.contains("references"));
}

TEST(Cli, BoundScanAndPoint) {
  auto r = run({"bound", "--scan", "--lo", "3.1", "--hi", "3.9", "--samples", "9"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(r.out), 10u);
  EXPECT_EQ(r.out.substr(0, 4), "a,c\n");
  r = run({"bound", "--a", "3.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, 13), "a,chi_a,c_of_");
}

TEST(Cli, ExitCodes) {
  auto r = run({"star", "--bogus"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("--bogus"), std::string::npos) << r.err;

  r = run({"bound", "--a", "4.5"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("(3,4)"), std::string::npos) << r.err;

  r = run({"gen", "--sequence", "vdc", "--base", "1", "--count", "3"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("--base"), std::string::npos) << r.err;

  r = run({"star", "--in", "/nonexistent/disclab.txt"});
  EXPECT_EQ(r.code, 2);

  r = run({"variational", "--quantity", "qprime-strong", "--a", "3.5", "--beta", "0.4", "--gamma", "0.2",
           "--delta", "0.8", "--tau", "0.4"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("left side"), std::string::npos) << r.err;

  r = run({});
  EXPECT_EQ(r.code, 1);
  r = run({"--help"});
  EXPECT_EQ(r.code, 0);
}

TEST(Cli, ProfileAndVerify) {
  auto r = run({"profile", "--sequence", "vdc", "--count", "4", "--schedule", "all"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, 16), "n,n_dstar,ratio\n");
  EXPECT_EQ(lines(r.out), 5u);

  r = run({"verify", "--sequence", "vdc", "--count", "1024", "--a", "3.71866", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["holds"].get<bool>());
  EXPECT_GT(j["margin"].get<double>(), 0.0);

  r = run({"verify", "--range-split", "--values", "1,2,3", "--a0", "1", "--a2", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "lhs,rhs,holds\n2,2,true\n");
}

TEST(Cli, EnvelopeAndPtee) {
  auto r = run({"envelope", "--sequence", "vdc", "--count", "13", "--a", "3.71866", "--t", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, 45), "x_left,x_right,slope,value_left,jump_at_left\n");

  r = run({"envelope", "--sequence", "vdc", "--count", "13", "--a", "3.71866", "--t", "2", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_GE(j["jumps"]["at_least_threshold"].get<std::size_t>(), 7u);

  r = run({"envelope", "--in", "/dev/null", "--first", "1", "--last", "1"});
  EXPECT_NE(r.code, 0);

  r = run({"envelope", "--sequence", "vdc", "--count", "1", "--first", "1", "--last", "1", "--which", "max"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "x_left,x_right,slope,value_left,jump_at_left\n0,0.5,-1,0,0\n0.5,1,-1,0.5,1\n");

  r = run({"ptee", "--sequence", "kronecker", "--count", "200", "--a", "3.71866", "--t-max", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(r.out), 4u);
  EXPECT_EQ(r.out.find("false"), std::string::npos);
}

TEST(Cli, VariationalQuantities) {
  auto r = run({"variational", "--quantity", "chi", "--a", "3.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "a,chi_a\n3.5,0.16145833333333334\n");

  r = run({"variational", "--quantity", "q2", "--a", "3.5", "--chi", "0.25"});
  EXPECT_EQ(r.out, "a,t,chi,q2\n3.5,1,0.25,0.0234375\n");

  r = run({"variational", "--quantity", "delta", "--a", "3.5", "--beta", "0.3", "--gamma", "0.15"});
  EXPECT_EQ(r.out, "alpha,beta,gamma,delta\n0,0.3,0.15,0.5\n");

  r = run({"variational", "--quantity", "selector", "--a", "3.5", "--gamma", "0.5", "--delta", "0.6"});
  EXPECT_EQ(r.out, "stationary,clamped\n1.8,1\n");

  for (const char* q : {"q1", "strong-q"}) {
    r = run({"variational", "--quantity", q, "--a", "3.5", "--chi", "0.3333333333333333"});
    EXPECT_EQ(r.code, 0) << q << ": " << r.err;
  }
  r = run({"variational", "--quantity", "strong-q", "--a", "3.5", "--chi", "0.2"});
  EXPECT_EQ(r.code, 1);

  for (const char* q : {"qprime-strong", "qprime-admissible", "qdoubleprime"}) {
    r = run({"variational", "--quantity", q, "--a", "3.5", "--beta", "0.3333333333333333"});
    EXPECT_EQ(r.code, 0) << q << ": " << r.err;
    EXPECT_EQ(r.out.substr(0, 6), "x_left");
  }

  r = run({"variational", "--quantity", "real-count", "--a", "3.5", "--mode", "admissible"});
  EXPECT_EQ(r.out, "a,t,mode,minimum\n3.5,1,admissible,0.15\n");

  r = run({"variational", "--quantity", "oracle", "--a", "3.5", "--resolution", "16", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(nlohmann::json::parse(r.out)["minimum"].get<double>(), 0.1614, 2e-3);
}

TEST(Cli, ExtremalDumpRoundTripsThroughCheck) {
  const auto path = temp_path("extremal.csv");
  auto r = run({"variational", "--quantity", "extremal", "--a", "3.71866", "--t", "2", "--out", path});
  ASSERT_EQ(r.code, 0) << r.err;
  r = run({"variational", "--quantity", "check", "--a", "3.71866", "--t", "2", "--segments", path});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.find("false"), std::string::npos) << r.out;
  EXPECT_EQ(lines(r.out), 7u);

  r = run({"variational", "--quantity", "extremal", "--a", "3.5", "--t", "2", "--mode", "admissible", "--rounding",
           "nearest", "--out", path});
  ASSERT_EQ(r.code, 0) << r.err;
  r = run({"variational", "--quantity", "check", "--a", "3.5", "--t", "2", "--segments", path});
  EXPECT_NE(r.out.find("iv-unit-jumps,false"), std::string::npos) << r.out;
  std::filesystem::remove(path);
}

TEST(Cli, DeterministicOutputAcrossThreadCounts) {
  const std::vector<std::string> base{"envelope", "--sequence", "kronecker", "--count", "3000", "--first", "1",
                                      "--last",   "3000",       "--which",   "spread"};
  auto one = base;
  one.insert(one.begin(), {"--threads", "1"});
  auto many = base;
  many.insert(many.begin(), {"--threads", "7"});
  const auto a = run(one);
  const auto b = run(many);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(run(base).out, a.out);
  disclab::set_thread_limit(0);
}
