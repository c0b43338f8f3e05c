#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"

namespace {

namespace fs = std::filesystem;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = otbdp::cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(OTBDP_TEST_DATA_DIR) / "cli_data";
    fs::create_directories(dir_);
    std::ofstream atoms(dir_ / "atoms10.csv");
    atoms << "x1,x2\n";
    for (int i = 0; i < 10; ++i) atoms << 0.05 + 0.09 * i << ',' << 0.9 - 0.08 * i << '\n';
  }
  std::string path(const char* name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

}  // namespace

TEST_F(Cli, BdpPointCubeExample) {
  const auto r = run({"bdp", "point", "--reference", "cube:2", "--atoms", path("atoms10.csv"), "--u", "0.3,0.4"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"bdp\": 0.3"), std::string::npos) << r.out;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["config"]["u"], "0.3,0.4");
  EXPECT_EQ(doc["config"]["seed"], 1);
  EXPECT_EQ(doc["schema_version"], 1);
}

TEST_F(Cli, UsageErrorsExitTwo) {
  const auto r = run({"bdp", "point", "--reference", "cube:2", "--atoms", path("atoms10.csv"), "--u", "0.3,0.4", "--bogus"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("--bogus"), std::string::npos);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"trim", "--mode", "median", "--beta", "0.1", "--map", "m.json"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(Cli, DomainErrorsExitOneWithJson) {
  const auto r = run({"bdp", "point", "--reference", "cube:2", "--atoms", path("atoms10.csv"), "--u", "1.3,0.4"});
  EXPECT_EQ(r.code, 1);
  const auto doc = nlohmann::json::parse(r.err);
  EXPECT_EQ(doc["error"], "OutsideSupport");
  const auto missing = run({"depth", "--reference", "cube:2", "--u", "0.3"});
  EXPECT_EQ(missing.code, 1);
  EXPECT_EQ(nlohmann::json::parse(missing.err)["error"], "DimensionMismatch");
  EXPECT_EQ(nlohmann::json::parse(run({"depth", "--reference", "disc:2", "--u", "0.3"}).err)["error"], "ParseError");
}

TEST_F(Cli, SolveIsByteIdenticalAndFeedsOtherCommands) {
  const std::vector<std::string> args{"sdot", "solve", "--reference", "cube:2", "--atoms", path("atoms10.csv"),
                                      "--budget", "100000", "--seed", "3", "--out", path("map.json")};
  ASSERT_EQ(run(args).code, 0);
  std::ifstream a(path("map.json"));
  const std::string first((std::istreambuf_iterator<char>(a)), {});
  ASSERT_EQ(run(args).code, 0);
  std::ifstream b(path("map.json"));
  const std::string second((std::istreambuf_iterator<char>(b)), {});
  EXPECT_EQ(first, second);
  const auto doc = nlohmann::json::parse(first);
  EXPECT_EQ(doc["weights"][0], 0.0);
  EXPECT_EQ(doc["config"]["budget"], 100000);

  const auto m = run({"sdot", "map", "--map", path("map.json"), "--u", "0.5,0.5"});
  ASSERT_EQ(m.code, 0) << m.err;
  EXPECT_EQ(nlohmann::json::parse(m.out)["transport"].size(), 1u);
  const auto rk = run({"sdot", "ranks", "--map", path("map.json"), "--budget", "50000"});
  ASSERT_EQ(rk.code, 0) << rk.err;
  EXPECT_EQ(nlohmann::json::parse(rk.out)["ranks"].size(), 10u);
  const auto t = run({"trim", "--mode", "cube", "--beta", "0.2", "--map", path("map.json"), "--budget", "50000"});
  ASSERT_EQ(t.code, 0) << t.err;
  EXPECT_EQ(nlohmann::json::parse(t.out)["kept_indices"].size(), 8u);
}

TEST_F(Cli, DepthAndCurve) {
  const auto d = run({"depth", "--reference", "ball:3", "--u", "0,0.5,0"});
  ASSERT_EQ(d.code, 0);
  EXPECT_NEAR(nlohmann::json::parse(d.out)["depth"].get<double>(), 0.15625, 1e-8);
  const auto c = run({"bdp", "curve", "--kind", "ball", "--dims", "1,3", "--alphas", "3", "--n", "10"});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(c.out.rfind("# config ", 0), 0u);
  EXPECT_NE(c.out.find("kind,d,alpha,bdp\nball,1,0,0.5\n"), std::string::npos);
  EXPECT_NE(c.out.find("ball,3,0.5,0.20000000000000001\n"), std::string::npos);
}

TEST_F(Cli, EmpiricalVerdict) {
  const auto r = run({"bdp", "empirical", "--reference", "cube:2", "--atoms", path("atoms10.csv"), "--u", "0.5,0.5",
                      "--contaminate", "0,1,2,3,4,5,6,7,8,9", "--budget", "50000", "--delta", "0.1", "--out",
                      path("profile.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_TRUE(doc["predicted_breakdown"].get<bool>());
  EXPECT_TRUE(doc["diverges"].get<bool>());
  std::ifstream csv(path("profile.csv"));
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header.rfind("# config", 0), 0u);
}
