#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "loghm/cli.hpp"

using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "loghm");
  std::ostringstream out, err;
  const int code = loghm::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

json config_line(const std::string& out) {
  const auto first = lines(out).at(0);
  EXPECT_EQ(first.rfind("# config: ", 0), 0u);
  return json::parse(first.substr(10));
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("loghm_test_" + name);
}

}  // namespace

TEST(Cli, Table1Csv) {
  const auto r = run({"table1"});
  EXPECT_EQ(r.code, 0);
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 4u);
  EXPECT_EQ(l[0], "r,theta,V");
  EXPECT_NE(l[2].find("-0.447807"), std::string::npos);
  EXPECT_NE(l[3].find("-0.510244"), std::string::npos);
}

TEST(Cli, VerifyExitCodes) {
  EXPECT_EQ(run({"verify", "--map", "f_alpha", "--alpha", "0.5", "--check", "starlike", "--angles", "90"}).code, 0);
  EXPECT_EQ(run({"verify", "--map", "counterexample", "--check", "convex", "--angles", "90"}).code, 1);
  const auto bad = run({"verify", "--map", "nope", "--check", "convex"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("nope"), std::string::npos);
  EXPECT_EQ(run({"verify", "--map", "koebe_lh", "--radii", "0.5,1.2"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
}

TEST(Cli, VerifyEchoesConfig) {
  const auto r = run({"verify", "--map", "koebe_lh", "--check", "starlike", "--radii", "0.5,0.8", "--angles", "60"});
  EXPECT_EQ(r.code, 0);
  const json c = config_line(r.out);
  EXPECT_EQ(c["map"], "koebe_lh");
  EXPECT_EQ(c["radii"], json({0.5, 0.8}));
  EXPECT_EQ(c["angles"], 60);
  EXPECT_NE(r.out.find("evaluated   118"), std::string::npos);
  EXPECT_NE(r.out.find("skipped     2"), std::string::npos);
}

TEST(Cli, ConfigFilePrecedence) {
  const auto path = temp_file("cfg.json");
  {
    std::ofstream f(path);
    f << R"({"map": "f_alpha", "alpha": 0.25, "check": "starlike", "angles": 90, "json": true})";
  }
  const auto from_file = run({"verify", "--config", path.string()});
  EXPECT_EQ(from_file.code, 0);
  const json a = json::parse(from_file.out);
  EXPECT_EQ(a["config"]["alpha"], 0.25);
  EXPECT_EQ(a["config"]["angles"], 90);

  const auto flag_wins = run({"verify", "--config", path.string(), "--alpha", "0.5"});
  const json b = json::parse(flag_wins.out);
  EXPECT_EQ(b["config"]["alpha"], 0.5);
  EXPECT_EQ(b["config"]["check-alpha"], 0.5);
  EXPECT_EQ(b["config"]["angles"], 90);
  std::filesystem::remove(path);

  EXPECT_EQ(run({"verify", "--config", "/nonexistent/cfg.json"}).code, 2);
}

TEST(Cli, CoeffsJson) {
  const auto r = run({"coeffs", "--map", "koebe_lh", "--order", "5"});
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  for (const char* key : {"a", "b", "h", "g", "config"}) EXPECT_TRUE(j.contains(key)) << key;
  ASSERT_EQ(j["a"].size(), 5u);
  for (std::size_t n = 1; n <= 5; ++n) {
    EXPECT_NEAR(j["a"][n - 1][0].get<double>(), 2.0 + 1.0 / static_cast<double>(n), 1e-12);
    EXPECT_NEAR(j["b"][n - 1][0].get<double>(), 2.0 - 1.0 / static_cast<double>(n), 1e-12);
  }
  EXPECT_EQ(j["h"]["order"], 5);
  EXPECT_EQ(j["config"]["order"], 5);
}

TEST(Cli, CatalogListing) {
  const auto r = run({"catalog"});
  EXPECT_EQ(r.code, 0);
  for (const char* name : {"koebe_lh", "halfplane_lh", "two_slits_lh", "counterexample", "f_alpha"})
    EXPECT_NE(r.out.find(name), std::string::npos) << name;
  const json j = json::parse(run({"catalog", "--map", "halfplane_lh"}).out);
  EXPECT_EQ(j["type"], "log-harmonic");
}

TEST(Cli, ConstructEmit) {
  const auto path = temp_file("construct.json");
  const auto r = run({"construct", "--phi", "koebe", "--mu", "z", "--order", "12", "--emit", path.string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("# config: ", 0), 0u);
  std::ifstream in(path);
  const json j = json::parse(in);
  EXPECT_EQ(j["a"].size(), 12u);
  EXPECT_EQ(j["config"]["mu"], "z");
  std::filesystem::remove(path);
  EXPECT_EQ(run({"construct", "--phi", "koebe", "--mu", "2z"}).code, 2);
}

TEST(Cli, Bounds) {
  EXPECT_EQ(run({"bounds", "--kind", "coefficient", "--map", "f_alpha", "--alpha", "0.25"}).code, 0);
  EXPECT_EQ(run({"bounds", "--kind", "sufficient", "--a", "[1.1]", "--b", "[]"}).code, 1);
  EXPECT_EQ(run({"bounds", "--kind", "growth", "--mu", "z", "--radii", "0.5", "--angles", "36"}).code, 0);
}

TEST(Cli, RenderWritesFile) {
  const auto path = temp_file("pic.svg");
  const auto r = run({"render", "--map", "halfplane_lh", "--circles", "3", "--rays", "4", "--out", path.string()});
  EXPECT_EQ(r.code, 0);
  const json c = config_line(r.out);
  EXPECT_EQ(c["circles"], 3);
  EXPECT_EQ(c["format"], "svg");
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  EXPECT_NE(s.str().find("<svg"), std::string::npos);
  std::filesystem::remove(path);
  EXPECT_EQ(run({"render", "--map", "koebe_lh", "--viewport", "1,0,0,1"}).code, 2);
  EXPECT_EQ(run({"render", "--map", "koebe_lh", "--r-max", "1.0"}).code, 2);
}

TEST(Cli, ExploreJsonLines) {
  const auto r = run({"explore", "--trials", "3", "--seed", "7", "--cover-angles", "64"});
  EXPECT_EQ(r.code, 0);
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 5u);
  const json header = json::parse(l[0]);
  EXPECT_EQ(header["config"]["trials"], 3);
  EXPECT_EQ(header["config"]["seed"], 7);
  for (std::size_t i = 1; i <= 3; ++i) {
    const json t = json::parse(l[i]);
    EXPECT_EQ(t["seed"], 6 + i);
    EXPECT_EQ(t["trial"], i - 1);
    EXPECT_TRUE(t.contains("diff_ratio"));
    EXPECT_TRUE(t.contains("covering"));
  }
  const json summary = json::parse(l[4]);
  EXPECT_EQ(summary["summary"], true);
  EXPECT_EQ(summary["trials"], 3);
  EXPECT_EQ(summary["diff_violations"], 0);
  // reruns are byte-identical
  EXPECT_EQ(run({"explore", "--trials", "3", "--seed", "7", "--cover-angles", "64"}).out, r.out);
}

TEST(Cli, TraceCsv) {
  const auto r = run({"trace", "--map", "koebe_lh", "--r", "0.5", "--samples", "16"});
  EXPECT_EQ(r.code, 0);
  const auto l = lines(r.out);
  EXPECT_EQ(l[3], "theta,re,im");
  EXPECT_EQ(l.size(), 4u + 15u);  // theta = 0 is excluded
}
