#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace {

struct Result {
  int exit_code;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(REACTSIM_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

const std::string kRecipe = std::string(REACTSIM_SOURCE_DIR) + "/recipes/titration.recipe";

}  // namespace

TEST(Cli, DbValidate) {
  const Result r = run("db validate");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, "65 reactions OK\n");
}

TEST(Cli, DbValidateListsFailures) {
  const Result r = run("db validate --db-reactions " + std::string(REACTSIM_TEST_FIXTURES) + "/unbalanced_reactions.json");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.out.find("reaction 2:"), std::string::npos);
  EXPECT_EQ(r.out.find("reaction 1:"), std::string::npos);
}

TEST(Cli, SpectrumToRgb) {
  const Result r = run("spectrum --blackbody 1000 --to-rgb");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, "255,2,0\n");
}

TEST(Cli, MixNamesReactionSixteen) {
  const Result r = run("mix --amounts 'Fe2+:5,MnO4-:1,H+:8,Cl-:18,K+:1' --volume 1");
  EXPECT_EQ(r.exit_code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["report"]["steps"][0]["reaction_id"], 16);
  EXPECT_EQ(j["report"]["steps"][0]["N"], 1.0);
}

TEST(Cli, MixAcceptsCompoundNames) {
  const Result r = run("mix --amounts 'FeCl2:0.05,KMnO4:0.01,HCl:0.08' --volume 0.1");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NEAR(nlohmann::json::parse(r.out)["delta_t_k"].get<double>(), 15.376, 1e-3);
}

TEST(Cli, ChargeImbalanceIsDomainFailure) {
  EXPECT_EQ(run("mix --amounts 'Fe2+:5,MnO4-:1,H+:8,Cl-:10,K+:1'").exit_code, 1);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("").exit_code, 2);
  EXPECT_EQ(run("mix").exit_code, 2);
  EXPECT_EQ(run("frobnicate").exit_code, 2);
  EXPECT_EQ(run("mix --amounts 'Fe2+'").exit_code, 2);
  EXPECT_EQ(run("spectrum --blackbody -3").exit_code, 2);
}

TEST(Cli, RunIsDeterministic) {
  const Result a = run("run " + kRecipe);
  const Result b = run("run " + kRecipe);
  EXPECT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_TRUE(nlohmann::json::parse(a.out)["ok"].get<bool>());
}

TEST(Cli, TrajectoryCsvToStdout) {
  const Result r = run("trajectory --amounts 'HCl:0.01,NaOH:0.01' --volume 1 --dt 1 --horizon 5 --csv -");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "t_s,Cl-,H+,H2O,Na+,OH-,pH,temp_c,r,g,b,a");
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 8);
}

TEST(Cli, DbShow) {
  EXPECT_NE(run("db show 16").out.find("5Fe^2+ + MnO4- + 8H+"), std::string::npos);
  EXPECT_NE(run("db show Fe3+").out.find("\"Fe^3+\""), std::string::npos);
  EXPECT_NE(run("db show KMnO4").out.find("MnO4-"), std::string::npos);
  EXPECT_EQ(run("db show Unobtainium").exit_code, 1);
}

TEST(Cli, RunWritesSnapshotAndCsv) {
  const auto dir = std::filesystem::temp_directory_path() / "reactsim_cli_run";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const Result r = run("run " + kRecipe + " --snapshot " + (dir / "snap.json").string() + " --csv " +
                       (dir / "csv").string());
  EXPECT_EQ(r.exit_code, 0);
  std::ifstream snap(dir / "snap.json");
  const auto j = nlohmann::json::parse(snap);
  EXPECT_EQ(j["clock_s"], 420.0);
  EXPECT_TRUE(std::filesystem::exists(dir / "csv" / "trajectory_1.csv"));
  std::ifstream csv(dir / "csv" / "trajectory_1.csv");
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "t_s,Cl-,H+,H2O,Na+,OH-,pH,temp_c,r,g,b,a");
  std::filesystem::remove_all(dir);
}

TEST(Cli, RecipeSyntaxErrorIsDomainFailure) {
  const auto file = std::filesystem::temp_directory_path() / "reactsim_bad.recipe";
  std::ofstream(file) << "tick 1\n";
  EXPECT_EQ(run("run " + file.string()).exit_code, 1);
  std::filesystem::remove(file);
}
