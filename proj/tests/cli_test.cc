// Copyright 2026 The Genomask Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int code;
  std::string out;
};

RunResult Cli(const std::string& args) {
  const std::string command = std::string(GENOMASK_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  RunResult r{-1, ""};
  if (pipe == nullptr) return r;
  char buffer[4096];
  std::size_t got;
  while ((got = fread(buffer, 1, sizeof(buffer), pipe)) > 0) r.out.append(buffer, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("genomask_cli_" + std::string(::testing::UnitTest::GetInstance()
                                              ->current_test_info()->name()));
    fs::create_directories(dir_);
    panel_ = (dir_ / "panel.txt").string();
    ASSERT_EQ(Cli("gen-panel --m 4 --n 8 --seed 11 --out " + panel_).code, 0);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path dir_;
  std::string panel_;
};

TEST_F(CliTest, GenPanelIsSeeded) {
  const std::string a = Cli("gen-panel --m 5 --n 12 --seed 3").out;
  EXPECT_EQ(a, Cli("gen-panel --m 5 --n 12 --seed 3").out);
  EXPECT_NE(a, Cli("gen-panel --m 5 --n 12 --seed 4").out);
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 5);
  EXPECT_EQ(Slurp(panel_).size(), 4u * 9u);
}

TEST_F(CliTest, MaskIsFaithfulAndSeeded) {
  const std::string input = "01101001";
  const RunResult r = Cli("mask --panel " + panel_ + " --k 3 --input " + input + " --seed 5");
  ASSERT_EQ(r.code, 0);
  const std::string y = r.out.substr(0, r.out.find('\n'));
  ASSERT_EQ(y.size(), input.size());
  EXPECT_EQ(y[2], '*');
  for (std::size_t i = 0; i < y.size(); ++i) EXPECT_TRUE(y[i] == '*' || y[i] == input[i]);
  EXPECT_EQ(r.out, Cli("mask --panel " + panel_ + " --k 3 --input " + input + " --seed 5").out);

  const auto doc = nlohmann::json::parse(
      Cli("mask --panel " + panel_ + " --k 3 --input " + input + " --seed 5 --json").out);
  EXPECT_EQ(doc.at("masked").get<std::string>(), y);
  EXPECT_EQ(doc.at("transcript").size(), input.size());
}

TEST_F(CliTest, TranscriptFileHasOneLinePerPosition) {
  const std::string path = (dir_ / "t.jsonl").string();
  ASSERT_EQ(Cli("mask --panel " + panel_ + " --k 1 --sample --seed 2 --transcript " + path).code,
            0);
  std::ifstream in(path);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    const auto entry = nlohmann::json::parse(line);
    EXPECT_EQ(entry.at("i").get<int>(), lines + 1);
    ++lines;
  }
  EXPECT_EQ(lines, 8);
}

TEST_F(CliTest, RateBoundAndLpAreOrdered) {
  const std::string small = (dir_ / "small.txt").string();
  ASSERT_EQ(Cli("gen-panel --m 3 --n 5 --seed 8 --out " + small).code, 0);
  const auto rate = nlohmann::json::parse(
      Cli("rate --panel " + small + " --k 2 --exact --json").out);
  const auto bound = nlohmann::json::parse(Cli("bound --panel " + small + " --k 2 --json").out);
  const std::string lp_text = Cli("lp --panel " + small + " --k 2").out;
  const auto lp = nlohmann::json::parse(lp_text);
  const double r = rate.at(0).at("rate").get<double>();
  const double b = bound.at(0).at("bound").get<double>();
  ASSERT_EQ(lp.at("status").get<std::string>(), "optimal");
  const double l = lp.at("rate").get<double>();
  EXPECT_LE(r, l + 1e-7);
  EXPECT_LE(l, b + 1e-7);
}

TEST_F(CliTest, ExperimentsAreByteIdentical) {
  for (const std::string args :
       {"experiment hardness --family 20 --seed 3",
        "experiment fig5 --m 6 --n 10 --epsilons 0.1,0.3 --thetas 0.01 --seed 2",
        "experiment fig4 --m 5 --n 20 --epsilons 0.1,0.3 --thetas 0.01 --runs 50 --seed 2",
        "experiment fig3 --m 5 --n 20 --omega 0,5,10 --runs 50 --seed 2",
        "experiment robustness --pairs 4 --length 4 --seed 9"}) {
    const std::string a_path = (dir_ / "a.csv").string();
    const std::string b_path = (dir_ / "b.csv").string();
    ASSERT_EQ(Cli(args + " --out " + a_path).code, 0) << args;
    ASSERT_EQ(Cli(args + " --out " + b_path).code, 0) << args;
    const std::string a = Slurp(a_path);
    EXPECT_FALSE(a.empty()) << args;
    EXPECT_EQ(a, Slurp(b_path)) << args;
    EXPECT_NE(a.find("seed"), std::string::npos) << args;
  }
}

TEST_F(CliTest, ExperimentJsonMirrorsCsv) {
  const std::string csv = Cli("experiment hardness --family 5 --seed 1").out;
  const auto doc = nlohmann::json::parse(Cli("experiment hardness --family 5 --seed 1 --json").out);
  ASSERT_TRUE(doc.is_array());
  EXPECT_EQ(doc.size(), 5u);
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), 6u);
  for (const auto& row : doc) EXPECT_EQ(row.at("e_star"), row.at("h_star"));
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(Cli("").code, 2);
  EXPECT_EQ(Cli("mask --bogus-flag").code, 2);
  EXPECT_EQ(Cli("mask --panel " + panel_ + " --k 1 --input 0101").code, 2);
  EXPECT_EQ(Cli("mask --panel " + panel_ + " --k 9 --input 01101001").code, 2);
  EXPECT_EQ(Cli("mask --panel /nonexistent/panel.txt --k 1 --input 0").code, 2);
  EXPECT_EQ(Cli("experiment nope").code, 2);
  EXPECT_EQ(Cli("mask --panel " + panel_ + " --k 1,2,3,4,5,6,7,8 --input 01101001").code, 0);

  const std::string long_panel = (dir_ / "long.txt").string();
  ASSERT_EQ(Cli("gen-panel --m 3 --n 20 --seed 1 --out " + long_panel).code, 0);
  EXPECT_EQ(Cli("mask --panel " + long_panel +
                " --k 1,2,3,4,5,6,7,8,9,10,11,12,13 --input 01010101010101010101")
                .code,
            3);
  EXPECT_EQ(Cli("lp --panel " + long_panel + " --k 1").code, 3);
  EXPECT_EQ(Cli("hardness --instance '{\"m\": 9, \"sets\": [[1,2,3,4,5,6,7,8,9]]}'").code, 3);
}

TEST_F(CliTest, HelpListsCsvColumns) {
  const RunResult r = Cli("experiment --help");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("erasure_rate"), std::string::npos);
  EXPECT_NE(r.out.find("lp_rate"), std::string::npos);
}

}  // namespace
