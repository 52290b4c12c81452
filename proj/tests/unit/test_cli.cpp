/*
 * Copyright 2026 The agrnn Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "agrnn/cli.hpp"
#include "agrnn/datagen.hpp"
#include "json.hpp"

namespace agrnn {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("agrnn_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

TEST_F(CliTest, SimulateThenSelect) {
  const CliRun sim = cli({"simulate", "butterfly", "--n", "2000", "--seed", "7", "--out", path("b.csv")});
  ASSERT_EQ(sim.code, 0) << sim.err;
  const CliRun sel = cli({"select", path("b.csv"), "--target", "Y"});
  ASSERT_EQ(sel.code, 0) << sel.err;
  const auto j = nlohmann::json::parse(sel.out);
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["kind"], "selection");
  EXPECT_EQ(j["sigma"].size(), 8u);
  EXPECT_EQ(j["feature_names"][0], "X1");
  EXPECT_EQ(j["relevant"].size(), 8u);
}

TEST_F(CliTest, SelectMissingFileIsIoError) {
  const CliRun r = cli({"select", path("missing.csv")});
  EXPECT_EQ(r.code, kExitIo);
  EXPECT_NE(r.err.find("cannot open"), std::string::npos);
}

TEST_F(CliTest, UnknownSubcommandOrFlagIsUsageError) {
  CliRun r = cli({"frobnicate"});
  EXPECT_EQ(r.code, kExitInput);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  r = cli({"select", "--no-such-flag"});
  EXPECT_EQ(r.code, kExitInput);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  EXPECT_EQ(cli({}).code, kExitInput);
}

TEST_F(CliTest, HelpSucceeds) {
  const CliRun r = cli({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("benchmark"), std::string::npos);
}

TEST_F(CliTest, InputErrors) {
  std::ofstream(path("bad.csv")) << "a,b,y\n1,?,2\n";
  EXPECT_EQ(cli({"select", path("bad.csv"), "--target", "y"}).code, kExitInput);
  EXPECT_EQ(cli({"select", path("bad.csv"), "--target", "nope"}).code, kExitInput);
  EXPECT_EQ(cli({"select"}).code, kExitInput);
  EXPECT_EQ(cli({"select", "--generate", "friedman", "--d", "3"}).code, kExitInput);
  EXPECT_EQ(cli({"importance", "--generate", "butterfly", "--n", "50", "--feature", "X1",
                 "--repeats", "0"}).code,
            kExitInput);
  EXPECT_EQ(cli({"simulate", "friedman", "--seeds", "1,2", "--out", path("f.csv")}).code,
            kExitInput);
}

TEST_F(CliTest, NumericalFailureExitCode) {
  // A tiny bandwidth makes every leave-one-out weight vanish.
  std::ofstream(path("far.csv")) << "a,y\n0,1\n1,2\n";
  const CliRun r = cli({"select", path("far.csv"), "--target", "y", "--init-sigma", "1e-300"});
  EXPECT_EQ(r.code, kExitNumerical) << r.err;
}

TEST_F(CliTest, UnwritableOutputIsIoError) {
  const CliRun r = cli({"simulate", "friedman", "--n", "10", "--out", path("no/such/dir.csv")});
  EXPECT_EQ(r.code, kExitIo);
}

TEST_F(CliTest, SimulateSeveralSeeds) {
  const CliRun r = cli({"simulate", "friedman", "--n", "20", "--d", "6", "--seeds", "3,4",
                     "--out", path("f{seed}.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const Dataset a = load_csv(path("f3.csv"), "Y");
  const Dataset b = load_csv(path("f4.csv"), "Y");
  EXPECT_EQ(a.d(), 6u);
  EXPECT_EQ(a.features(), gen_friedman({20, 6, 1.0, 3}).features());
  EXPECT_NE(a.features(), b.features());
}

TEST_F(CliTest, SimulateToStdout) {
  const CliRun r = cli({"simulate", "butterfly", "--n", "5"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("X1,X2,J3,J4,J5,I6,I7,I8,Y\n", 0), 0u);
}

TEST_F(CliTest, BaselineScores) {
  ASSERT_EQ(cli({"simulate", "friedman", "--n", "300", "--d", "8", "--out", path("f.csv")}).code, 0);
  for (const std::string method : {"ftest", "mi", "rrelieff"}) {
    const CliRun r = cli({"baseline", path("f.csv"), "--method", method, "--k", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["method"], method);
    EXPECT_EQ(j["scores"].size(), 8u);
    EXPECT_EQ(j["selected"].size(), 3u);
  }
  const CliRun cfs = cli({"baseline", path("f.csv"), "--method", "cfs"});
  ASSERT_EQ(cfs.code, 0) << cfs.err;
  EXPECT_EQ(nlohmann::json::parse(cfs.out)["method"], "cfs");
  EXPECT_EQ(cli({"baseline", path("f.csv"), "--method", "ftest", "--k", "9"}).code, kExitInput);
}

TEST_F(CliTest, ImportanceReport) {
  const CliRun r = cli({"importance", "--generate", "butterfly", "--n", "120", "--feature", "X1",
                     "--repeats", "2", "--seed", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["kind"], "importance");
  EXPECT_EQ(j["baseline_runs"].size(), 2u);
  EXPECT_EQ(j["shuffled"]["mean"].size(), 8u);
}

TEST_F(CliTest, BenchmarkTwiceIsIdentical) {
  ASSERT_EQ(cli({"simulate", "friedman", "--n", "200", "--d", "10", "--seed", "2", "--out",
                 path("f.csv")}).code,
            0);
  const std::vector<std::string> args{"benchmark", path("f.csv"), "--methods", "as,rrelieff",
                                      "--repeats", "2", "--seed", "1", "--format", "json"};
  const CliRun a = cli(args);
  const CliRun b = cli(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto j = nlohmann::json::parse(a.out);
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["dataset"]["name"], "f");
  EXPECT_EQ(j["methods"].size(), 2u);

  const CliRun text = cli({"benchmark", path("f.csv"), "--methods", "cfs", "--repeats", "2"});
  ASSERT_EQ(text.code, 0);
  EXPECT_EQ(text.out.rfind("Method", 0), 0u);
}

TEST_F(CliTest, GlobalFlagsBeforeSubcommand) {
  const CliRun a = cli({"--seed", "5", "--threads", "2", "simulate", "friedman", "--n", "10"});
  const CliRun b = cli({"simulate", "friedman", "--n", "10", "--seed", "5"});
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const CliRun v = cli({"--verbose", "select", "--generate", "butterfly", "--n", "60"});
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.err.find("optimizer stopped"), std::string::npos);
}

TEST_F(CliTest, OutFlagWritesFile) {
  const CliRun r = cli({"select", "--generate", "friedman", "--n", "80", "--d", "6", "--out",
                     path("sel.json")});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path("sel.json"));
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j["sigma"].size(), 6u);
}

}  // namespace
}  // namespace agrnn
