// Copyright 2026 The reidbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// End-to-end tests of the command-line tool. The binary's path comes from
// the REIDBENCH_CLI environment variable set by the build.

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "json.hpp"
#include "reidbench/csv.h"
#include "reidbench/reid.h"
#include "reidbench/synthgen.h"
#include "test_util.h"

namespace reidbench {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const char* cli = std::getenv("REIDBENCH_CLI");
    if (cli == nullptr || !fs::exists(cli)) GTEST_SKIP() << "REIDBENCH_CLI not set";
    cli_ = cli;
  }

  // Runs the tool with `args`; stdout goes to `stdout_`, stderr to `stderr_`.
  int Run(const std::string& args) {
    const std::string cmd = "\"" + cli_ + "\" " + args + " >\"" +
                            (dir_ / "stdout.txt").string() + "\" 2>\"" +
                            (dir_ / "stderr.txt").string() + "\"";
    const int status = std::system(cmd.c_str());
    stdout_ = testing::ReadFile(dir_ / "stdout.txt");
    stderr_ = testing::ReadFile(dir_ / "stderr.txt");
    return status;
  }

  std::string Out(const std::string& name) const {
    return "--out \"" + (dir_ / name).string() + "\"";
  }
  fs::path Path(const std::string& name) const { return dir_ / name; }

  std::string cli_;
  testing::TempDir dir_;
  std::string stdout_, stderr_;
};

TEST_F(CliTest, GenProtectNonattackContract) {
  ASSERT_EQ(Run("--seed 3 " + Out("g") + " gen --blocks 200"), 0) << stderr_;
  ASSERT_TRUE(fs::exists(Path("g/microdata.csv")));
  ASSERT_EQ(Run("--seed 3 " + Out("p") + " protect --microdata \"" +
                Path("g/microdata.csv").string() + "\" --swap-rate 0.05 --sigma 2"),
            0)
      << stderr_;
  ASSERT_EQ(Run("--seed 3 " + Out("n") + " nonattack --tda \"" +
                Path("p/tda.csv").string() + "\" --gt \"" +
                Path("g/truth.csv").string() + "\" --threshold 5"),
            0)
      << stderr_;
  const auto j = nlohmann::json::parse(
      testing::ReadFile(Path("n/nonattack_summary.json")));
  EXPECT_EQ(j["threshold"], 5);
  EXPECT_TRUE(j["config_hash"].is_string());
  EXPECT_GT(j["total_population"].get<std::int64_t>(), 0);
  for (const char* c : {"0.75", "0.95", "1"}) {
    const double r = j["recall"][c].get<double>();
    EXPECT_GE(r, 0.0);
    EXPECT_LE(r, 1.0);
  }
  EXPECT_TRUE(fs::exists(Path("n/precision.csv")));
}

TEST_F(CliTest, ReconAndReidRoundTrip) {
  ASSERT_EQ(Run("--seed 4 " + Out("g") + " gen --blocks 50"), 0) << stderr_;
  const std::string micro = "\"" + Path("g/microdata.csv").string() + "\"";
  ASSERT_EQ(Run("--seed 4 " + Out("r") + " recon --microdata " + micro), 0)
      << stderr_;
  ASSERT_EQ(Run("--seed 4 " + Out("i") + " reid --recon \"" +
                Path("r/reconstructed.csv").string() + "\" --prior " + micro),
            0)
      << stderr_;
  const auto j = nlohmann::json::parse(testing::ReadFile(Path("i/reid.json")));
  EXPECT_LE(j["confirmed"].get<std::int64_t>(), j["putative"].get<std::int64_t>());
  EXPECT_LE(j["putative"].get<std::int64_t>(), j["prior_total"].get<std::int64_t>());
}

TEST_F(CliTest, PipelineIsDeterministic) {
  const std::string args = " pipeline";
  ASSERT_EQ(Run("--seed 9 --threads 1 " + Out("a") + args), 0) << stderr_;
  ASSERT_EQ(Run("--seed 9 --threads 8 " + Out("b") + args), 0) << stderr_;
  int files = 0;
  for (const auto& entry : fs::directory_iterator(Path("a"))) {
    ++files;
    const auto name = entry.path().filename().string();
    EXPECT_EQ(testing::ReadFile(entry.path()), testing::ReadFile(Path("b") / name))
        << name;
  }
  EXPECT_GE(files, 10);
  EXPECT_TRUE(fs::exists(Path("a/cdf.svg")));
  EXPECT_TRUE(fs::exists(Path("a/manifest.json")));
}

TEST_F(CliTest, RugglesLineMatchesLibrary) {
  ASSERT_EQ(Run("--seed 5 ruggles --blocks 500"), 0) << stderr_;
  DemographyConfig cfg = DemographyConfig::NationalLike();
  cfg.n_blocks = 500;
  cfg.seed = 5;
  const auto r = RugglesBaseline(cfg, 0.78, 1);
  EXPECT_NE(stdout_.find("ruggles: match_rate " + FormatDouble(r.match_rate())),
            std::string::npos)
      << stdout_;
}

TEST_F(CliTest, MissingSeedFails) {
  EXPECT_NE(Run(Out("g") + " gen --blocks 5"), 0);
  EXPECT_NE(stderr_.find("seed"), std::string::npos) << stderr_;
  EXPECT_FALSE(fs::exists(Path("g/microdata.csv")));
}

TEST_F(CliTest, EntropySeedIsReported) {
  ASSERT_EQ(Run("--entropy " + Out("g") + " gen --blocks 5"), 0) << stderr_;
  EXPECT_NE(stderr_.find("seed"), std::string::npos) << stderr_;
}

TEST_F(CliTest, BadFlagFails) {
  EXPECT_NE(Run("--seed 1 gen --no-such-flag"), 0);
  EXPECT_NE(Run("--seed 1 --threads 0 gen"), 0);
}

TEST_F(CliTest, FailureLeavesNoPartialOutputs) {
  fs::create_directories(Path("o"));
  testing::WriteFile(Path("bad.csv"), "person_id,block_id,age,sex,race,hispanic\n"
                                      "p1,b1,40,M,1,0\n"
                                      "p2,b1,notanumber,F,1,0\n");
  EXPECT_NE(Run("--seed 1 " + Out("o") + " protect --microdata \"" +
                Path("bad.csv").string() + "\""),
            0);
  EXPECT_NE(stderr_.find("error:"), std::string::npos);
  EXPECT_TRUE(fs::is_empty(Path("o")));
}

}  // namespace
}  // namespace reidbench
