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

#include "reidbench/synthgen.h"

#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "reidbench/config.h"
#include "reidbench/errors.h"
#include "test_util.h"

namespace reidbench {
namespace {

DemographyConfig Small(std::int64_t blocks, std::uint64_t seed) {
  DemographyConfig cfg = DemographyConfig::NationalLike();
  cfg.n_blocks = blocks;
  cfg.seed = seed;
  return cfg;
}

TEST(DemographyConfigTest, NationalLikeIsValid) {
  const auto cfg = DemographyConfig::NationalLike();
  EXPECT_NO_THROW(cfg.Validate());
  EXPECT_EQ(cfg.category_weights.size(), static_cast<std::size_t>(kNumCategories));
  EXPECT_EQ(cfg.block_size.values.front(), 1);
}

TEST(DemographyConfigTest, ValidationErrors) {
  auto cfg = DemographyConfig::NationalLike();
  cfg.male_probability = 1.5;
  EXPECT_THROW(cfg.Validate(), ConfigError);
  cfg = DemographyConfig::NationalLike();
  cfg.block_size = {{0, 3}, {0.5, 0.5}};
  EXPECT_THROW(cfg.Validate(), ConfigError);
  cfg = DemographyConfig::NationalLike();
  cfg.age.weights.back() += 0.1;
  EXPECT_THROW(cfg.Validate(), ConfigError);
  cfg = DemographyConfig::NationalLike();
  cfg.category_weights.pop_back();
  EXPECT_THROW(cfg.Validate(), ConfigError);
  cfg = DemographyConfig::NationalLike();
  cfg.majority_concentration = -1;
  EXPECT_THROW(cfg.Validate(), ConfigError);
}

TEST(DemographyConfigTest, FromConfigOverrides) {
  const auto cfg = DemographyConfig::FromConfig(
      Config::Parse("[gen]\nn_blocks = 12\nseed = 9\nages = [30]\n"
                    "age_weights = [1]\nmale_probability = 1\n"
                    "block_sizes = [2, 4]\nblock_size_weights = [0.5, 0.5]\n"
                    "majority_share = 0.6\nmajority_concentration = 0\n"),
      DemographyConfig::NationalLike());
  EXPECT_EQ(cfg.n_blocks, 12);
  EXPECT_EQ(cfg.seed, 9u);
  EXPECT_EQ(cfg.age.values, (std::vector<std::int64_t>{30}));
  EXPECT_EQ(cfg.male_probability, 1.0);
  EXPECT_EQ(cfg.majority_share, 0.6);
  EXPECT_THROW(DemographyConfig::FromConfig(
                   Config::Parse("[gen]\nages = [1, 2]\nage_weights = [1]\n"),
                   DemographyConfig::NationalLike()),
               ConfigError);
}

TEST(GeneratePopulationTest, DeterministicAcrossThreadCounts) {
  const auto a = GeneratePopulation(Small(300, 42), 1);
  const auto b = GeneratePopulation(Small(300, 42), 8);
  EXPECT_EQ(a.records, b.records);
  EXPECT_EQ(a.truth, b.truth);
  const auto c = GeneratePopulation(Small(300, 43), 1);
  EXPECT_NE(a.records, c.records);
}

TEST(GeneratePopulationTest, StructureAndIds) {
  const auto pop = GeneratePopulation(Small(50, 1));
  ASSERT_EQ(pop.block_ids.size(), 50u);
  EXPECT_EQ(pop.block_ids[0], SyntheticBlockId(0));
  EXPECT_EQ(SyntheticBlockId(12), "B00000012");
  std::set<std::string> ids;
  for (const auto& r : pop.records) {
    EXPECT_TRUE(ids.insert(r.person_id).second);
    EXPECT_EQ(r.person_id.rfind(r.block_id, 0), 0u);
    EXPECT_GE(r.age, 0);
  }
  // Every block has at least one person, so every block is in the table.
  EXPECT_EQ(pop.truth.size(), 50u);
}

TEST(GeneratePopulationTest, MajorityShareOneMakesHomogeneousBlocks) {
  auto cfg = Small(40, 3);
  cfg.majority_share = 1.0;
  const auto pop = GeneratePopulation(cfg);
  std::map<std::string, RaceEthnicityCode> major;
  for (std::size_t i = 0; i < pop.block_ids.size(); ++i) {
    major[pop.block_ids[i]] = pop.block_majority[i];
  }
  for (const auto& r : pop.records) EXPECT_EQ(r.category, major[r.block_id]);
}

TEST(GeneratePopulationTest, MinorityDrawsExcludeTheBlockMajority) {
  auto cfg = Small(60, 4);
  cfg.majority_share = 0.0;
  const auto pop = GeneratePopulation(cfg);
  std::map<std::string, RaceEthnicityCode> major;
  for (std::size_t i = 0; i < pop.block_ids.size(); ++i) {
    major[pop.block_ids[i]] = pop.block_majority[i];
  }
  for (const auto& r : pop.records) EXPECT_NE(r.category, major[r.block_id]);
}

TEST(GeneratePopulationTest, MarginalRatesMatchConfig) {
  auto cfg = Small(4000, 5);
  cfg.majority_concentration = 0;
  cfg.majority_share = 0.7;
  const auto pop = GeneratePopulation(cfg, 4);
  std::map<std::string, RaceEthnicityCode> major;
  for (std::size_t i = 0; i < pop.block_ids.size(); ++i) {
    major[pop.block_ids[i]] = pop.block_majority[i];
  }
  double male = 0, in_major = 0;
  for (const auto& r : pop.records) {
    male += r.sex == Sex::kMale;
    in_major += r.category == major[r.block_id];
  }
  const double n = static_cast<double>(pop.records.size());
  EXPECT_NEAR(male / n, cfg.male_probability, 0.01);
  EXPECT_NEAR(in_major / n, 0.7, 0.01);
}

TEST(GeneratePopulationTest, BetaSharesAverageToConfiguredMean) {
  auto cfg = Small(4000, 6);
  cfg.majority_share = 0.8;
  cfg.majority_concentration = 10;
  const auto pop = GeneratePopulation(cfg, 4);
  std::map<std::string, RaceEthnicityCode> major;
  for (std::size_t i = 0; i < pop.block_ids.size(); ++i) {
    major[pop.block_ids[i]] = pop.block_majority[i];
  }
  double in_major = 0;
  for (const auto& r : pop.records) in_major += r.category == major[r.block_id];
  EXPECT_NEAR(in_major / static_cast<double>(pop.records.size()), 0.8, 0.02);
}

TEST(TabulateTest, MatchesGroupByOracle) {
  std::mt19937_64 rng(7);
  const auto people = testing::RandomPopulation(rng, 80, 30);
  for (bool voting : {false, true}) {
    const BlockTable t = Tabulate(people, voting, Provenance::kSwap);
    EXPECT_EQ(t.provenance(), Provenance::kSwap);
    std::map<std::pair<std::string, int>, std::int64_t> oracle;
    std::set<std::string> blocks;
    for (const auto& p : people) {
      blocks.insert(p.block_id);
      if (!voting || p.age >= 18) ++oracle[{p.block_id, p.category.code()}];
    }
    EXPECT_EQ(t.size(), blocks.size());
    for (const auto& [id, h] : t) {
      for (int c = 0; c < kNumCategories; ++c) {
        auto it = oracle.find({id, c});
        EXPECT_EQ(h.counts[c], it == oracle.end() ? 0 : it->second);
      }
    }
  }
}

TEST(TabulateTest, BlockWithOnlyChildrenKeptAsEmpty) {
  const std::vector<PersonRecord> people = {
      testing::Person("p1", "kids", 4, Sex::kMale, 3),
      testing::Person("p2", "adult", 40, Sex::kFemale, 5)};
  const BlockTable t = Tabulate(people, true);
  ASSERT_NE(t.Find("kids"), nullptr);
  EXPECT_TRUE(t.At("kids").empty());
  EXPECT_EQ(t.At("adult").total(), 1);
}

}  // namespace
}  // namespace reidbench
