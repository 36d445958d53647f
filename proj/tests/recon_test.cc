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

#include "reidbench/recon.h"

#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>

#include "oracles.h"
#include "reidbench/config.h"
#include "reidbench/errors.h"
#include "test_util.h"

namespace reidbench {
namespace {

using testing::Cat;
using testing::Person;
constexpr Attribute kA = Attribute::kAge;
constexpr Attribute kS = Attribute::kSex;
constexpr Attribute kC = Attribute::kCategory;

ReleaseSpec Spec(std::vector<std::vector<Attribute>> marginals,
                 AgeBins bins = AgeBins::SingleYears()) {
  ReleaseSpec s;
  s.age_bins = std::move(bins);
  s.marginals = std::move(marginals);
  return s;
}

TEST(AgeBinsTest, SexByAgeTable) {
  const auto bins = AgeBins::SexByAgeTable();
  EXPECT_EQ(bins.size(), 23);
  EXPECT_EQ(bins.IndexOf(0), 0);
  EXPECT_EQ(bins.IndexOf(17), 3);
  EXPECT_EQ(bins.IndexOf(18), 4);
  EXPECT_EQ(bins.IndexOf(20), 5);
  EXPECT_EQ(bins.IndexOf(21), 6);
  EXPECT_EQ(bins.IndexOf(99), 22);
  EXPECT_EQ(bins.lower(3), 15);
  EXPECT_EQ(bins.upper(3), 17);
  EXPECT_FALSE(bins.upper(22).has_value());
  EXPECT_EQ(bins.Representative(3), 16);
  EXPECT_EQ(bins.Representative(22), 85);
  EXPECT_THROW(bins.IndexOf(-1), ValidationError);
}

TEST(AgeBinsTest, EdgeValidation) {
  EXPECT_THROW(AgeBins::FromLowerEdges({}), ConfigError);
  EXPECT_THROW(AgeBins::FromLowerEdges({1, 5}), ConfigError);
  EXPECT_THROW(AgeBins::FromLowerEdges({0, 5, 5}), ConfigError);
  const auto single = AgeBins::SingleYears(110);
  EXPECT_EQ(single.IndexOf(37), 37);
  EXPECT_EQ(single.Representative(37), 37);
}

TEST(ReleaseSpecTest, ValidationAndConfig) {
  EXPECT_THROW(Spec({{kA, kS}}).Validate(), ConfigError);       // no category
  EXPECT_THROW(Spec({{kS, kA}, {kC}}).Validate(), ConfigError);  // unsorted
  EXPECT_THROW(Spec({}).Validate(), ConfigError);
  EXPECT_NO_THROW(Spec({{kA}, {kS}, {kC}}).Validate());
  const auto spec = ReleaseSpec::FromConfig(
      Config::Parse("[recon]\nmarginals = [\"age\", \"sex, category\"]\n"
                    "age_bins = \"single_year\"\nvoting_age_only = true\n"),
      ReleaseSpec{});
  EXPECT_EQ(spec.marginals,
            (std::vector<std::vector<Attribute>>{{kA}, {kS, kC}}));
  EXPECT_TRUE(spec.voting_age_only);
  EXPECT_THROW(ReleaseSpec::FromConfig(
                   Config::Parse("[recon]\nmarginals = [\"age,height\"]\n"),
                   ReleaseSpec{}),
               ConfigError);
}

TEST(DeriveConstraintsTest, SinglePersonFullMarginalsAdmitsOneRecord) {
  const std::vector<PersonRecord> people = {
      Person("p", "b", 44, Sex::kFemale, 17)};
  const auto rel = PublishRelease(people, Spec({{kA, kS, kC}}));
  const auto c = DeriveConstraints(rel, "b");
  const auto r = SolveBlock(c, 100);
  ASSERT_EQ(r.solutions.size(), 1u);
  EXPECT_EQ(r.solutions[0],
            (Solution{ReconCell{44, Sex::kFemale, Cat(17)}}));
}

TEST(DeriveConstraintsTest, TwoPersonAgeSexInstanceHasTwoSolutions) {
  const std::vector<PersonRecord> people = {
      Person("p1", "b", 30, Sex::kMale, 2), Person("p2", "b", 40, Sex::kFemale, 2)};
  const auto rel = PublishRelease(people, Spec({{kA}, {kS}, {kC}}));
  const auto c = DeriveConstraints(rel, "b");
  const auto r = SolveBlock(c, 100);
  EXPECT_FALSE(r.unsat);
  EXPECT_FALSE(r.capped);
  ASSERT_EQ(r.solutions.size(), 2u);
  const std::set<Solution> got(r.solutions.begin(), r.solutions.end());
  const std::set<Solution> want = {
      {{30, Sex::kMale, Cat(2)}, {40, Sex::kFemale, Cat(2)}},
      {{30, Sex::kFemale, Cat(2)}, {40, Sex::kMale, Cat(2)}}};
  EXPECT_EQ(got, want);
}

TEST(DeriveConstraintsTest, TruthSatisfiesItsConstraints) {
  std::mt19937_64 rng(1);
  const auto people = testing::RandomPopulation(rng, 200, 4);
  const auto rel = PublishRelease(people, ReleaseSpec{});
  std::map<std::string, std::vector<ReconCell>> truth;
  for (const auto& p : people) {
    truth[p.block_id].push_back(
        {rel.spec.age_bins.IndexOf(p.age), p.sex, p.category});
  }
  for (const auto& [id, cells] : truth) {
    EXPECT_TRUE(Satisfies(DeriveConstraints(rel, id), cells)) << id;
  }
}

TEST(DeriveConstraintsTest, InconsistentMarginalsThrow) {
  const std::vector<PersonRecord> people = {
      Person("p1", "b", 30, Sex::kMale, 2), Person("p2", "b", 40, Sex::kFemale, 3)};
  auto rel = PublishRelease(people, Spec({{kA, kS}, {kS, kC}}));
  // Corrupt the second table so its sex totals disagree with the first.
  auto& counts = rel.blocks.at("b").marginals[1].counts;
  const auto key = counts.begin()->first;
  counts.erase(counts.begin());
  MarginalKey flipped = key;
  flipped[1] = 1 - flipped[1];
  counts[flipped] += 1;
  EXPECT_THROW(DeriveConstraints(rel, "b"), ValidationError);
  rel.blocks.at("b").total = 5;
  EXPECT_THROW(DeriveConstraints(rel, "b"), ValidationError);
  EXPECT_THROW(DeriveConstraints(rel, "missing"), AlignmentError);
}

TEST(SolveBlockTest, UnsatisfiableConstraintsReportUnsat) {
  BlockConstraints c;
  c.block_id = "b";
  c.total = 2;
  c.age_bins = AgeBins::SingleYears();
  // Joint age x sex says both are male aged 30; sex x category says one is
  // female. Individually sized right, jointly impossible.
  c.marginals = {Marginal{{kA, kS}, {{{30, 0, -1}, 2}}},
                 Marginal{{kS, kC}, {{{-1, 0, 5}, 1}, {{-1, 1, 5}, 1}}}};
  const auto r = SolveBlock(c, 10);
  EXPECT_TRUE(r.unsat);
  EXPECT_TRUE(r.solutions.empty());
}

TEST(SolveBlockTest, EmptyBlockHasOneEmptySolution) {
  BlockConstraints c;
  c.age_bins = AgeBins::SingleYears();
  c.marginals = {Marginal{{kA, kS}, {}}, Marginal{{kC}, {}}};
  const auto r = SolveBlock(c, 10);
  ASSERT_EQ(r.solutions.size(), 1u);
  EXPECT_TRUE(r.solutions[0].empty());
}

std::vector<std::vector<std::vector<Attribute>>> MarginalSuites() {
  return {{{kA, kS}, {kC}},      {{kA}, {kS}, {kC}},   {{kA, kS}, {kS, kC}},
          {{kA, kC}, {kS}},      {{kA, kS, kC}},       {{kA}, {kS, kC}},
          {{kA, kS}, {kA, kC}},  {{kA, kS}, {kA, kC}, {kS, kC}}};
}

TEST(SolveBlockTest, MatchesExhaustiveEnumeration) {
  std::mt19937_64 rng(2);
  const auto suites = MarginalSuites();
  std::uniform_int_distribution<std::size_t> suite(0, suites.size() - 1);
  std::uniform_int_distribution<int> size(1, 6), palette(1, 3);
  for (int trial = 0; trial < 150; ++trial) {
    const auto& marginals = suites[suite(rng)];
    std::vector<int> ages, cats;
    const int na = palette(rng), nc = palette(rng);
    std::uniform_int_distribution<int> age(0, 90), cat(0, kNumCategories - 1);
    for (int i = 0; i < na; ++i) ages.push_back(age(rng));
    for (int i = 0; i < nc; ++i) cats.push_back(cat(rng));
    std::vector<PersonRecord> people;
    std::vector<oracle::Tuple> tuples;
    const int n = size(rng);
    for (int i = 0; i < n; ++i) {
      const int a = ages[rng() % ages.size()];
      const int s = static_cast<int>(rng() % 2);
      const int c = cats[rng() % cats.size()];
      people.push_back(Person("p" + std::to_string(i), "b", a,
                              static_cast<Sex>(s), c));
      tuples.emplace_back(a, s, c);
    }
    const auto rel = PublishRelease(people, Spec(marginals));
    const auto constraints = DeriveConstraints(rel, "b");
    const auto r = SolveBlock(constraints, 1'000'000);
    ASSERT_FALSE(r.capped);
    for (const auto& sol : r.solutions) {
      EXPECT_TRUE(Satisfies(constraints, sol));
    }
    const std::set<Solution> got(r.solutions.begin(), r.solutions.end());
    EXPECT_EQ(got.size(), r.solutions.size()) << "duplicate solutions";
    EXPECT_EQ(got, oracle::AllSolutions(tuples, marginals)) << "trial " << trial;
  }
}

TEST(SolveBlockTest, UnderConstrainedBlockHasManySolutions) {
  // 20 people: four age-bin x sex cells of 5 and two categories of 10. The
  // joint table is any 4x2 table with those margins: 146 of them.
  std::vector<PersonRecord> people;
  const int ages[] = {30, 40};
  int i = 0;
  for (int a : ages) {
    for (Sex s : {Sex::kMale, Sex::kFemale}) {
      for (int k = 0; k < 5; ++k, ++i) {
        people.push_back(Person("p" + std::to_string(i), "b", a, s,
                                i % 2 == 0 ? 0 : 2));
      }
    }
  }
  const auto rel = PublishRelease(people, ReleaseSpec{});
  const auto c = DeriveConstraints(rel, "b");
  const auto all = SolveBlock(c, 1000);
  EXPECT_FALSE(all.capped);
  EXPECT_EQ(all.solutions.size(), 146u);
  const auto capped = SolveBlock(c, 100);
  EXPECT_TRUE(capped.capped);
  EXPECT_EQ(capped.solutions.size(), 100u);
}

TEST(ReconstructTest, FullyDeterminedReleaseReproducesTruth) {
  std::vector<PersonRecord> people;
  std::mt19937_64 rng(3);
  for (int b = 0; b < 50; ++b) {
    people.push_back(Person("p" + std::to_string(b), "b" + std::to_string(b),
                            static_cast<int>(rng() % 90),
                            static_cast<Sex>(rng() % 2),
                            static_cast<int>(rng() % kNumCategories)));
  }
  const auto rel = PublishRelease(people, Spec({{kA, kS, kC}}));
  for (auto picker : {PickerKind::kFirst, PickerKind::kRandom}) {
    ReconstructOptions opts;
    opts.picker = picker;
    opts.seed = 5;
    const auto rec = Reconstruct(rel, opts);
    ASSERT_EQ(rec.size(), people.size());
    std::map<std::string, const PersonRecord*> by_block;
    for (const auto& p : people) by_block[p.block_id] = &p;
    for (const auto& r : rec) {
      const auto& p = *by_block.at(r.block_id);
      EXPECT_EQ(r.age, p.age);
      EXPECT_EQ(r.sex, p.sex);
      EXPECT_EQ(r.category, p.category);
    }
  }
}

TEST(ReconstructTest, RandomPickerDeterministicAndThreadIndependent) {
  std::mt19937_64 rng(4);
  const auto people = testing::RandomPopulation(rng, 120, 14);
  const auto rel = PublishRelease(people, ReleaseSpec{});
  ReconstructOptions opts;
  opts.picker = PickerKind::kRandom;
  opts.seed = 99;
  opts.threads = 1;
  const auto a = Reconstruct(rel, opts);
  opts.threads = 8;
  const auto b = Reconstruct(rel, opts);
  EXPECT_EQ(a, b);
  opts.seed = 100;
  EXPECT_NE(a, Reconstruct(rel, opts));
}

TEST(ReconstructTest, EveryBlockSatisfiesItsRelease) {
  std::mt19937_64 rng(5);
  const auto people = testing::RandomPopulation(rng, 80, 25);
  for (const auto& marginals : MarginalSuites()) {
    const auto rel = PublishRelease(people, Spec(marginals, AgeBins::SexByAgeTable()));
    for (auto picker : {PickerKind::kFirst, PickerKind::kRandom}) {
      ReconstructOptions opts;
      opts.picker = picker;
      opts.seed = 1;
      const auto rec = Reconstruct(rel, opts);
      EXPECT_EQ(rec.size(), people.size());
      std::map<std::string, std::vector<ReconCell>> cells;
      for (const auto& r : rec) {
        cells[r.block_id].push_back(
            {rel.spec.age_bins.IndexOf(r.age_lower), r.sex, r.category});
      }
      for (const auto& [id, c] : cells) {
        EXPECT_TRUE(Satisfies(DeriveConstraints(rel, id), c)) << id;
      }
    }
  }
}

TEST(ReconstructTest, RecordsCarryAgeBinBounds) {
  const std::vector<PersonRecord> people = {
      Person("p", "b", 23, Sex::kMale, 4), Person("q", "b", 90, Sex::kFemale, 4)};
  const auto rec = Reconstruct(PublishRelease(people, ReleaseSpec{}),
                               ReconstructOptions{});
  ASSERT_EQ(rec.size(), 2u);
  EXPECT_EQ(rec[0].age_lower, 22);
  EXPECT_EQ(rec[0].age_upper, 24);
  EXPECT_EQ(rec[0].age, 23);
  EXPECT_EQ(rec[1].age_lower, 85);
  EXPECT_FALSE(rec[1].age_upper.has_value());
}

TEST(ReconstructedCsvTest, RoundTrip) {
  testing::TempDir dir;
  std::mt19937_64 rng(6);
  const auto people = testing::RandomPopulation(rng, 30, 10);
  const auto rec =
      Reconstruct(PublishRelease(people, ReleaseSpec{}), ReconstructOptions{});
  WriteReconstructed(rec, dir / "r.csv");
  EXPECT_EQ(ReadReconstructed(dir / "r.csv"), rec);
}

TEST(DumpConstraintsTest, LineOrientedFormat) {
  const std::vector<PersonRecord> people = {
      Person("p", "b", 23, Sex::kMale, 4), Person("q", "b", 90, Sex::kFemale, 5)};
  std::ostringstream out;
  DumpConstraints(DeriveConstraints(PublishRelease(people, ReleaseSpec{}), "b"),
                  out);
  EXPECT_EQ(out.str(),
            "block b total 2\n"
            "marginal age,sex\n"
            "  22-24,M 1\n"
            "  85-,F 1\n"
            "marginal category\n"
            "  c4 1\n"
            "  c5 1\n");
}

}  // namespace
}  // namespace reidbench
