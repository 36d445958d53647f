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

#ifndef REIDBENCH_REID_H_
#define REIDBENCH_REID_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reidbench/model.h"
#include "reidbench/recon.h"
#include "reidbench/synthgen.h"

namespace reidbench {

struct PriorEntry {
  std::string person_id;
  std::string block_id;
  int age = 0;
  Sex sex = Sex::kMale;
};

// Identified records an attacker links against. Ages are taken to be
// correct (the worst case of an internal source); the true categories are
// kept apart and used only for scoring.
struct PriorKnowledge {
  std::vector<PriorEntry> entries;
  std::map<std::string, RaceEthnicityCode, std::less<>> truth_categories;

  // Throws ValidationError on a duplicate person id.
  static PriorKnowledge FromRecords(const std::vector<PersonRecord>& records,
                                    bool voting_age_only = false);
};

struct LinkedPair {
  std::size_t prior_index = 0;
  std::size_t recon_index = 0;
  bool confirmed = false;
};

struct ReidCounts {
  std::int64_t putative = 0;
  std::int64_t confirmed = 0;
  std::int64_t prior_total = 0;

  // confirmed / putative; nullopt when nothing was linked.
  std::optional<double> precision() const;
  // putative / prior_total: share of prior records that got an inference.
  double recall_linked() const;
  // confirmed / prior_total.
  double recall_correct() const;
};

struct ReidBinCounts {
  BlockSizeBin bin;
  ReidCounts counts;
};

struct ReidReport {
  ReidCounts overall;
  // Blocks binned by their prior-knowledge population.
  std::vector<ReidBinCounts> by_bin;
  std::vector<LinkedPair> links;
};

// True if a person aged `age` is compatible with the record's age bin
// widened by `tolerance` years on both sides.
bool AgeCompatible(const ReconstructedRecord& r, int age, int tolerance);

// Per block, maximum one-to-one matching of prior entries to reconstructed
// records on exact sex and AgeCompatible. Each linked prior person is
// assigned the record's category; the link is confirmed when that equals
// the true category and the record's age is within one year of the
// person's. Ties among maximum matchings follow record order.
ReidReport LinkAndInfer(const std::vector<ReconstructedRecord>& recon,
                        const PriorKnowledge& prior, int age_tolerance,
                        const BlockSizeBins& bins = BlockSizeBins::Default());

// Fraction of truth records covered by a within-block maximum matching on
// exact sex, exact category and AgeCompatible. 0 for empty truth.
double ReconstructionMatchRate(const std::vector<ReconstructedRecord>& recon,
                               const std::vector<PersonRecord>& truth,
                               int age_tolerance);

struct RugglesResult {
  std::int64_t records = 0;
  std::int64_t age_sex_matched = 0;
  std::int64_t matched = 0;  // age/sex matched and race draw succeeded

  double match_rate() const {
    return records == 0 ? 0.0
                        : static_cast<double>(matched) /
                              static_cast<double>(records);
  }
};

// Random-reconstruction baseline. For each of cfg.n_blocks blocks: draw a
// size, draw the block's persons' (age, sex) i.i.d., draw a second
// independent "reconstruction" of the same size, and match the two within
// the block (exact sex, |age difference| <= age_tolerance, maximum
// matching). Each matched pair is a full match with probability
// p_race_correct.
RugglesResult RugglesBaseline(const DemographyConfig& cfg,
                              double p_race_correct, int age_tolerance,
                              int threads = 1);

// {"config_hash", "putative", "confirmed", "prior_total", "precision",
//  "recall_linked", "recall_correct", "bins": [...]}
std::string ReidReportJson(const ReidReport& report,
                           const std::string& config_hash);

}  // namespace reidbench

#endif  // REIDBENCH_REID_H_
