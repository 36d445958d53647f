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

#ifndef REIDBENCH_SYNTHGEN_H_
#define REIDBENCH_SYNTHGEN_H_

#include <cstdint>
#include <utility>
#include <vector>

#include "reidbench/config.h"
#include "reidbench/model.h"

namespace reidbench {

// Categorical distribution over integer values (block sizes, ages).
struct ValueDistribution {
  std::vector<std::int64_t> values;
  std::vector<double> weights;

  static ValueDistribution Single(std::int64_t value) {
    return {{value}, {1.0}};
  }
};

struct DemographyConfig {
  ValueDistribution block_size;  // values must be >= 1
  ValueDistribution age;         // values must be >= 0
  double male_probability = 0.5;
  // Mean probability that a person takes the block-majority category.
  double majority_share = 0.78;
  // Concentration (alpha + beta) of the Beta distribution each block draws
  // its own share from, around majority_share. 0 gives every block exactly
  // majority_share.
  double majority_concentration = 0;
  // 126 weights; the block-majority category is drawn from this.
  std::vector<double> category_weights;
  // 126 weights; non-majority persons draw from this with the block-majority
  // category excluded.
  std::vector<double> minority_weights;
  std::int64_t n_blocks = 1000;
  std::uint64_t seed = 0;

  // Desk-scale stand-in for national distributions: a discretised
  // log-normal over block sizes 1..1500 (median about 20), 2010-style
  // five-year age shares spread over single years 0..99, 49.2% male, a
  // majority distribution concentrated on a handful of common categories,
  // and per-block majority shares ~ Beta with mean 0.88 and concentration
  // 28 (most blocks 75-95% one category, a minority fully homogeneous).
  static DemographyConfig NationalLike();

  // Reads [gen]: n_blocks, seed, majority_share, male_probability,
  // majority_concentration, block_sizes/block_size_weights, ages/age_weights,
  // category_weights, minority_weights. Absent keys keep `base` values.
  static DemographyConfig FromConfig(const Config& cfg,
                                     const DemographyConfig& base);

  // Throws ConfigError describing the first violated constraint.
  void Validate() const;
};

struct Population {
  std::vector<PersonRecord> records;  // block-index order, then person order
  BlockTable truth{Provenance::kGroundTruth};  // voting-age tabulation
  // Category assigned as majority to each block, in block-index order.
  std::vector<RaceEthnicityCode> block_majority;
  std::vector<std::string> block_ids;
};

// Block id for the i-th generated block; zero padded so lexical order equals
// index order.
std::string SyntheticBlockId(std::int64_t index);

// Each block draws a size, a majority category and a majority share; each
// person then takes the majority category with that share and otherwise draws
// from the minority weights (majority excluded). Age and sex are i.i.d.
// Blocks use independent substreams, so output is identical for any thread
// count.
Population GeneratePopulation(const DemographyConfig& cfg, int threads = 1);

// counts[c] = persons in the block with category c (voting age only when
// requested). Every block that has at least one record appears, even when
// its filtered total is 0.
BlockTable Tabulate(const std::vector<PersonRecord>& records,
                    bool voting_age_only,
                    Provenance provenance = Provenance::kGroundTruth);

}  // namespace reidbench

#endif  // REIDBENCH_SYNTHGEN_H_
