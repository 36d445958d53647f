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

#ifndef REIDBENCH_NONATTACK_H_
#define REIDBENCH_NONATTACK_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "reidbench/model.h"

namespace reidbench {

inline constexpr std::int64_t kDefaultMajorityThreshold = 5;
inline constexpr double kStandardCutoffs[] = {0.75, 0.95, 1.0};

// Precision of "everyone in this block has the released majority
// category", scored against ground truth.
struct BlockPrecision {
  std::string block_id;
  std::optional<RaceEthnicityCode> mr_tda;  // nullopt if the release is empty
  std::int64_t mc_gt = 0;  // ground-truth count of mr_tda
  std::int64_t bc_gt = 0;  // ground-truth block total
  bool below_threshold = false;

  // mc_gt / bc_gt, or 0 when below threshold.
  double precision() const;
  friend bool operator==(const BlockPrecision&, const BlockPrecision&) =
      default;
};

struct PrecisionRecordSet {
  std::vector<BlockPrecision> entries;  // weight of each entry is bc_gt
  std::int64_t threshold = kDefaultMajorityThreshold;
  std::int64_t total_population = 0;  // sum of bc_gt over entries

  friend bool operator==(const PrecisionRecordSet&,
                         const PrecisionRecordSet&) = default;
};

// 1. majority category from the release; 2. its ground-truth count;
// 3. below `threshold` -> precision 0; 4-5. otherwise count / block total.
// Throws ValidationError when the block ids differ or gt is empty.
BlockPrecision InferBlock(const BlockHistogram& released,
                          const BlockHistogram& gt, std::int64_t threshold);

// One entry per block with a non-empty ground truth, in block-id order.
// Throws AlignmentError if the tables cover different blocks.
PrecisionRecordSet RunNonattack(const BlockTable& released,
                                const BlockTable& gt, std::int64_t threshold,
                                int threads = 1);

// Population-weighted fraction of records in blocks with precision >=
// cutoff; below-threshold blocks never count. 0 for an empty set.
double RecallAt(const PrecisionRecordSet& set, double cutoff);

// Numerator of RecallAt: persons in qualifying blocks.
std::int64_t RecalledPopulation(const PrecisionRecordSet& set, double cutoff);

struct ThresholdRun {
  std::int64_t threshold = 0;
  PrecisionRecordSet set;
};

// Throws ValidationError on a non-positive threshold.
std::vector<ThresholdRun> ThresholdSweep(
    const BlockTable& released, const BlockTable& gt,
    const std::vector<std::int64_t>& thresholds, int threads = 1);

// block_id,mr_tda,mc_gt,bc_gt,precision,below_threshold
void WritePrecisionCsv(const PrecisionRecordSet& set,
                       const std::filesystem::path& path);
PrecisionRecordSet ReadPrecisionCsv(const std::filesystem::path& path,
                                    std::int64_t threshold);

// {"threshold":..,"total_population":..,"blocks":..,
//  "recall":{"0.75":..,"0.95":..,"1":..}, ...extra}
std::string NonattackSummaryJson(const PrecisionRecordSet& set,
                                 const std::vector<double>& cutoffs,
                                 const std::string& config_hash);

}  // namespace reidbench

#endif  // REIDBENCH_NONATTACK_H_
