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

#ifndef REIDBENCH_MECHANISMS_H_
#define REIDBENCH_MECHANISMS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "reidbench/config.h"
#include "reidbench/model.h"

namespace reidbench {

// ---------------------------------------------------------------------------
// Record swapping
// ---------------------------------------------------------------------------

enum class SwapCandidateRule : std::uint8_t {
  // Records whose category occurs once in their block are swapped first.
  kUniqueCategory,
  // Every record is equally likely to be chosen.
  kAny,
};

enum class PairingScope : std::uint8_t {
  // Partner block drawn uniformly from all other blocks.
  kUniformOtherBlock,
};

struct SwapConfig {
  // Target fraction of records that end up in a different block.
  double swap_rate = 0.0;
  SwapCandidateRule candidate_rule = SwapCandidateRule::kUniqueCategory;
  PairingScope pairing_scope = PairingScope::kUniformOtherBlock;
  std::uint64_t seed = 0;

  // [swap] rate, candidate_rule ("unique_category" | "any"),
  // pairing_scope ("uniform"), seed.
  static SwapConfig FromConfig(const Config& cfg, const SwapConfig& base);
  void Validate() const;
};

struct SwapResult {
  std::vector<PersonRecord> released;
  BlockTable table{Provenance::kSwap};  // voting-age tabulation of released
  std::int64_t pairs = 0;
  std::vector<std::string> warnings;
};

// Exchanges block ids between pairs of records in different blocks, about
// swap_rate * N / 2 pairs in total. Partners share voting-age status, so
// both the full and the voting-age block totals are preserved. Fewer than
// two blocks: records are returned unchanged with a warning. Sequential.
SwapResult SwapProtect(const std::vector<PersonRecord>& records,
                       const SwapConfig& cfg);

// ---------------------------------------------------------------------------
// TopDown-style noise
// ---------------------------------------------------------------------------

// Groups blocks by the first `prefix_length` characters of the block id
// (0 groups everything, -1 means the whole id, i.e. one group per block).
// When invariant_total is set each group's released cells are reconciled to
// the group's true total.
struct HierarchyLevel {
  std::string name;
  int prefix_length = 0;
  bool invariant_total = false;
};

struct TdaConfig {
  double sigma = 0.0;
  std::vector<HierarchyLevel> hierarchy = {{"nation", 0, false},
                                           {"block", -1, false}};
  std::uint64_t seed = 0;

  // [tda] sigma, seed, levels = ["name:prefix_length:invariant", ...].
  static TdaConfig FromConfig(const Config& cfg, const TdaConfig& base);
  void Validate() const;
};

// Every cell gets independent N(0, sigma^2) noise, is clamped at 0 and
// rounded to an integer. Then, coarsest level first, each invariant group
// is projected onto {x >= 0, sum x = true total} in least squares and
// re-integerised by largest-remainder apportionment (ties to the lower
// cell). Output cells are non-negative integers.
BlockTable TdaProtect(const BlockTable& truth, const TdaConfig& cfg,
                      int threads = 1);

// Least-squares projection of `values` onto the scaled simplex with the
// given total, followed by largest-remainder rounding. Exposed for testing.
std::vector<std::int64_t> ReconcileToTotal(
    const std::vector<std::int64_t>& values, std::int64_t total);

// ---------------------------------------------------------------------------
// TDA-minus-swap error on the TDA majority category
// ---------------------------------------------------------------------------

struct BlockCountError {
  std::string block_id;
  RaceEthnicityCode category;  // TDA majority
  std::int64_t swap_total = 0;
  std::int64_t error = 0;  // tda count - swap count for `category`
};

struct CountErrorBinStats {
  BlockSizeBin bin;
  std::int64_t n = 0;
  double mean = 0;
  double sd = 0;  // sample standard deviation
  double min = 0;
  double q1 = 0;
  double median = 0;
  double q3 = 0;
  double max = 0;
};

struct CountErrorReport {
  std::vector<BlockCountError> blocks;
  std::vector<CountErrorBinStats> bins;  // non-empty bins only
  CountErrorBinStats overall;
};

// Blocks are binned by swap total; blocks with an empty swap or TDA
// histogram are skipped. Throws AlignmentError if the tables differ in
// block set.
CountErrorReport CountErrorDistribution(const BlockTable& swap,
                                        const BlockTable& tda,
                                        const BlockSizeBins& bins);

}  // namespace reidbench

#endif  // REIDBENCH_MECHANISMS_H_
