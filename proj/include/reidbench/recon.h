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

#ifndef REIDBENCH_RECON_H_
#define REIDBENCH_RECON_H_

#include <array>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "reidbench/config.h"
#include "reidbench/model.h"

namespace reidbench {

enum class Attribute : std::uint8_t { kAge = 0, kSex = 1, kCategory = 2 };
inline constexpr int kNumAttributes = 3;

// Partition of ages into released bins. Bin i covers
// [lower_edges[i], lower_edges[i+1] - 1]; the last bin is open-ended.
class AgeBins {
 public:
  // Sex-by-age table bins: 0-4, 5-9, 10-14, 15-17, 18-19, 20, 21, 22-24,
  // 25-29, ..., 60-61, 62-64, 65-66, 67-69, 70-74, 75-79, 80-84, 85+.
  static AgeBins SexByAgeTable();
  // One bin per year 0..max_age-1 plus an open bin max_age+.
  static AgeBins SingleYears(int max_age = 110);
  // Edges must start at 0 and increase strictly. Throws ConfigError.
  static AgeBins FromLowerEdges(std::vector<int> edges);

  int IndexOf(int age) const;
  int lower(int bin) const { return edges_[bin]; }
  // nullopt for the open last bin.
  std::optional<int> upper(int bin) const;
  // Midpoint (rounded down) of a closed bin; the lower edge of the open one.
  int Representative(int bin) const;
  int size() const { return static_cast<int>(edges_.size()); }
  const std::vector<int>& edges() const { return edges_; }

  friend bool operator==(const AgeBins&, const AgeBins&) = default;

 private:
  std::vector<int> edges_;
};

// A reconstructable record type: released age bin, sex and category.
struct ReconCell {
  int age_bin = 0;
  Sex sex = Sex::kMale;
  RaceEthnicityCode category;
  friend auto operator<=>(const ReconCell&, const ReconCell&) = default;
};

// Attribute values of a cell keyed in attribute order; -1 marks attributes
// outside a marginal.
using MarginalKey = std::array<int, kNumAttributes>;
MarginalKey Project(const ReconCell& cell,
                    const std::vector<Attribute>& attributes);

struct Marginal {
  std::vector<Attribute> attributes;  // sorted, non-empty
  std::map<MarginalKey, std::int64_t> counts;  // positive counts only
  friend bool operator==(const Marginal&, const Marginal&) = default;
};

// Which tables a release publishes for each block.
struct ReleaseSpec {
  AgeBins age_bins = AgeBins::SexByAgeTable();
  // Default: age-bin x sex, and category.
  std::vector<std::vector<Attribute>> marginals = {
      {Attribute::kAge, Attribute::kSex}, {Attribute::kCategory}};
  bool voting_age_only = false;

  // [recon] marginals = ["age,sex", "category"], age_bins = "table" |
  // "single_year", age_edges = [...], voting_age_only.
  static ReleaseSpec FromConfig(const Config& cfg, const ReleaseSpec& base);
  // Every attribute must be covered by some marginal. Throws ConfigError.
  void Validate() const;
};

struct BlockRelease {
  std::int64_t total = 0;
  std::vector<Marginal> marginals;  // in ReleaseSpec order
};

struct TabularRelease {
  ReleaseSpec spec;
  std::map<std::string, BlockRelease, std::less<>> blocks;
};

// Tabulates the marginals listed in `spec` for every block in `records`.
TabularRelease PublishRelease(const std::vector<PersonRecord>& records,
                              const ReleaseSpec& spec);

struct BlockConstraints {
  std::string block_id;
  std::int64_t total = 0;
  AgeBins age_bins;
  std::vector<Marginal> marginals;
};

// Constraints encoding exactly the block's released tables. Throws
// AlignmentError if the block is absent and ValidationError if the
// marginals disagree on the total or on any shared sub-marginal.
BlockConstraints DeriveConstraints(const TabularRelease& release,
                                   std::string_view block_id);

// True if the multiset of cells reproduces every marginal of `c`.
bool Satisfies(const BlockConstraints& c, const std::vector<ReconCell>& cells);

// Line-oriented dump for debugging:
//   block <id> total <n>
//   marginal <attr,...>
//     <value,...> <count>
void DumpConstraints(const BlockConstraints& c, std::ostream& out);

// A solution is a sorted multiset of cells.
using Solution = std::vector<ReconCell>;

struct SolveResult {
  std::vector<Solution> solutions;
  bool unsat = false;
  bool capped = false;  // stopped at enumerate_cap
};

// Depth-first enumeration over candidate cells with marginal-count pruning;
// returns solutions in a fixed order, stopping at enumerate_cap.
SolveResult SolveBlock(const BlockConstraints& c, std::size_t enumerate_cap);

// Reconstructed, pseudonymous record.
struct ReconstructedRecord {
  std::string block_id;
  int age = 0;  // representative age of the bin
  int age_lower = 0;
  std::optional<int> age_upper;  // nullopt for an open bin
  Sex sex = Sex::kMale;
  RaceEthnicityCode category;
  friend bool operator==(const ReconstructedRecord&,
                         const ReconstructedRecord&) = default;
};

enum class PickerKind : std::uint8_t { kFirst, kRandom };

struct ReconstructOptions {
  PickerKind picker = PickerKind::kFirst;
  std::uint64_t seed = 0;
  // Blocks up to this many persons are enumerated (to the cap) and one
  // solution is picked; larger blocks take a single search result.
  std::int64_t exhaustive_bound = 8;
  std::size_t enumerate_cap = 1000;
  int threads = 1;

  // [recon] picker, seed, exhaustive_bound, enumerate_cap.
  static ReconstructOptions FromConfig(const Config& cfg,
                                       const ReconstructOptions& base);
};

// One solution per block, concatenated in block-id order. Throws
// ValidationError naming the block when a block is unsatisfiable.
std::vector<ReconstructedRecord> Reconstruct(const TabularRelease& release,
                                             const ReconstructOptions& opts);

std::vector<ReconstructedRecord> ToRecords(const std::string& block_id,
                                           const Solution& solution,
                                           const AgeBins& bins);

// block_id,age,age_lower,age_upper,sex,race,hispanic (age_upper empty for an
// open bin).
void WriteReconstructed(const std::vector<ReconstructedRecord>& records,
                        const std::filesystem::path& path);
std::vector<ReconstructedRecord> ReadReconstructed(
    const std::filesystem::path& path);

}  // namespace reidbench

#endif  // REIDBENCH_RECON_H_
