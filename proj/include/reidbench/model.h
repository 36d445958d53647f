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

#ifndef REIDBENCH_MODEL_H_
#define REIDBENCH_MODEL_H_

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace reidbench {

inline constexpr int kNumRaces = 63;
inline constexpr int kNumCategories = 2 * kNumRaces;
inline constexpr int kVotingAge = 18;

// One of the 126 race/ethnicity combinations: 63 race values crossed with
// a Hispanic flag. The code packs both as 2 * race + hispanic.
class RaceEthnicityCode {
 public:
  constexpr RaceEthnicityCode() = default;

  // Throws ValidationError when race is outside [0, 62].
  static RaceEthnicityCode Encode(int race, bool hispanic);
  // Throws ValidationError when code is outside [0, 125].
  static RaceEthnicityCode FromCode(int code);

  constexpr int code() const { return code_; }
  constexpr int race() const { return code_ / 2; }
  constexpr bool hispanic() const { return (code_ & 1) != 0; }

  friend constexpr auto operator<=>(RaceEthnicityCode, RaceEthnicityCode) =
      default;

 private:
  explicit constexpr RaceEthnicityCode(int code) : code_(code) {}
  int code_ = 0;
};

enum class Sex : std::uint8_t { kMale, kFemale };

char SexToChar(Sex sex);
// Accepts "M" or "F"; throws ValidationError otherwise.
Sex SexFromString(std::string_view text);

struct PersonRecord {
  std::string person_id;
  std::string block_id;
  int age = 0;
  Sex sex = Sex::kMale;
  RaceEthnicityCode category;

  bool voting_age() const { return age >= kVotingAge; }
  friend bool operator==(const PersonRecord&, const PersonRecord&) = default;
};

// Voting-age (or full) counts for one block over all 126 categories.
struct BlockHistogram {
  std::string block_id;
  std::array<std::int64_t, kNumCategories> counts{};

  std::int64_t total() const;
  bool empty() const { return total() == 0; }
  std::int64_t count(RaceEthnicityCode c) const { return counts[c.code()]; }

  friend bool operator==(const BlockHistogram&, const BlockHistogram&) =
      default;
};

struct CategoryCount {
  RaceEthnicityCode category;
  std::int64_t count = 0;
  friend bool operator==(const CategoryCount&, const CategoryCount&) = default;
};

// Category with the largest count; lowest code wins ties. Empty block yields
// nullopt.
std::optional<CategoryCount> MajorityCategory(const BlockHistogram& h);

enum class Provenance : std::uint8_t {
  kGroundTruth,
  kSwap,
  kTda,
  kReconstructed
};

std::string_view ProvenanceName(Provenance p);

// Histograms keyed by block id, iterated in block-id order.
class BlockTable {
 public:
  using Map = std::map<std::string, BlockHistogram, std::less<>>;

  explicit BlockTable(Provenance provenance = Provenance::kGroundTruth)
      : provenance_(provenance) {}

  Provenance provenance() const { return provenance_; }
  void set_provenance(Provenance p) { provenance_ = p; }

  // Throws ValidationError on a duplicate block id or a negative count.
  void Insert(BlockHistogram h);
  // Returns the histogram for block_id, creating an empty one if absent.
  BlockHistogram& GetOrCreate(std::string_view block_id);

  const BlockHistogram* Find(std::string_view block_id) const;
  // Throws AlignmentError when the block is absent.
  const BlockHistogram& At(std::string_view block_id) const;

  std::size_t size() const { return blocks_.size(); }
  bool empty() const { return blocks_.empty(); }
  Map::const_iterator begin() const { return blocks_.begin(); }
  Map::const_iterator end() const { return blocks_.end(); }

  std::int64_t GrandTotal() const;

  friend bool operator==(const BlockTable&, const BlockTable&) = default;

 private:
  Provenance provenance_;
  Map blocks_;
};

// Throws AlignmentError naming the first block present in one table only.
void CheckAligned(const BlockTable& a, const BlockTable& b);

// Closed interval of block totals; upper == nullopt means unbounded.
struct BlockSizeBin {
  std::int64_t lower = 1;
  std::optional<std::int64_t> upper;

  bool Contains(std::int64_t total) const {
    return total >= lower && (!upper || total <= *upper);
  }
  std::string Label() const;
  friend bool operator==(const BlockSizeBin&, const BlockSizeBin&) = default;
};

// Partition of [1, inf) into block-size groups. The first two groups are
// always 1-9 and 10-49.
class BlockSizeBins {
 public:
  // 1-9, 10-49, 50-99, 100-249, 250-499, 500-999, 1000+.
  static BlockSizeBins Default();
  // lower_edges must start {1, 10, 50, ...} and increase strictly; the last
  // bin is unbounded. Throws ConfigError otherwise.
  static BlockSizeBins FromLowerEdges(const std::vector<std::int64_t>& edges);

  // nullopt for totals < 1 (empty blocks are not binned).
  std::optional<BlockSizeBin> Of(std::int64_t block_total) const;
  std::optional<std::size_t> IndexOf(std::int64_t block_total) const;

  const std::vector<BlockSizeBin>& bins() const { return bins_; }
  std::size_t size() const { return bins_.size(); }

 private:
  std::vector<BlockSizeBin> bins_;
};

}  // namespace reidbench

#endif  // REIDBENCH_MODEL_H_
