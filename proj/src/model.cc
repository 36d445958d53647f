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

#include "reidbench/model.h"

#include <numeric>
#include <string>

#include "reidbench/errors.h"

namespace reidbench {

RaceEthnicityCode RaceEthnicityCode::Encode(int race, bool hispanic) {
  if (race < 0 || race >= kNumRaces) {
    throw ValidationError("race " + std::to_string(race) +
                          " outside [0, 62]");
  }
  return RaceEthnicityCode(2 * race + (hispanic ? 1 : 0));
}

RaceEthnicityCode RaceEthnicityCode::FromCode(int code) {
  if (code < 0 || code >= kNumCategories) {
    throw ValidationError("category code " + std::to_string(code) +
                          " outside [0, 125]");
  }
  return RaceEthnicityCode(code);
}

char SexToChar(Sex sex) { return sex == Sex::kMale ? 'M' : 'F'; }

Sex SexFromString(std::string_view text) {
  if (text == "M") return Sex::kMale;
  if (text == "F") return Sex::kFemale;
  throw ValidationError("sex must be M or F, got '" + std::string(text) + "'");
}

std::int64_t BlockHistogram::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

std::optional<CategoryCount> MajorityCategory(const BlockHistogram& h) {
  int best = -1;
  std::int64_t best_count = 0;
  for (int c = 0; c < kNumCategories; ++c) {
    if (h.counts[c] > best_count) {
      best = c;
      best_count = h.counts[c];
    }
  }
  if (best < 0) return std::nullopt;
  return CategoryCount{RaceEthnicityCode::FromCode(best), best_count};
}

std::string_view ProvenanceName(Provenance p) {
  switch (p) {
    case Provenance::kGroundTruth:
      return "ground-truth";
    case Provenance::kSwap:
      return "swap";
    case Provenance::kTda:
      return "tda";
    case Provenance::kReconstructed:
      return "reconstructed";
  }
  return "unknown";
}

void BlockTable::Insert(BlockHistogram h) {
  for (std::int64_t v : h.counts) {
    if (v < 0) {
      throw ValidationError("negative count in block " + h.block_id);
    }
  }
  std::string key = h.block_id;
  auto [it, inserted] = blocks_.emplace(std::move(key), std::move(h));
  if (!inserted) {
    throw ValidationError("duplicate block id " + it->first);
  }
}

BlockHistogram& BlockTable::GetOrCreate(std::string_view block_id) {
  auto it = blocks_.find(block_id);
  if (it == blocks_.end()) {
    BlockHistogram h;
    h.block_id = std::string(block_id);
    it = blocks_.emplace(h.block_id, std::move(h)).first;
  }
  return it->second;
}

const BlockHistogram* BlockTable::Find(std::string_view block_id) const {
  auto it = blocks_.find(block_id);
  return it == blocks_.end() ? nullptr : &it->second;
}

const BlockHistogram& BlockTable::At(std::string_view block_id) const {
  const BlockHistogram* h = Find(block_id);
  if (h == nullptr) {
    throw AlignmentError("block " + std::string(block_id) + " missing from " +
                         std::string(ProvenanceName(provenance_)) + " table");
  }
  return *h;
}

std::int64_t BlockTable::GrandTotal() const {
  std::int64_t sum = 0;
  for (const auto& [id, h] : blocks_) sum += h.total();
  return sum;
}

void CheckAligned(const BlockTable& a, const BlockTable& b) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      throw AlignmentError("block " + ia->first + " present in " +
                           std::string(ProvenanceName(a.provenance())) +
                           " table only");
    }
    if (ia == a.end() || ib->first < ia->first) {
      throw AlignmentError("block " + ib->first + " present in " +
                           std::string(ProvenanceName(b.provenance())) +
                           " table only");
    }
    ++ia;
    ++ib;
  }
}

std::string BlockSizeBin::Label() const {
  if (!upper) return std::to_string(lower) + "+";
  return std::to_string(lower) + "-" + std::to_string(*upper);
}

BlockSizeBins BlockSizeBins::Default() {
  return FromLowerEdges({1, 10, 50, 100, 250, 500, 1000});
}

BlockSizeBins BlockSizeBins::FromLowerEdges(
    const std::vector<std::int64_t>& edges) {
  if (edges.size() < 3 || edges[0] != 1 || edges[1] != 10 || edges[2] != 50) {
    throw ConfigError("block size bins must begin 1-9, 10-49");
  }
  BlockSizeBins out;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (i > 0 && edges[i] <= edges[i - 1]) {
      throw ConfigError("block size bin edges must increase strictly");
    }
    BlockSizeBin bin{edges[i], std::nullopt};
    if (i + 1 < edges.size()) bin.upper = edges[i + 1] - 1;
    out.bins_.push_back(bin);
  }
  return out;
}

std::optional<std::size_t> BlockSizeBins::IndexOf(
    std::int64_t block_total) const {
  if (block_total < 1) return std::nullopt;
  for (std::size_t i = 0; i < bins_.size(); ++i) {
    if (bins_[i].Contains(block_total)) return i;
  }
  return std::nullopt;
}

std::optional<BlockSizeBin> BlockSizeBins::Of(std::int64_t block_total) const {
  auto i = IndexOf(block_total);
  if (!i) return std::nullopt;
  return bins_[*i];
}

}  // namespace reidbench
