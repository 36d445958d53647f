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

#include "reidbench/nonattack.h"

#include <fstream>

#include "json.hpp"
#include "reidbench/csv.h"
#include "reidbench/errors.h"
#include "reidbench/parallel.h"

namespace reidbench {

double BlockPrecision::precision() const {
  if (below_threshold || bc_gt == 0) return 0.0;
  return static_cast<double>(mc_gt) / static_cast<double>(bc_gt);
}

BlockPrecision InferBlock(const BlockHistogram& released,
                          const BlockHistogram& gt, std::int64_t threshold) {
  if (released.block_id != gt.block_id) {
    throw ValidationError("block mismatch: " + released.block_id + " vs " +
                          gt.block_id);
  }
  BlockPrecision out;
  out.block_id = gt.block_id;
  out.bc_gt = gt.total();
  if (out.bc_gt == 0) {
    throw ValidationError("block " + gt.block_id +
                          " has no ground-truth persons to infer");
  }
  if (auto major = MajorityCategory(released)) {
    out.mr_tda = major->category;
    out.mc_gt = gt.count(major->category);
  }
  out.below_threshold = out.mc_gt < threshold;
  return out;
}

PrecisionRecordSet RunNonattack(const BlockTable& released,
                                const BlockTable& gt, std::int64_t threshold,
                                int threads) {
  CheckAligned(released, gt);
  std::vector<std::pair<const BlockHistogram*, const BlockHistogram*>> pairs;
  auto it = released.begin();
  for (const auto& [id, g] : gt) {
    const BlockHistogram& r = (it++)->second;
    if (!g.empty()) pairs.emplace_back(&r, &g);
  }
  PrecisionRecordSet set;
  set.threshold = threshold;
  set.entries.resize(pairs.size());
  ParallelFor(pairs.size(), threads, [&](std::size_t i) {
    set.entries[i] = InferBlock(*pairs[i].first, *pairs[i].second, threshold);
  });
  for (const auto& e : set.entries) set.total_population += e.bc_gt;
  return set;
}

std::int64_t RecalledPopulation(const PrecisionRecordSet& set, double cutoff) {
  std::int64_t n = 0;
  for (const auto& e : set.entries) {
    if (!e.below_threshold && e.precision() >= cutoff) n += e.bc_gt;
  }
  return n;
}

double RecallAt(const PrecisionRecordSet& set, double cutoff) {
  if (set.total_population == 0) return 0.0;
  return static_cast<double>(RecalledPopulation(set, cutoff)) /
         static_cast<double>(set.total_population);
}

std::vector<ThresholdRun> ThresholdSweep(
    const BlockTable& released, const BlockTable& gt,
    const std::vector<std::int64_t>& thresholds, int threads) {
  std::vector<ThresholdRun> runs;
  for (auto t : thresholds) {
    if (t < 1) throw ValidationError("thresholds must be positive");
    runs.push_back({t, RunNonattack(released, gt, t, threads)});
  }
  return runs;
}

void WritePrecisionCsv(const PrecisionRecordSet& set,
                       const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << "block_id,mr_tda,mc_gt,bc_gt,precision,below_threshold\n";
  for (const auto& e : set.entries) {
    out << CsvEscape(e.block_id) << ',';
    if (e.mr_tda) out << e.mr_tda->code();
    out << ',' << e.mc_gt << ',' << e.bc_gt << ',' << FormatDouble(e.precision())
        << ',' << (e.below_threshold ? 1 : 0) << '\n';
  }
  out.flush();
  if (!out) throw Error("write failed for " + path.string());
}

PrecisionRecordSet ReadPrecisionCsv(const std::filesystem::path& path,
                                    std::int64_t threshold) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) ||
      SplitCsvLine(line) !=
          std::vector<std::string>{"block_id", "mr_tda", "mc_gt", "bc_gt",
                                   "precision", "below_threshold"}) {
    throw SchemaError(path.string() + ": unexpected precision CSV header");
  }
  PrecisionRecordSet set;
  set.threshold = threshold;
  long row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto f = SplitCsvLine(line);
    auto fail = [&] {
      return DataError(path.string() + " row " + std::to_string(row) +
                       ": malformed precision record");
    };
    if (f.size() != 6) throw fail();
    BlockPrecision e;
    e.block_id = f[0];
    if (!f[1].empty()) {
      auto code = ParseInt64(f[1]);
      if (!code || *code < 0 || *code >= kNumCategories) throw fail();
      e.mr_tda = RaceEthnicityCode::FromCode(static_cast<int>(*code));
    }
    auto mc = ParseInt64(f[2]);
    auto bc = ParseInt64(f[3]);
    auto below = ParseInt64(f[5]);
    if (!mc || !bc || !below || *mc < 0 || *bc < *mc || *below > 1) {
      throw fail();
    }
    e.mc_gt = *mc;
    e.bc_gt = *bc;
    e.below_threshold = *below == 1;
    set.total_population += e.bc_gt;
    set.entries.push_back(std::move(e));
  }
  return set;
}

std::string NonattackSummaryJson(const PrecisionRecordSet& set,
                                 const std::vector<double>& cutoffs,
                                 const std::string& config_hash) {
  nlohmann::ordered_json j;
  j["config_hash"] = config_hash;
  j["threshold"] = set.threshold;
  j["blocks"] = set.entries.size();
  j["total_population"] = set.total_population;
  std::int64_t below = 0;
  for (const auto& e : set.entries) below += e.below_threshold ? e.bc_gt : 0;
  j["below_threshold_population"] = below;
  nlohmann::ordered_json recall = nlohmann::ordered_json::object();
  for (double c : cutoffs) recall[FormatDouble(c)] = RecallAt(set, c);
  j["recall"] = recall;
  return j.dump(2) + "\n";
}

}  // namespace reidbench
