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

#include "reidbench/reid.h"

#include <cstdlib>
#include <random>

#include "json.hpp"
#include "reidbench/errors.h"
#include "reidbench/matching.h"
#include "reidbench/parallel.h"
#include "reidbench/random.h"

namespace reidbench {
namespace {

constexpr int kConfirmAgeWindow = 1;

template <typename T, typename KeyFn>
std::map<std::string_view, std::vector<std::size_t>> GroupByBlock(
    const std::vector<T>& items, KeyFn key) {
  std::map<std::string_view, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < items.size(); ++i) {
    groups[key(items[i])].push_back(i);
  }
  return groups;
}

nlohmann::ordered_json CountsJson(const ReidCounts& c) {
  nlohmann::ordered_json j;
  j["putative"] = c.putative;
  j["confirmed"] = c.confirmed;
  j["prior_total"] = c.prior_total;
  if (auto p = c.precision()) {
    j["precision"] = *p;
  } else {
    j["precision"] = nullptr;
  }
  j["recall_linked"] = c.recall_linked();
  j["recall_correct"] = c.recall_correct();
  return j;
}

}  // namespace

PriorKnowledge PriorKnowledge::FromRecords(
    const std::vector<PersonRecord>& records, bool voting_age_only) {
  PriorKnowledge prior;
  for (const auto& r : records) {
    if (voting_age_only && !r.voting_age()) continue;
    if (!prior.truth_categories.emplace(r.person_id, r.category).second) {
      throw ValidationError("duplicate person id " + r.person_id);
    }
    prior.entries.push_back({r.person_id, r.block_id, r.age, r.sex});
  }
  return prior;
}

std::optional<double> ReidCounts::precision() const {
  if (putative == 0) return std::nullopt;
  return static_cast<double>(confirmed) / static_cast<double>(putative);
}

double ReidCounts::recall_linked() const {
  return prior_total == 0 ? 0.0
                          : static_cast<double>(putative) /
                                static_cast<double>(prior_total);
}

double ReidCounts::recall_correct() const {
  return prior_total == 0 ? 0.0
                          : static_cast<double>(confirmed) /
                                static_cast<double>(prior_total);
}

bool AgeCompatible(const ReconstructedRecord& r, int age, int tolerance) {
  if (age < r.age_lower - tolerance) return false;
  return !r.age_upper || age <= *r.age_upper + tolerance;
}

ReidReport LinkAndInfer(const std::vector<ReconstructedRecord>& recon,
                        const PriorKnowledge& prior, int age_tolerance,
                        const BlockSizeBins& bins) {
  ReidReport report;
  for (const auto& b : bins.bins()) report.by_bin.push_back({b, {}});
  report.overall.prior_total = static_cast<std::int64_t>(prior.entries.size());

  const auto recon_by_block =
      GroupByBlock(recon, [](const auto& r) -> std::string_view {
        return r.block_id;
      });
  const auto prior_by_block =
      GroupByBlock(prior.entries, [](const auto& p) -> std::string_view {
        return p.block_id;
      });

  for (const auto& [block, people] : prior_by_block) {
    const auto bin = bins.IndexOf(static_cast<std::int64_t>(people.size()));
    ReidCounts* bin_counts = bin ? &report.by_bin[*bin].counts : nullptr;
    if (bin_counts) bin_counts->prior_total += people.size();

    auto it = recon_by_block.find(block);
    if (it == recon_by_block.end()) continue;
    const auto& records = it->second;
    std::vector<std::vector<int>> adj(people.size());
    for (std::size_t l = 0; l < people.size(); ++l) {
      const PriorEntry& p = prior.entries[people[l]];
      for (std::size_t r = 0; r < records.size(); ++r) {
        const auto& rec = recon[records[r]];
        if (rec.sex == p.sex && AgeCompatible(rec, p.age, age_tolerance)) {
          adj[l].push_back(static_cast<int>(r));
        }
      }
    }
    const auto match = MaximumMatching(adj, records.size());
    for (std::size_t l = 0; l < people.size(); ++l) {
      if (match[l] == kUnmatched) continue;
      const PriorEntry& p = prior.entries[people[l]];
      const auto& rec = recon[records[match[l]]];
      auto truth = prior.truth_categories.find(p.person_id);
      const bool confirmed = truth != prior.truth_categories.end() &&
                             truth->second == rec.category &&
                             std::abs(rec.age - p.age) <= kConfirmAgeWindow;
      report.links.push_back({people[l], records[match[l]], confirmed});
      ++report.overall.putative;
      report.overall.confirmed += confirmed;
      if (bin_counts) {
        ++bin_counts->putative;
        bin_counts->confirmed += confirmed;
      }
    }
  }
  return report;
}

double ReconstructionMatchRate(const std::vector<ReconstructedRecord>& recon,
                               const std::vector<PersonRecord>& truth,
                               int age_tolerance) {
  if (truth.empty()) return 0.0;
  const auto recon_by_block =
      GroupByBlock(recon, [](const auto& r) -> std::string_view {
        return r.block_id;
      });
  const auto truth_by_block =
      GroupByBlock(truth, [](const auto& p) -> std::string_view {
        return p.block_id;
      });
  std::size_t matched = 0;
  for (const auto& [block, people] : truth_by_block) {
    auto it = recon_by_block.find(block);
    if (it == recon_by_block.end()) continue;
    const auto& records = it->second;
    std::vector<std::vector<int>> adj(people.size());
    for (std::size_t l = 0; l < people.size(); ++l) {
      const PersonRecord& p = truth[people[l]];
      for (std::size_t r = 0; r < records.size(); ++r) {
        const auto& rec = recon[records[r]];
        if (rec.sex == p.sex && rec.category == p.category &&
            AgeCompatible(rec, p.age, age_tolerance)) {
          adj[l].push_back(static_cast<int>(r));
        }
      }
    }
    matched += MatchingSize(MaximumMatching(adj, records.size()));
  }
  return static_cast<double>(matched) / static_cast<double>(truth.size());
}

RugglesResult RugglesBaseline(const DemographyConfig& cfg,
                              double p_race_correct, int age_tolerance,
                              int threads) {
  cfg.Validate();
  if (!(p_race_correct >= 0 && p_race_correct <= 1)) {
    throw ConfigError("p_race_correct must lie in [0, 1]");
  }
  if (age_tolerance < 0) throw ConfigError("age tolerance must be >= 0");
  const auto size_dist = MakeCategorical(cfg.block_size.weights, "block sizes");
  const auto age_dist = MakeCategorical(cfg.age.weights, "ages");

  const auto n = static_cast<std::size_t>(cfg.n_blocks);
  std::vector<RugglesResult> per_block(n);
  ParallelFor(n, threads, [&](std::size_t b) {
    std::mt19937_64 rng = Substream(cfg.seed, Stream::kRuggles, b);
    auto sizes = size_dist;
    auto ages = age_dist;
    std::bernoulli_distribution is_male(cfg.male_probability);
    std::bernoulli_distribution race_right(p_race_correct);

    const auto size =
        static_cast<std::size_t>(cfg.block_size.values[sizes(rng)]);
    struct AgeSex {
      int age;
      bool male;
    };
    auto draw = [&] {
      std::vector<AgeSex> v(size);
      for (auto& p : v) {
        p.age = static_cast<int>(cfg.age.values[ages(rng)]);
        p.male = is_male(rng);
      }
      return v;
    };
    const auto truth = draw();
    const auto guess = draw();
    std::vector<std::vector<int>> adj(size);
    for (std::size_t l = 0; l < size; ++l) {
      for (std::size_t r = 0; r < size; ++r) {
        if (truth[l].male == guess[r].male &&
            std::abs(truth[l].age - guess[r].age) <= age_tolerance) {
          adj[l].push_back(static_cast<int>(r));
        }
      }
    }
    const auto match = MaximumMatching(adj, size);
    RugglesResult& out = per_block[b];
    out.records = static_cast<std::int64_t>(size);
    for (std::size_t l = 0; l < size; ++l) {
      if (match[l] == kUnmatched) continue;
      ++out.age_sex_matched;
      out.matched += race_right(rng);
    }
  });
  RugglesResult total;
  for (const auto& r : per_block) {
    total.records += r.records;
    total.age_sex_matched += r.age_sex_matched;
    total.matched += r.matched;
  }
  return total;
}

std::string ReidReportJson(const ReidReport& report,
                           const std::string& config_hash) {
  nlohmann::ordered_json j;
  j["config_hash"] = config_hash;
  const nlohmann::ordered_json overall = CountsJson(report.overall);
  for (const auto& [k, v] : overall.items()) j[k] = v;
  nlohmann::ordered_json bins = nlohmann::ordered_json::array();
  for (const auto& b : report.by_bin) {
    if (b.counts.prior_total == 0) continue;
    auto entry = CountsJson(b.counts);
    entry["bin"] = b.bin.Label();
    bins.push_back(std::move(entry));
  }
  j["bins"] = std::move(bins);
  return j.dump(2) + "\n";
}

}  // namespace reidbench
