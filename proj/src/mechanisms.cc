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

#include "reidbench/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "reidbench/csv.h"
#include "reidbench/errors.h"
#include "reidbench/parallel.h"
#include "reidbench/random.h"
#include "reidbench/stats.h"
#include "reidbench/synthgen.h"

namespace reidbench {
namespace {

constexpr int kPartnerAttempts = 64;

std::size_t EffectivePrefix(int prefix_length) {
  return prefix_length < 0 ? std::string::npos
                           : static_cast<std::size_t>(prefix_length);
}

CountErrorBinStats BinStats(const BlockSizeBin& bin,
                            const std::vector<std::int64_t>& errors) {
  CountErrorBinStats s;
  s.bin = bin;
  s.n = static_cast<std::int64_t>(errors.size());
  if (errors.empty()) return s;
  double sum = 0;
  std::vector<WeightedValue> values;
  values.reserve(errors.size());
  for (auto e : errors) {
    sum += static_cast<double>(e);
    values.push_back({static_cast<double>(e), 1.0});
  }
  s.mean = sum / static_cast<double>(errors.size());
  double ss = 0;
  for (auto e : errors) ss += (e - s.mean) * (e - s.mean);
  s.sd = errors.size() > 1 ? std::sqrt(ss / static_cast<double>(errors.size() - 1))
                           : 0.0;
  const auto five = Summarize(std::move(values));
  s.min = five.min;
  s.q1 = five.q1;
  s.median = five.median;
  s.q3 = five.q3;
  s.max = five.max;
  return s;
}

}  // namespace

SwapConfig SwapConfig::FromConfig(const Config& c, const SwapConfig& base) {
  SwapConfig cfg = base;
  if (auto v = c.GetDouble("swap", "rate")) cfg.swap_rate = *v;
  if (auto v = c.GetInt("swap", "seed")) cfg.seed = static_cast<std::uint64_t>(*v);
  if (auto v = c.GetString("swap", "candidate_rule")) {
    if (*v == "unique_category") {
      cfg.candidate_rule = SwapCandidateRule::kUniqueCategory;
    } else if (*v == "any") {
      cfg.candidate_rule = SwapCandidateRule::kAny;
    } else {
      throw ConfigError("swap.candidate_rule: unknown rule '" + *v + "'");
    }
  }
  if (auto v = c.GetString("swap", "pairing_scope")) {
    if (*v != "uniform") {
      throw ConfigError("swap.pairing_scope: unknown scope '" + *v + "'");
    }
    cfg.pairing_scope = PairingScope::kUniformOtherBlock;
  }
  cfg.Validate();
  return cfg;
}

void SwapConfig::Validate() const {
  if (!(swap_rate >= 0 && swap_rate <= 1)) {
    throw ConfigError("swap rate must lie in [0, 1]");
  }
}

SwapResult SwapProtect(const std::vector<PersonRecord>& records,
                       const SwapConfig& cfg) {
  cfg.Validate();
  SwapResult result;
  result.released = records;

  std::map<std::string_view, std::vector<std::size_t>> by_block;
  for (std::size_t i = 0; i < records.size(); ++i) {
    by_block[records[i].block_id].push_back(i);
  }
  if (by_block.size() < 2) {
    if (cfg.swap_rate > 0) {
      result.warnings.push_back("fewer than two blocks; swapping skipped");
    }
    result.table = Tabulate(result.released, true, Provenance::kSwap);
    return result;
  }

  std::vector<const std::vector<std::size_t>*> blocks;
  std::vector<std::size_t> block_of(records.size());
  for (const auto& [id, members] : by_block) {
    for (auto i : members) block_of[i] = blocks.size();
    blocks.push_back(&members);
  }

  std::vector<std::size_t> first, rest;
  for (const auto* members : blocks) {
    std::array<int, kNumCategories> freq{};
    for (auto i : *members) ++freq[records[i].category.code()];
    for (auto i : *members) {
      const bool unique = freq[records[i].category.code()] == 1;
      if (cfg.candidate_rule == SwapCandidateRule::kUniqueCategory && unique) {
        first.push_back(i);
      } else {
        rest.push_back(i);
      }
    }
  }
  std::mt19937_64 rng = Substream(cfg.seed, Stream::kSwap, 0);
  std::shuffle(first.begin(), first.end(), rng);
  std::shuffle(rest.begin(), rest.end(), rng);
  first.insert(first.end(), rest.begin(), rest.end());

  const auto target = static_cast<std::int64_t>(
      std::llround(cfg.swap_rate * static_cast<double>(records.size()) / 2.0));
  std::vector<char> swapped(records.size(), 0);
  std::uniform_int_distribution<std::size_t> other_block(0, blocks.size() - 2);
  for (std::size_t i : first) {
    if (result.pairs >= target) break;
    if (swapped[i]) continue;
    for (int attempt = 0; attempt < kPartnerAttempts; ++attempt) {
      std::size_t b = other_block(rng);
      if (b >= block_of[i]) ++b;
      const auto& members = *blocks[b];
      std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
      const std::size_t j = members[pick(rng)];
      if (swapped[j] || records[j].voting_age() != records[i].voting_age()) {
        continue;
      }
      std::swap(result.released[i].block_id, result.released[j].block_id);
      swapped[i] = swapped[j] = 1;
      ++result.pairs;
      break;
    }
  }
  if (result.pairs < target) {
    result.warnings.push_back("formed " + std::to_string(result.pairs) +
                              " of " + std::to_string(target) +
                              " target swap pairs");
  }
  result.table = Tabulate(result.released, true, Provenance::kSwap);
  return result;
}

TdaConfig TdaConfig::FromConfig(const Config& c, const TdaConfig& base) {
  TdaConfig cfg = base;
  if (auto v = c.GetDouble("tda", "sigma")) cfg.sigma = *v;
  if (auto v = c.GetInt("tda", "seed")) cfg.seed = static_cast<std::uint64_t>(*v);
  if (auto levels = c.GetStringList("tda", "levels")) {
    cfg.hierarchy.clear();
    for (const auto& spec : *levels) {
      const auto a = spec.find(':');
      const auto b = spec.find(':', a == std::string::npos ? a : a + 1);
      if (a == std::string::npos || b == std::string::npos) {
        throw ConfigError("tda.levels: expected name:prefix:invariant, got '" +
                          spec + "'");
      }
      HierarchyLevel level;
      level.name = spec.substr(0, a);
      auto prefix = ParseInt64(spec.substr(a + 1, b - a - 1));
      const std::string flag = spec.substr(b + 1);
      if (!prefix || *prefix < -1 || (flag != "true" && flag != "false")) {
        throw ConfigError("tda.levels: malformed level '" + spec + "'");
      }
      level.prefix_length = static_cast<int>(*prefix);
      level.invariant_total = flag == "true";
      cfg.hierarchy.push_back(std::move(level));
    }
  }
  cfg.Validate();
  return cfg;
}

void TdaConfig::Validate() const {
  if (!(sigma >= 0) || !std::isfinite(sigma)) {
    throw ConfigError("tda sigma must be finite and >= 0");
  }
  for (const auto& level : hierarchy) {
    if (level.prefix_length < -1) {
      throw ConfigError("tda level " + level.name + ": bad prefix length");
    }
  }
}

std::vector<std::int64_t> ReconcileToTotal(
    const std::vector<std::int64_t>& values, std::int64_t total) {
  if (total < 0) throw ValidationError("reconciliation total is negative");
  const std::size_t n = values.size();
  if (n == 0) {
    if (total != 0) throw ValidationError("cannot apportion into zero cells");
    return {};
  }
  const std::int64_t current =
      std::accumulate(values.begin(), values.end(), std::int64_t{0});
  const bool non_negative = std::all_of(values.begin(), values.end(),
                                        [](std::int64_t v) { return v >= 0; });
  if (current == total && non_negative) return values;
  if (total == 0) return std::vector<std::int64_t>(n, 0);

  // Threshold lambda with sum(max(v - lambda, 0)) == total.
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double prefix = 0;
  double lambda = 0;
  for (std::size_t j = 0; j < n; ++j) {
    prefix += sorted[j];
    const double candidate = (prefix - static_cast<double>(total)) /
                             static_cast<double>(j + 1);
    if (sorted[j] - candidate > 0) lambda = candidate;
  }

  std::vector<std::int64_t> out(n);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::max(static_cast<double>(values[i]) - lambda, 0.0);
    const double whole = std::floor(x);
    out[i] = static_cast<std::int64_t>(whole);
    assigned += out[i];
    if (x - whole > 0) remainders.emplace_back(x - whole, i);
  }
  std::int64_t missing = total - assigned;
  auto by_remainder = [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  };
  const auto take = std::min<std::size_t>(
      remainders.size(), static_cast<std::size_t>(std::max<std::int64_t>(missing, 0)));
  std::partial_sort(remainders.begin(), remainders.begin() + take,
                    remainders.end(), by_remainder);
  for (std::size_t k = 0; k < take; ++k) ++out[remainders[k].second];
  missing -= static_cast<std::int64_t>(take);
  // Floating-point slack: settle any residue on the largest cells.
  if (missing != 0) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](auto a, auto b) { return out[a] > out[b]; });
    for (std::size_t k = 0; missing != 0; k = (k + 1) % n) {
      const std::size_t i = order[k];
      if (missing > 0) {
        ++out[i];
        --missing;
      } else if (out[i] > 0) {
        --out[i];
        ++missing;
      }
    }
  }
  return out;
}

BlockTable TdaProtect(const BlockTable& truth, const TdaConfig& cfg,
                      int threads) {
  cfg.Validate();
  std::vector<const BlockHistogram*> blocks;
  blocks.reserve(truth.size());
  for (const auto& [id, h] : truth) blocks.push_back(&h);

  std::vector<BlockHistogram> noisy(blocks.size());
  ParallelFor(blocks.size(), threads, [&](std::size_t b) {
    noisy[b].block_id = blocks[b]->block_id;
    if (cfg.sigma == 0) {
      noisy[b].counts = blocks[b]->counts;
      return;
    }
    std::mt19937_64 rng = Substream(cfg.seed, Stream::kTda, b);
    std::normal_distribution<double> noise(0.0, cfg.sigma);
    for (int c = 0; c < kNumCategories; ++c) {
      const double x =
          static_cast<double>(blocks[b]->counts[c]) + noise(rng);
      noisy[b].counts[c] = std::llround(std::max(x, 0.0));
    }
  });

  std::vector<HierarchyLevel> levels = cfg.hierarchy;
  std::stable_sort(levels.begin(), levels.end(),
                   [](const auto& a, const auto& b) {
                     return EffectivePrefix(a.prefix_length) <
                            EffectivePrefix(b.prefix_length);
                   });
  for (const auto& level : levels) {
    if (!level.invariant_total) continue;
    const std::size_t len = EffectivePrefix(level.prefix_length);
    // Blocks are in id order, so each group is a contiguous run.
    std::vector<std::pair<std::size_t, std::size_t>> groups;
    for (std::size_t b = 0; b < blocks.size();) {
      const std::string key = blocks[b]->block_id.substr(0, len);
      std::size_t e = b + 1;
      while (e < blocks.size() && blocks[e]->block_id.substr(0, len) == key) {
        ++e;
      }
      groups.emplace_back(b, e);
      b = e;
    }
    ParallelFor(groups.size(), threads, [&](std::size_t g) {
      const auto [begin, end] = groups[g];
      std::vector<std::int64_t> cells;
      cells.reserve((end - begin) * kNumCategories);
      std::int64_t target = 0;
      for (std::size_t b = begin; b < end; ++b) {
        cells.insert(cells.end(), noisy[b].counts.begin(),
                     noisy[b].counts.end());
        target += blocks[b]->total();
      }
      const auto fixed = ReconcileToTotal(cells, target);
      for (std::size_t b = begin; b < end; ++b) {
        std::copy_n(fixed.begin() + static_cast<std::ptrdiff_t>(
                                        (b - begin) * kNumCategories),
                    kNumCategories, noisy[b].counts.begin());
      }
    });
  }

  BlockTable out(Provenance::kTda);
  for (auto& h : noisy) out.Insert(std::move(h));
  return out;
}

CountErrorReport CountErrorDistribution(const BlockTable& swap,
                                        const BlockTable& tda,
                                        const BlockSizeBins& bins) {
  CheckAligned(swap, tda);
  CountErrorReport report;
  std::vector<std::vector<std::int64_t>> per_bin(bins.size());
  std::vector<std::int64_t> all;
  auto it_tda = tda.begin();
  for (const auto& [id, s] : swap) {
    const BlockHistogram& t = (it_tda++)->second;
    const auto bin = bins.IndexOf(s.total());
    const auto major = MajorityCategory(t);
    if (!bin || !major) continue;
    const std::int64_t error = major->count - s.count(major->category);
    report.blocks.push_back({id, major->category, s.total(), error});
    per_bin[*bin].push_back(error);
    all.push_back(error);
  }
  for (std::size_t i = 0; i < bins.size(); ++i) {
    if (per_bin[i].empty()) continue;
    report.bins.push_back(BinStats(bins.bins()[i], per_bin[i]));
  }
  report.overall = BinStats(BlockSizeBin{1, std::nullopt}, all);
  return report;
}

}  // namespace reidbench
