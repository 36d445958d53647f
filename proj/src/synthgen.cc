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

#include "reidbench/synthgen.h"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <optional>
#include <random>

#include "reidbench/errors.h"
#include "reidbench/parallel.h"
#include "reidbench/random.h"

namespace reidbench {
namespace {

constexpr double kSumTolerance = 1e-9;

void Normalize(std::vector<double>& w) {
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= sum;
}

void CheckWeights(const std::vector<double>& w, const char* what) {
  double sum = 0;
  for (double x : w) {
    if (!std::isfinite(x) || x < 0) {
      throw ConfigError(std::string(what) + ": weights must be finite and >= 0");
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw ConfigError(std::string(what) + ": weights sum to " +
                      std::to_string(sum) + ", expected 1");
  }
}

void CheckValues(const ValueDistribution& d, std::int64_t min_value,
                 const char* what) {
  if (d.values.empty() || d.values.size() != d.weights.size()) {
    throw ConfigError(std::string(what) +
                      ": values and weights must be non-empty and equal length");
  }
  for (auto v : d.values) {
    if (v < min_value) {
      throw ConfigError(std::string(what) + ": value " + std::to_string(v) +
                        " below " + std::to_string(min_value));
    }
  }
  CheckWeights(d.weights, what);
}

// 2010-style shares for five-year age groups 0-4 .. 80-84, then 85+.
constexpr double kAgeGroupShares[] = {6.5, 6.6, 6.7, 7.1, 7.0, 6.8,
                                      6.5, 6.5, 6.8, 7.4, 7.2, 6.4,
                                      5.4, 4.0, 3.0, 2.4, 1.9};
constexpr double kAge85PlusShare = 1.8;

}  // namespace

DemographyConfig DemographyConfig::NationalLike() {
  DemographyConfig cfg;

  constexpr int kMaxBlock = 1500;
  const double log_median = std::log(20.0);
  constexpr double kLogSd = 1.1;
  for (int s = 1; s <= kMaxBlock; ++s) {
    const double z = (std::log(static_cast<double>(s)) - log_median) / kLogSd;
    cfg.block_size.values.push_back(s);
    cfg.block_size.weights.push_back(std::exp(-0.5 * z * z) / s);
  }
  Normalize(cfg.block_size.weights);

  for (int g = 0; g < 17; ++g) {
    for (int a = 5 * g; a < 5 * g + 5; ++a) {
      cfg.age.values.push_back(a);
      cfg.age.weights.push_back(kAgeGroupShares[g] / 5.0);
    }
  }
  // 85..99, linearly declining.
  double tail_norm = 0;
  for (int a = 85; a < 100; ++a) tail_norm += 100 - a;
  for (int a = 85; a < 100; ++a) {
    cfg.age.values.push_back(a);
    cfg.age.weights.push_back(kAge85PlusShare * (100 - a) / tail_norm);
  }
  Normalize(cfg.age.weights);

  cfg.male_probability = 0.492;
  cfg.majority_share = 0.88;
  cfg.majority_concentration = 28;

  auto code = [](int race, bool hispanic) {
    return RaceEthnicityCode::Encode(race, hispanic).code();
  };
  // Races 0..5 are the single-race groups (white, black, native, asian,
  // island, other); 6..62 are the combinations.
  cfg.category_weights.assign(kNumCategories, 0.0);
  cfg.category_weights[code(0, false)] = 0.70;
  cfg.category_weights[code(0, true)] = 0.10;
  cfg.category_weights[code(1, false)] = 0.12;
  cfg.category_weights[code(3, false)] = 0.04;
  cfg.category_weights[code(5, true)] = 0.04;

  cfg.minority_weights.assign(kNumCategories, 0.0);
  cfg.minority_weights[code(0, false)] = 0.30;
  cfg.minority_weights[code(0, true)] = 0.12;
  cfg.minority_weights[code(1, false)] = 0.18;
  cfg.minority_weights[code(1, true)] = 0.01;
  cfg.minority_weights[code(2, false)] = 0.03;
  cfg.minority_weights[code(3, false)] = 0.08;
  cfg.minority_weights[code(4, false)] = 0.01;
  cfg.minority_weights[code(5, false)] = 0.01;
  cfg.minority_weights[code(5, true)] = 0.10;
  // Remaining 0.16 over the combination races, non-Hispanic 3:1.
  const int combos = kNumRaces - 6;
  for (int r = 6; r < kNumRaces; ++r) {
    cfg.minority_weights[code(r, false)] = 0.16 * 0.75 / combos;
    cfg.minority_weights[code(r, true)] = 0.16 * 0.25 / combos;
  }
  Normalize(cfg.category_weights);
  Normalize(cfg.minority_weights);
  return cfg;
}

DemographyConfig DemographyConfig::FromConfig(const Config& c,
                                              const DemographyConfig& base) {
  DemographyConfig cfg = base;
  constexpr const char* kSec = "gen";
  if (auto v = c.GetInt(kSec, "n_blocks")) cfg.n_blocks = *v;
  if (auto v = c.GetInt(kSec, "seed")) cfg.seed = static_cast<std::uint64_t>(*v);
  if (auto v = c.GetDouble(kSec, "majority_share")) cfg.majority_share = *v;
  if (auto v = c.GetDouble(kSec, "majority_concentration")) {
    cfg.majority_concentration = *v;
  }
  if (auto v = c.GetDouble(kSec, "male_probability")) cfg.male_probability = *v;
  if (auto v = c.GetIntList(kSec, "block_sizes")) cfg.block_size.values = *v;
  if (auto v = c.GetDoubleList(kSec, "block_size_weights")) {
    cfg.block_size.weights = *v;
  }
  if (auto v = c.GetIntList(kSec, "ages")) cfg.age.values = *v;
  if (auto v = c.GetDoubleList(kSec, "age_weights")) cfg.age.weights = *v;
  if (auto v = c.GetDoubleList(kSec, "category_weights")) {
    cfg.category_weights = *v;
  }
  if (auto v = c.GetDoubleList(kSec, "minority_weights")) {
    cfg.minority_weights = *v;
  }
  cfg.Validate();
  return cfg;
}

void DemographyConfig::Validate() const {
  if (n_blocks < 1) throw ConfigError("n_blocks must be positive");
  CheckValues(block_size, 1, "block sizes");
  CheckValues(age, 0, "ages");
  if (!(male_probability >= 0 && male_probability <= 1)) {
    throw ConfigError("male_probability must lie in [0, 1]");
  }
  if (!(majority_share >= 0 && majority_share <= 1)) {
    throw ConfigError("majority_share must lie in [0, 1]");
  }
  if (!(majority_concentration >= 0) || !std::isfinite(majority_concentration)) {
    throw ConfigError("majority_concentration must be finite and >= 0");
  }
  if (category_weights.size() != kNumCategories ||
      minority_weights.size() != kNumCategories) {
    throw ConfigError("category and minority weights need 126 entries");
  }
  CheckWeights(category_weights, "category weights");
  CheckWeights(minority_weights, "minority weights");
}

std::string SyntheticBlockId(std::int64_t index) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "B%08lld", static_cast<long long>(index));
  return buf;
}

Population GeneratePopulation(const DemographyConfig& cfg, int threads) {
  cfg.Validate();
  const auto size_dist = MakeCategorical(cfg.block_size.weights, "block sizes");
  const auto age_dist = MakeCategorical(cfg.age.weights, "ages");
  const auto majority_dist =
      MakeCategorical(cfg.category_weights, "category weights");

  // One minority sampler per possible majority code, each excluding it.
  std::vector<std::optional<std::discrete_distribution<std::size_t>>>
      minority_dist(kNumCategories);
  for (int c = 0; c < kNumCategories; ++c) {
    if (cfg.category_weights[c] <= 0) continue;
    std::vector<double> w = cfg.minority_weights;
    w[c] = 0;
    if (std::accumulate(w.begin(), w.end(), 0.0) > 0) {
      minority_dist[c].emplace(w.begin(), w.end());
    } else if (cfg.majority_share < 1) {
      throw ConfigError(
          "minority weights leave no category besides majority code " +
          std::to_string(c));
    }
  }

  const auto n = static_cast<std::size_t>(cfg.n_blocks);
  std::vector<std::vector<PersonRecord>> per_block(n);
  std::vector<RaceEthnicityCode> majority(n);
  std::vector<std::string> ids(n);
  ParallelFor(n, threads, [&](std::size_t b) {
    std::mt19937_64 rng = Substream(cfg.seed, Stream::kGenerate, b);
    auto local_size = size_dist;
    auto local_age = age_dist;
    auto local_major = majority_dist;
    double share = cfg.majority_share;
    if (cfg.majority_concentration > 0 && share > 0 && share < 1) {
      // Beta(a, b) as X / (X + Y) with X ~ Gamma(a), Y ~ Gamma(b).
      std::gamma_distribution<double> x(share * cfg.majority_concentration);
      std::gamma_distribution<double> y((1 - share) *
                                        cfg.majority_concentration);
      const double gx = x(rng);
      const double gy = y(rng);
      share = gx + gy > 0 ? gx / (gx + gy) : cfg.majority_share;
    }
    std::bernoulli_distribution takes_majority(share);
    std::bernoulli_distribution is_male(cfg.male_probability);

    ids[b] = SyntheticBlockId(static_cast<std::int64_t>(b));
    const auto size = cfg.block_size.values[local_size(rng)];
    const auto major =
        RaceEthnicityCode::FromCode(static_cast<int>(local_major(rng)));
    majority[b] = major;
    auto minority = minority_dist[major.code()];

    auto& people = per_block[b];
    people.reserve(static_cast<std::size_t>(size));
    for (std::int64_t j = 0; j < size; ++j) {
      PersonRecord p;
      p.block_id = ids[b];
      char suffix[24];
      std::snprintf(suffix, sizeof(suffix), "-%04lld",
                    static_cast<long long>(j));
      p.person_id = ids[b] + suffix;
      p.category =
          takes_majority(rng)
              ? major
              : RaceEthnicityCode::FromCode(static_cast<int>((*minority)(rng)));
      p.age = static_cast<int>(cfg.age.values[local_age(rng)]);
      p.sex = is_male(rng) ? Sex::kMale : Sex::kFemale;
      people.push_back(std::move(p));
    }
  });

  Population pop;
  std::size_t total = 0;
  for (const auto& v : per_block) total += v.size();
  pop.records.reserve(total);
  for (auto& v : per_block) {
    for (auto& p : v) pop.records.push_back(std::move(p));
  }
  pop.truth = Tabulate(pop.records, /*voting_age_only=*/true);
  pop.block_majority = std::move(majority);
  pop.block_ids = std::move(ids);
  return pop;
}

BlockTable Tabulate(const std::vector<PersonRecord>& records,
                    bool voting_age_only, Provenance provenance) {
  BlockTable table(provenance);
  BlockHistogram* current = nullptr;
  for (const auto& r : records) {
    if (current == nullptr || current->block_id != r.block_id) {
      current = &table.GetOrCreate(r.block_id);
    }
    if (voting_age_only && !r.voting_age()) continue;
    ++current->counts[r.category.code()];
  }
  return table;
}

}  // namespace reidbench
