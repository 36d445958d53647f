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

#include "reidbench/matching.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

namespace reidbench {
namespace {

// Exhaustive maximum matching size: try every subset of left vertices in
// decreasing size order and every assignment via recursion.
int BruteForceMatching(const std::vector<std::vector<int>>& adj,
                       std::size_t left, std::vector<bool>& used) {
  if (left == adj.size()) return 0;
  int best = BruteForceMatching(adj, left + 1, used);  // leave unmatched
  for (int r : adj[left]) {
    if (used[r]) continue;
    used[r] = true;
    best = std::max(best, 1 + BruteForceMatching(adj, left + 1, used));
    used[r] = false;
  }
  return best;
}

std::vector<std::vector<int>> RandomGraph(std::mt19937_64& rng, int nl,
                                          int nr, double density) {
  std::bernoulli_distribution edge(density);
  std::vector<std::vector<int>> adj(nl);
  for (int l = 0; l < nl; ++l) {
    for (int r = 0; r < nr; ++r) {
      if (edge(rng)) adj[l].push_back(r);
    }
  }
  return adj;
}

void ExpectValidMatching(const std::vector<std::vector<int>>& adj,
                         const std::vector<int>& match) {
  ASSERT_EQ(match.size(), adj.size());
  std::set<int> rights;
  for (std::size_t l = 0; l < adj.size(); ++l) {
    if (match[l] == kUnmatched) continue;
    EXPECT_NE(std::find(adj[l].begin(), adj[l].end(), match[l]), adj[l].end());
    EXPECT_TRUE(rights.insert(match[l]).second) << "right vertex reused";
  }
}

TEST(MaximumMatchingTest, EmptyAndTrivialGraphs) {
  EXPECT_TRUE(MaximumMatching({}, 0).empty());
  const auto m = MaximumMatching({{}, {}}, 3);
  EXPECT_EQ(MatchingSize(m), 0u);
  EXPECT_EQ(MatchingSize(MaximumMatching({{0}, {0}}, 1)), 1u);
}

TEST(MaximumMatchingTest, NeedsAugmentingPath) {
  // Greedy would match 0-0 and strand 1; the maximum is 2.
  const std::vector<std::vector<int>> adj = {{0, 1}, {0}};
  const auto m = MaximumMatching(adj, 2);
  ExpectValidMatching(adj, m);
  EXPECT_EQ(MatchingSize(m), 2u);
}

TEST(MaximumMatchingTest, MatchesBruteForceOnSmallGraphs) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> size(0, 8);
  std::uniform_real_distribution<double> dens(0.05, 0.7);
  for (int trial = 0; trial < 2000; ++trial) {
    const int nl = size(rng), nr = size(rng);
    const auto adj = RandomGraph(rng, nl, nr, dens(rng));
    const auto m = MaximumMatching(adj, nr);
    ExpectValidMatching(adj, m);
    std::vector<bool> used(nr, false);
    EXPECT_EQ(static_cast<int>(MatchingSize(m)),
              BruteForceMatching(adj, 0, used))
        << "trial " << trial;
  }
}

TEST(MaximumMatchingTest, SizeInvariantUnderPermutation) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const auto adj = RandomGraph(rng, 7, 7, 0.3);
    std::vector<int> perm(7);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::vector<int>> permuted(7);
    for (int l = 0; l < 7; ++l) permuted[perm[l]] = adj[l];
    EXPECT_EQ(MatchingSize(MaximumMatching(adj, 7)),
              MatchingSize(MaximumMatching(permuted, 7)));
  }
}

TEST(MaximumMatchingTest, LargeCompleteGraph) {
  std::vector<std::vector<int>> adj(500);
  for (auto& row : adj) {
    for (int r = 0; r < 400; ++r) row.push_back(r);
  }
  EXPECT_EQ(MatchingSize(MaximumMatching(adj, 400)), 400u);
}

}  // namespace
}  // namespace reidbench
