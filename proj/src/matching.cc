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

#include <limits>
#include <queue>

namespace reidbench {
namespace {

constexpr int kInf = std::numeric_limits<int>::max();

class HopcroftKarp {
 public:
  HopcroftKarp(const std::vector<std::vector<int>>& adj, std::size_t num_right)
      : adj_(adj),
        match_left_(adj.size(), kUnmatched),
        match_right_(num_right, kUnmatched),
        dist_(adj.size()),
        next_edge_(adj.size()) {}

  std::vector<int> Run() {
    while (Bfs()) {
      std::fill(next_edge_.begin(), next_edge_.end(), 0);
      for (std::size_t l = 0; l < adj_.size(); ++l) {
        if (match_left_[l] == kUnmatched) Dfs(static_cast<int>(l));
      }
    }
    return match_left_;
  }

 private:
  // Layers free left vertices at distance 0; true if an augmenting path
  // exists.
  bool Bfs() {
    std::queue<int> q;
    for (std::size_t l = 0; l < adj_.size(); ++l) {
      if (match_left_[l] == kUnmatched) {
        dist_[l] = 0;
        q.push(static_cast<int>(l));
      } else {
        dist_[l] = kInf;
      }
    }
    bool found = false;
    while (!q.empty()) {
      const int l = q.front();
      q.pop();
      for (int r : adj_[l]) {
        const int next = match_right_[r];
        if (next == kUnmatched) {
          found = true;
        } else if (dist_[next] == kInf) {
          dist_[next] = dist_[l] + 1;
          q.push(next);
        }
      }
    }
    return found;
  }

  // Iterative DFS along the BFS layering.
  bool Dfs(int root) {
    std::vector<int> stack{root};
    while (!stack.empty()) {
      const int l = stack.back();
      auto& e = next_edge_[l];
      if (e >= static_cast<int>(adj_[l].size())) {
        dist_[l] = kInf;
        stack.pop_back();
        continue;
      }
      const int r = adj_[l][e];
      const int next = match_right_[r];
      if (next == kUnmatched) {
        // Augment along the stack.
        for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
          const int u = *it;
          const int v = adj_[u][next_edge_[u]];
          match_left_[u] = v;
          match_right_[v] = u;
        }
        return true;
      }
      if (dist_[next] == dist_[l] + 1) {
        stack.push_back(next);
      } else {
        // A child that failed has dist kInf, so this also skips it.
        ++e;
      }
    }
    return false;
  }

  const std::vector<std::vector<int>>& adj_;
  std::vector<int> match_left_;
  std::vector<int> match_right_;
  std::vector<int> dist_;
  std::vector<int> next_edge_;
};

}  // namespace

std::vector<int> MaximumMatching(const std::vector<std::vector<int>>& adjacency,
                                 std::size_t num_right) {
  return HopcroftKarp(adjacency, num_right).Run();
}

std::size_t MatchingSize(const std::vector<int>& match_left) {
  std::size_t n = 0;
  for (int r : match_left) n += r != kUnmatched;
  return n;
}

}  // namespace reidbench
