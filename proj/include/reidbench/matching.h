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

#ifndef REIDBENCH_MATCHING_H_
#define REIDBENCH_MATCHING_H_

#include <cstddef>
#include <vector>

namespace reidbench {

inline constexpr int kUnmatched = -1;

// Maximum-cardinality bipartite matching (Hopcroft-Karp).
// adjacency[l] lists the right vertices compatible with left vertex l;
// right vertices are 0..num_right-1. Returns, for each left vertex, its
// matched right vertex or kUnmatched. Output depends only on the order of
// the adjacency lists.
std::vector<int> MaximumMatching(const std::vector<std::vector<int>>& adjacency,
                                 std::size_t num_right);

std::size_t MatchingSize(const std::vector<int>& match_left);

}  // namespace reidbench

#endif  // REIDBENCH_MATCHING_H_
