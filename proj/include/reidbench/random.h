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

#ifndef REIDBENCH_RANDOM_H_
#define REIDBENCH_RANDOM_H_

#include <cstdint>
#include <random>
#include <vector>

namespace reidbench {

// Stream tags keep the substreams of different stages independent even when
// they share a seed.
enum class Stream : std::uint32_t {
  kGenerate = 1,
  kSwap = 2,
  kTda = 3,
  kPicker = 4,
  kRuggles = 5,
};

// Engine for (seed, stream, index). Each block gets its own engine so that
// results do not depend on how blocks are split across threads.
std::mt19937_64 Substream(std::uint64_t seed, Stream stream,
                          std::uint64_t index);

// Checks weights (non-negative, finite, at least one positive) and builds
// the sampler. Throws ConfigError naming `what` on failure.
std::discrete_distribution<std::size_t> MakeCategorical(
    const std::vector<double>& weights, const char* what);

}  // namespace reidbench

#endif  // REIDBENCH_RANDOM_H_
