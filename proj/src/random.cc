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

#include "reidbench/random.h"

#include <cmath>
#include <string>

#include "reidbench/errors.h"

namespace reidbench {

std::mt19937_64 Substream(std::uint64_t seed, Stream stream,
                          std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

std::discrete_distribution<std::size_t> MakeCategorical(
    const std::vector<double>& weights, const char* what) {
  bool any_positive = false;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0) {
      throw ConfigError(std::string(what) + ": weights must be finite and >= 0");
    }
    any_positive = any_positive || w > 0;
  }
  if (!any_positive) {
    throw ConfigError(std::string(what) + ": no positive weight");
  }
  return std::discrete_distribution<std::size_t>(weights.begin(),
                                                 weights.end());
}

}  // namespace reidbench
