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

#include "reidbench/stats.h"

#include <algorithm>

#include "reidbench/errors.h"

namespace reidbench {

double WeightedQuantile(const std::vector<WeightedValue>& values, double p) {
  double total = 0;
  for (const auto& v : values) total += v.weight;
  if (values.empty() || total <= 0) {
    throw ValidationError("quantile of an empty weighted sample");
  }
  p = std::clamp(p, 0.0, 1.0);
  const double target = p * total;
  double cumulative = 0;
  for (const auto& v : values) {
    if (v.weight <= 0) continue;
    cumulative += v.weight;
    if (cumulative >= target) return v.value;
  }
  // Rounding can leave cumulative a hair under total at p == 1.
  for (auto it = values.rbegin(); it != values.rend(); ++it) {
    if (it->weight > 0) return it->value;
  }
  return values.back().value;
}

FiveNumberSummary Summarize(std::vector<WeightedValue> values) {
  std::stable_sort(values.begin(), values.end(),
                   [](const WeightedValue& a, const WeightedValue& b) {
                     return a.value < b.value;
                   });
  return {WeightedQuantile(values, 0.0), WeightedQuantile(values, 0.25),
          WeightedQuantile(values, 0.5), WeightedQuantile(values, 0.75),
          WeightedQuantile(values, 1.0)};
}

}  // namespace reidbench
