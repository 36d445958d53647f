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

#ifndef REIDBENCH_STATS_H_
#define REIDBENCH_STATS_H_

#include <vector>

namespace reidbench {

struct WeightedValue {
  double value = 0;
  double weight = 0;
};

struct FiveNumberSummary {
  double min = 0;
  double q1 = 0;
  double median = 0;
  double q3 = 0;
  double max = 0;
};

// Lower inverse of the weighted empirical CDF: the smallest value v with
// cumulative weight fraction F(v) >= p. p is clamped to [0, 1]; p == 0
// yields the smallest value carrying positive weight. `values` must be
// sorted by value and carry at least one positive weight.
double WeightedQuantile(const std::vector<WeightedValue>& values, double p);

// Sorts a copy and evaluates the quantile rule at 0, .25, .5, .75, 1.
FiveNumberSummary Summarize(std::vector<WeightedValue> values);

}  // namespace reidbench

#endif  // REIDBENCH_STATS_H_
