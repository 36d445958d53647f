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

#ifndef REIDBENCH_PIPELINE_H_
#define REIDBENCH_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "reidbench/config.h"
#include "reidbench/mechanisms.h"
#include "reidbench/model.h"
#include "reidbench/nonattack.h"
#include "reidbench/synthgen.h"

namespace reidbench {

// Which table scores the non-attack: the true tabulation of the synthetic
// microdata, or the swap-protected release (the only option on real data).
enum class GroundTruth : std::uint8_t { kTruth, kSwap };

// Everything gen -> protect -> nonattack -> report needs.
struct PipelineConfig {
  DemographyConfig gen = DemographyConfig::NationalLike();
  SwapConfig swap;
  TdaConfig tda;
  std::int64_t threshold = kDefaultMajorityThreshold;
  std::vector<double> cutoffs = {std::begin(kStandardCutoffs),
                                 std::end(kStandardCutoffs)};
  GroundTruth ground_truth = GroundTruth::kTruth;
  BlockSizeBins bins = BlockSizeBins::Default();
  std::uint64_t seed = 0;
  std::string config_hash;  // of the canonical config text and seed

  // Defaults: swap rate 0.02, sigma 3. Reads [gen], [swap], [tda],
  // [nonattack] threshold / cutoffs / ground_truth ("truth" | "swap") and
  // [report] bin_edges. `seed` is applied to every stochastic stage.
  static PipelineConfig FromConfig(const Config& cfg, std::uint64_t seed);
};

struct PipelineResult {
  Population population;
  SwapResult swap;
  BlockTable tda{Provenance::kTda};
  PrecisionRecordSet swap_precision;
  PrecisionRecordSet tda_precision;
  CountErrorReport count_error;
};

PipelineResult RunPipeline(const PipelineConfig& cfg, int threads = 1);

// Writes every artifact into `dir` (created if needed) and returns the file
// names written, in writing order. Contents depend only on the result and
// the config, never on thread count or wall-clock time.
std::vector<std::string> WritePipelineArtifacts(
    const PipelineResult& result, const PipelineConfig& cfg,
    const std::filesystem::path& dir);

}  // namespace reidbench

#endif  // REIDBENCH_PIPELINE_H_
