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

#include "reidbench/pipeline.h"

#include <fstream>

#include "json.hpp"
#include "reidbench/csv.h"
#include "reidbench/errors.h"
#include "reidbench/ingest.h"
#include "reidbench/report.h"

namespace reidbench {
namespace {

constexpr double kDefaultSwapRate = 0.02;
constexpr double kDefaultSigma = 3.0;

nlohmann::ordered_json RecallJson(const PrecisionRecordSet& set,
                                  const std::vector<double>& cutoffs) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (double c : cutoffs) j[FormatDouble(c)] = RecallAt(set, c);
  return j;
}

}  // namespace

PipelineConfig PipelineConfig::FromConfig(const Config& c,
                                          std::uint64_t seed) {
  PipelineConfig cfg;
  cfg.seed = seed;
  cfg.gen = DemographyConfig::FromConfig(c, DemographyConfig::NationalLike());
  SwapConfig swap;
  swap.swap_rate = kDefaultSwapRate;
  cfg.swap = SwapConfig::FromConfig(c, swap);
  TdaConfig tda;
  tda.sigma = kDefaultSigma;
  cfg.tda = TdaConfig::FromConfig(c, tda);
  cfg.gen.seed = cfg.swap.seed = cfg.tda.seed = seed;

  if (auto v = c.GetInt("nonattack", "threshold")) cfg.threshold = *v;
  if (cfg.threshold < 1) throw ConfigError("nonattack.threshold must be >= 1");
  if (auto v = c.GetDoubleList("nonattack", "cutoffs")) {
    for (double x : *v) {
      if (!(x >= 0 && x <= 1)) {
        throw ConfigError("nonattack.cutoffs must lie in [0, 1]");
      }
    }
    cfg.cutoffs = *v;
  }
  if (auto v = c.GetString("nonattack", "ground_truth")) {
    if (*v == "truth") {
      cfg.ground_truth = GroundTruth::kTruth;
    } else if (*v == "swap") {
      cfg.ground_truth = GroundTruth::kSwap;
    } else {
      throw ConfigError("nonattack.ground_truth must be 'truth' or 'swap'");
    }
  }
  if (auto v = c.GetIntList("report", "bin_edges")) {
    cfg.bins = BlockSizeBins::FromLowerEdges(*v);
  }
  cfg.config_hash =
      HashHex(c.Canonical() + "\nseed=" + std::to_string(seed) + "\n");
  return cfg;
}

PipelineResult RunPipeline(const PipelineConfig& cfg, int threads) {
  PipelineResult r;
  r.population = GeneratePopulation(cfg.gen, threads);
  r.swap = SwapProtect(r.population.records, cfg.swap);
  r.tda = TdaProtect(r.population.truth, cfg.tda, threads);
  const BlockTable& gt = cfg.ground_truth == GroundTruth::kTruth
                             ? r.population.truth
                             : r.swap.table;
  r.swap_precision = RunNonattack(r.swap.table, gt, cfg.threshold, threads);
  r.tda_precision = RunNonattack(r.tda, gt, cfg.threshold, threads);
  r.count_error = CountErrorDistribution(r.swap.table, r.tda, cfg.bins);
  return r;
}

std::vector<std::string> WritePipelineArtifacts(
    const PipelineResult& result, const PipelineConfig& cfg,
    const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> written;
  auto path = [&](const std::string& name) {
    written.push_back(name);
    return dir / name;
  };

  WriteBlockTable(result.population.truth, path("truth.csv"));
  WriteBlockTable(result.swap.table, path("swap.csv"));
  WriteBlockTable(result.tda, path("tda.csv"));
  WritePrecisionCsv(result.swap_precision, path("precision_swap.csv"));
  WritePrecisionCsv(result.tda_precision, path("precision_tda.csv"));

  // CSV is written first and the SVG is rendered from what was read back,
  // so both always carry the same numbers.
  WriteCdfCsv(PrecisionCdf(result.swap_precision, "Swap"),
              path("cdf_swap.csv"));
  WriteCdfCsv(PrecisionCdf(result.tda_precision, "TDA"), path("cdf_tda.csv"));
  const std::vector<CdfSeries> series = {
      ReadCdfCsv(dir / "cdf_swap.csv", "Swap"),
      ReadCdfCsv(dir / "cdf_tda.csv", "TDA")};
  WriteTextFile(path("cdf.svg"),
                RenderCdfSvg(series, BureauReferencePoints(),
                             "Majority-inference precision",
                             cfg.config_hash));

  const WhiskerReport swap_w = PerBinWhiskers(result.swap_precision, cfg.bins);
  const WhiskerReport tda_w = PerBinWhiskers(result.tda_precision, cfg.bins);
  WriteWhiskersCsv(swap_w, path("whiskers_swap.csv"));
  WriteWhiskersCsv(tda_w, path("whiskers_tda.csv"));
  WriteTextFile(path("whiskers.svg"),
                RenderWhiskersSvg({{"Swap", swap_w}, {"TDA", tda_w}},
                                  "Precision by block size", cfg.config_hash));
  WriteCountErrorCsv(result.count_error, path("count_error.csv"));

  nlohmann::ordered_json summary;
  summary["config_hash"] = cfg.config_hash;
  summary["seed"] = cfg.seed;
  summary["blocks"] = result.population.block_ids.size();
  summary["persons"] = result.population.records.size();
  summary["swap_pairs"] = result.swap.pairs;
  summary["threshold"] = cfg.threshold;
  summary["ground_truth"] =
      cfg.ground_truth == GroundTruth::kTruth ? "truth" : "swap";
  summary["recall_swap"] = RecallJson(result.swap_precision, cfg.cutoffs);
  summary["recall_tda"] = RecallJson(result.tda_precision, cfg.cutoffs);
  summary["count_error_sd"] = result.count_error.overall.sd;
  nlohmann::ordered_json notes = nlohmann::ordered_json::array();
  for (const auto& w : result.swap.warnings) notes.push_back(w);
  for (const auto& n : swap_w.notes) notes.push_back("swap: " + n);
  for (const auto& n : tda_w.notes) notes.push_back("tda: " + n);
  summary["notes"] = notes;
  WriteTextFile(path("summary.json"), summary.dump(2) + "\n");

  nlohmann::ordered_json manifest;
  manifest["config_hash"] = cfg.config_hash;
  manifest["artifacts"] = written;
  written.push_back("manifest.json");
  WriteTextFile(dir / "manifest.json", manifest.dump(2) + "\n");
  return written;
}

}  // namespace reidbench
