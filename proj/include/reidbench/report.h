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

#ifndef REIDBENCH_REPORT_H_
#define REIDBENCH_REPORT_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "reidbench/mechanisms.h"
#include "reidbench/model.h"
#include "reidbench/nonattack.h"
#include "reidbench/stats.h"

namespace reidbench {

struct CdfPoint {
  double precision = 0;
  double cum_fraction = 0;
  friend bool operator==(const CdfPoint&, const CdfPoint&) = default;
};

// Population-weighted CDF of per-record precision: one point per distinct
// precision value, cum_fraction = share of records at or below it.
struct CdfSeries {
  std::string label;
  std::vector<CdfPoint> points;
};

struct ReferencePoint {
  double precision = 0;
  double recall = 0;
  std::string label;
};

// Published precision/recall of the constraint-solver re-identification
// attack (worst-case prior knowledge): all blocks, blocks of 10-49 and
// blocks of 1-9 persons.
std::vector<ReferencePoint> BureauReferencePoints();

// Below-threshold records sit at precision 0. Throws ValidationError for an
// empty set.
CdfSeries PrecisionCdf(const PrecisionRecordSet& set, std::string label);

// Fraction of records at or below `precision` under the series' step CDF.
double CdfAt(const CdfSeries& series, double precision);

struct BinWhiskers {
  BlockSizeBin bin;
  std::int64_t population = 0;
  FiveNumberSummary stats;
};

struct WhiskerReport {
  std::vector<BinWhiskers> bins;  // bins with at least one record
  std::vector<std::string> notes;  // one per omitted empty bin
};

// Population-weighted five-number summaries of precision per block-size
// bin (bins by ground-truth block total).
WhiskerReport PerBinWhiskers(const PrecisionRecordSet& set,
                             const BlockSizeBins& bins);

// precision,cum_fraction
void WriteCdfCsv(const CdfSeries& series, const std::filesystem::path& path);
CdfSeries ReadCdfCsv(const std::filesystem::path& path, std::string label);

// bin_lower,bin_upper,min,q1,median,q3,max (bin_upper empty if unbounded)
void WriteWhiskersCsv(const WhiskerReport& report,
                      const std::filesystem::path& path);

// bin_lower,bin_upper,n,mean,sd,min,q1,median,q3,max
void WriteCountErrorCsv(const CountErrorReport& report,
                        const std::filesystem::path& path);

// Static SVG 1.1 documents. Output is a pure function of the arguments.
// Reference points share the CDF axes at (precision, 1 - recall).
std::string RenderCdfSvg(const std::vector<CdfSeries>& series,
                         const std::vector<ReferencePoint>& references,
                         const std::string& title,
                         const std::string& config_hash);

struct LabeledWhiskers {
  std::string label;
  WhiskerReport report;
};
std::string RenderWhiskersSvg(const std::vector<LabeledWhiskers>& groups,
                              const std::string& title,
                              const std::string& config_hash);

void WriteTextFile(const std::filesystem::path& path, const std::string& text);

}  // namespace reidbench

#endif  // REIDBENCH_REPORT_H_
