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

#include "reidbench/report.h"

#include <gtest/gtest.h>

#include <random>

#include "oracles.h"
#include "reidbench/errors.h"
#include "test_util.h"

namespace reidbench {
namespace {

using testing::Cat;

BlockPrecision Entry(std::string id, std::int64_t mc, std::int64_t bc,
                     bool below = false) {
  return {std::move(id), Cat(0), mc, bc, below};
}

PrecisionRecordSet Set(std::vector<BlockPrecision> entries) {
  PrecisionRecordSet s;
  s.entries = std::move(entries);
  for (const auto& e : s.entries) s.total_population += e.bc_gt;
  return s;
}

PrecisionRecordSet RandomSet(std::mt19937_64& rng, int n) {
  std::vector<BlockPrecision> entries;
  std::uniform_int_distribution<std::int64_t> size(1, 600);
  for (int i = 0; i < n; ++i) {
    const std::int64_t bc = size(rng);
    const std::int64_t mc = std::uniform_int_distribution<std::int64_t>(0, bc)(rng);
    entries.push_back(Entry("b" + std::to_string(i), mc, bc, mc < 5));
  }
  return Set(std::move(entries));
}

TEST(PrecisionCdfTest, AllPerfectIsSingleStep) {
  const auto cdf =
      PrecisionCdf(Set({Entry("a", 10, 10), Entry("b", 7, 7)}), "x");
  EXPECT_EQ(cdf.label, "x");
  EXPECT_EQ(cdf.points, (std::vector<CdfPoint>{{1.0, 1.0}}));
}

TEST(PrecisionCdfTest, HalfZeroHalfOne) {
  const auto cdf = PrecisionCdf(
      Set({Entry("a", 3, 6, /*below=*/true), Entry("b", 6, 6)}), "x");
  EXPECT_EQ(cdf.points, (std::vector<CdfPoint>{{0.0, 0.5}, {1.0, 1.0}}));
  EXPECT_EQ(CdfAt(cdf, -0.1), 0.0);
  EXPECT_EQ(CdfAt(cdf, 0.0), 0.5);
  EXPECT_EQ(CdfAt(cdf, 0.99), 0.5);
  EXPECT_EQ(CdfAt(cdf, 1.0), 1.0);
}

TEST(PrecisionCdfTest, EmptySetThrows) {
  EXPECT_THROW(PrecisionCdf(PrecisionRecordSet{}, "x"), ValidationError);
}

TEST(PrecisionCdfTest, MatchesScanOracleAndIsMonotone) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const auto set = RandomSet(rng, 200);
    const auto cdf = PrecisionCdf(set, "x");
    ASSERT_FALSE(cdf.points.empty());
    EXPECT_DOUBLE_EQ(cdf.points.back().cum_fraction, 1.0);
    for (std::size_t i = 1; i < cdf.points.size(); ++i) {
      EXPECT_LT(cdf.points[i - 1].precision, cdf.points[i].precision);
      EXPECT_LT(cdf.points[i - 1].cum_fraction, cdf.points[i].cum_fraction);
    }
    for (double x = -0.05; x <= 1.05; x += 0.01) {
      EXPECT_NEAR(CdfAt(cdf, x), oracle::CdfByScan(set, x), 1e-12) << x;
    }
    for (const auto& pt : cdf.points) {
      EXPECT_NEAR(pt.cum_fraction, oracle::CdfByScan(set, pt.precision), 1e-12);
    }
  }
}

TEST(PerBinWhiskersTest, IdenticalValuesCollapse) {
  const auto r = PerBinWhiskers(
      Set({Entry("a", 6, 8), Entry("b", 3, 4), Entry("c", 9, 12)}),
      BlockSizeBins::Default());
  ASSERT_EQ(r.bins.size(), 2u);  // 1-9 and 10-49
  for (const auto& b : r.bins) {
    EXPECT_EQ(b.stats.min, 0.75);
    EXPECT_EQ(b.stats.q1, 0.75);
    EXPECT_EQ(b.stats.median, 0.75);
    EXPECT_EQ(b.stats.q3, 0.75);
    EXPECT_EQ(b.stats.max, 0.75);
  }
  EXPECT_EQ(r.bins[0].population, 12);
  EXPECT_EQ(r.bins[1].population, 12);
  EXPECT_EQ(r.notes.size(), 5u);  // every other bin is empty
}

TEST(PerBinWhiskersTest, MatchesExpandedQuantiles) {
  std::mt19937_64 rng(13);
  const auto set = RandomSet(rng, 300);
  const auto bins = BlockSizeBins::Default();
  const auto r = PerBinWhiskers(set, bins);
  for (const auto& bw : r.bins) {
    // Expand every block into bc_gt copies of its precision.
    std::vector<double> expanded;
    for (const auto& e : set.entries) {
      if (!bw.bin.Contains(e.bc_gt)) continue;
      for (std::int64_t k = 0; k < e.bc_gt; ++k) expanded.push_back(e.precision());
    }
    std::sort(expanded.begin(), expanded.end());
    ASSERT_EQ(static_cast<std::int64_t>(expanded.size()), bw.population);
    auto q = [&](double p) {
      const auto n = static_cast<double>(expanded.size());
      const auto idx = static_cast<std::size_t>(std::max(0.0, std::ceil(p * n) - 1));
      return expanded[idx];
    };
    EXPECT_EQ(bw.stats.min, expanded.front());
    EXPECT_EQ(bw.stats.q1, q(0.25));
    EXPECT_EQ(bw.stats.median, q(0.5));
    EXPECT_EQ(bw.stats.q3, q(0.75));
    EXPECT_EQ(bw.stats.max, expanded.back());
    EXPECT_LE(bw.stats.q1, bw.stats.median);
    EXPECT_LE(bw.stats.median, bw.stats.q3);
  }
}

TEST(CsvTest, CdfRoundTrip) {
  testing::TempDir dir;
  std::mt19937_64 rng(14);
  const auto cdf = PrecisionCdf(RandomSet(rng, 100), "swap");
  WriteCdfCsv(cdf, dir / "cdf.csv");
  const auto back = ReadCdfCsv(dir / "cdf.csv", "swap");
  EXPECT_EQ(back.points, cdf.points);
  EXPECT_EQ(testing::ReadFile(dir / "cdf.csv").rfind("precision,cum_fraction\n", 0),
            0u);
}

TEST(CsvTest, WhiskersHeaderAndOpenBin) {
  testing::TempDir dir;
  WriteWhiskersCsv(PerBinWhiskers(Set({Entry("a", 1500, 2000)}),
                                  BlockSizeBins::Default()),
                   dir / "w.csv");
  EXPECT_EQ(testing::ReadFile(dir / "w.csv"),
            "bin_lower,bin_upper,min,q1,median,q3,max\n"
            "1000,,0.75,0.75,0.75,0.75,0.75\n");
}

TEST(SvgTest, DeterministicAndCarriesHash) {
  std::mt19937_64 rng(15);
  const auto set = RandomSet(rng, 100);
  const std::vector<CdfSeries> series = {PrecisionCdf(set, "Swap"),
                                         PrecisionCdf(set, "TDA")};
  const auto a = RenderCdfSvg(series, BureauReferencePoints(), "t", "abc123");
  const auto b = RenderCdfSvg(series, BureauReferencePoints(), "t", "abc123");
  EXPECT_EQ(a, b);
  EXPECT_NE(a.find("<!-- config_hash abc123 -->"), std::string::npos);
  EXPECT_EQ(a.rfind("<?xml", 0), 0u);
  EXPECT_NE(a.find("</svg>"), std::string::npos);
  EXPECT_NE(a.find("<circle"), std::string::npos);
  const auto bare = RenderCdfSvg(series, {}, "t", "abc123");
  EXPECT_EQ(bare.find("<circle"), std::string::npos);
  const auto w = RenderWhiskersSvg(
      {{"Swap", PerBinWhiskers(set, BlockSizeBins::Default())}}, "t", "h");
  EXPECT_EQ(w, RenderWhiskersSvg(
                   {{"Swap", PerBinWhiskers(set, BlockSizeBins::Default())}},
                   "t", "h"));
}

TEST(SvgTest, PlotsOnlyTheCsvData) {
  // Rendering from the CSV read back gives the same document as rendering
  // from the in-memory series, so the figure holds no data the CSV lacks.
  testing::TempDir dir;
  std::mt19937_64 rng(16);
  const auto cdf = PrecisionCdf(RandomSet(rng, 80), "Swap");
  WriteCdfCsv(cdf, dir / "c.csv");
  EXPECT_EQ(RenderCdfSvg({cdf}, {}, "t", "h"),
            RenderCdfSvg({ReadCdfCsv(dir / "c.csv", "Swap")}, {}, "t", "h"));
}

TEST(ReferencePointsTest, PublishedValues) {
  const auto refs = BureauReferencePoints();
  ASSERT_EQ(refs.size(), 3u);
  EXPECT_EQ(refs[0].precision, 0.75);
  EXPECT_EQ(refs[0].recall, 0.85);
  EXPECT_EQ(refs[1].precision, 0.92);
  EXPECT_EQ(refs[1].recall, 0.17);
  EXPECT_EQ(refs[2].precision, 0.97);
  EXPECT_EQ(refs[2].recall, 0.015);
}

}  // namespace
}  // namespace reidbench
