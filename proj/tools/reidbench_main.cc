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

// reidbench command-line driver. One subcommand per pipeline stage; a
// config file overrides built-in defaults and flags override the config.
// Every stage writes into a staging directory that is moved into place only
// when the stage succeeds, so a failed run leaves no partial outputs.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "reidbench/config.h"
#include "reidbench/csv.h"
#include "reidbench/errors.h"
#include "reidbench/ingest.h"
#include "reidbench/mechanisms.h"
#include "reidbench/nonattack.h"
#include "reidbench/pipeline.h"
#include "reidbench/recon.h"
#include "reidbench/reid.h"
#include "reidbench/report.h"
#include "reidbench/synthgen.h"

namespace fs = std::filesystem;
using namespace reidbench;

namespace {

constexpr const char* kOutEnv = "REIDBENCH_OUT";
constexpr double kDefaultRugglesP = 0.78;
constexpr int kDefaultRugglesTolerance = 1;

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  bool entropy = false;
  int threads = 1;
  std::string out_dir;
};

// Collects a stage's outputs in a hidden sibling directory and moves them
// into the output directory on Commit(). The destructor removes whatever is
// left, which is everything if the stage threw.
class Staging {
 public:
  explicit Staging(const fs::path& out) : out_(out) {
    fs::create_directories(out_);
    std::random_device rd;
    dir_ = out_ / (".staging-" + std::to_string(rd()));
    fs::create_directories(dir_);
  }
  ~Staging() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }
  Staging(const Staging&) = delete;
  Staging& operator=(const Staging&) = delete;

  fs::path File(const std::string& name) const { return dir_ / name; }
  const fs::path& dir() const { return dir_; }

  void Commit() {
    for (const auto& entry : fs::directory_iterator(dir_)) {
      fs::rename(entry.path(), out_ / entry.path().filename());
    }
  }

 private:
  fs::path out_;
  fs::path dir_;
};

Config LoadConfig(const Globals& g) {
  return g.config_path.empty() ? Config::Parse("") : Config::Load(g.config_path);
}

// Flag, then config "seed", then --entropy; otherwise refuse to run.
std::uint64_t ResolveSeed(const Globals& g, const Config& cfg) {
  if (g.seed) return *g.seed;
  if (auto v = cfg.GetInt("", "seed")) return static_cast<std::uint64_t>(*v);
  if (g.entropy) {
    std::random_device rd;
    const std::uint64_t seed =
        (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    std::cerr << "seed " << seed << " (from --entropy)\n";
    return seed;
  }
  throw ConfigError(
      "this stage is randomized: pass --seed, set seed in the config, or "
      "pass --entropy");
}

fs::path OutDir(const Globals& g) {
  if (!g.out_dir.empty()) return g.out_dir;
  if (const char* env = std::getenv(kOutEnv); env && *env) return env;
  return ".";
}

std::string Hash(const Config& cfg, std::uint64_t seed) {
  return HashHex(cfg.Canonical() + "\nseed=" + std::to_string(seed) + "\n");
}

void Set(Config& cfg, const char* section, const char* key, double v) {
  cfg.Set(section, key, FormatDouble(v));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Census disclosure-avoidance re-identification benchmark"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "Sectioned key/value config file")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Seed for every randomized step");
  app.add_flag("--entropy", g.entropy,
               "Allow a random seed when none is given (printed to stderr)");
  app.add_option("--threads", g.threads, "Worker threads")
      ->check(CLI::Range(1, 1024));
  app.add_option("--out", g.out_dir,
                 std::string("Output directory (default $") + kOutEnv +
                     " or .)");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate synthetic microdata");
  std::optional<std::int64_t> gen_blocks;
  gen->add_option("--blocks", gen_blocks, "Number of blocks");

  // protect
  auto* protect = app.add_subcommand(
      "protect", "Apply swapping and TDA-style noise to microdata");
  std::string protect_in;
  std::optional<double> swap_rate, sigma;
  bool protect_merged = false;
  protect->add_option("--microdata", protect_in, "Microdata CSV")
      ->required()
      ->check(CLI::ExistingFile);
  protect->add_option("--swap-rate", swap_rate, "Swap rate");
  protect->add_option("--sigma", sigma, "TDA noise standard deviation");
  protect->add_flag("--merged", protect_merged,
                    "Also write a merged swap+TDA block file");

  // nonattack
  auto* nonattack = app.add_subcommand(
      "nonattack", "Majority-inference precision and recall");
  std::string na_tda, na_gt;
  std::vector<std::string> na_merged;
  std::optional<std::int64_t> na_threshold;
  nonattack->add_option("--tda", na_tda, "Released block table CSV")
      ->check(CLI::ExistingFile);
  nonattack->add_option("--gt", na_gt, "Ground-truth block table CSV")
      ->check(CLI::ExistingFile);
  nonattack
      ->add_option("--merged", na_merged,
                   "Merged block files (swap columns are the ground truth)")
      ->check(CLI::ExistingFile)
      ->excludes("--tda")
      ->excludes("--gt");
  nonattack->add_option("--threshold", na_threshold,
                        "Minimum majority count");

  // recon
  auto* recon = app.add_subcommand(
      "recon", "Publish block marginals from microdata and reconstruct them");
  std::string recon_in, recon_picker, recon_dump;
  recon->add_option("--microdata", recon_in, "Microdata CSV")
      ->required()
      ->check(CLI::ExistingFile);
  recon->add_option("--picker", recon_picker, "first | random");
  recon->add_option("--dump-constraints", recon_dump,
                    "Print one block's constraints and exit");

  // reid
  auto* reid = app.add_subcommand("reid", "Link reconstruction to prior data");
  std::string reid_recon, reid_prior;
  std::optional<int> reid_tol;
  reid->add_option("--recon", reid_recon, "Reconstructed records CSV")
      ->required()
      ->check(CLI::ExistingFile);
  reid->add_option("--prior", reid_prior, "Identified microdata CSV")
      ->required()
      ->check(CLI::ExistingFile);
  reid->add_option("--age-tolerance", reid_tol, "Extra years around age bins");

  // ruggles
  auto* ruggles =
      app.add_subcommand("ruggles", "Random-reconstruction baseline");
  std::optional<double> rg_p;
  std::optional<std::int64_t> rg_blocks;
  std::optional<int> rg_tol;
  ruggles->add_option("--p", rg_p, "Probability the race guess is right");
  ruggles->add_option("--blocks", rg_blocks, "Number of blocks");
  ruggles->add_option("--age-tolerance", rg_tol, "Age match tolerance");

  // ingest
  auto* ingest = app.add_subcommand(
      "ingest", "Split merged block files into swap and TDA tables");
  std::vector<std::string> ingest_in;
  ingest->add_option("inputs", ingest_in, "Merged block CSV files")
      ->required()
      ->check(CLI::ExistingFile);

  // report
  auto* report = app.add_subcommand(
      "report", "Precision CDF and whisker plots from precision CSVs");
  std::vector<std::string> rep_in, rep_labels;
  std::optional<std::int64_t> rep_threshold;
  report->add_option("--precision", rep_in, "Precision CSV files")
      ->required()
      ->check(CLI::ExistingFile);
  report->add_option("--label", rep_labels, "Series labels, one per file");
  report->add_option("--threshold", rep_threshold,
                     "Threshold the precision files were scored at");

  // pipeline
  auto* pipeline = app.add_subcommand(
      "pipeline", "gen -> protect -> nonattack -> report in one run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    Config cfg = LoadConfig(g);
    const fs::path out = OutDir(g);

    if (*gen) {
      if (gen_blocks) cfg.Set("gen", "n_blocks", std::to_string(*gen_blocks));
      const std::uint64_t seed = ResolveSeed(g, cfg);
      DemographyConfig dc =
          DemographyConfig::FromConfig(cfg, DemographyConfig::NationalLike());
      dc.seed = seed;
      const Population pop = GeneratePopulation(dc, g.threads);
      Staging st(out);
      WriteMicrodata(pop.records, st.File("microdata.csv"));
      WriteBlockTable(pop.truth, st.File("truth.csv"));
      st.Commit();
      std::cout << "gen: " << pop.block_ids.size() << " blocks, "
                << pop.records.size() << " persons, config " << Hash(cfg, seed)
                << "\n";
    } else if (*protect) {
      if (swap_rate) Set(cfg, "swap", "rate", *swap_rate);
      if (sigma) Set(cfg, "tda", "sigma", *sigma);
      const std::uint64_t seed = ResolveSeed(g, cfg);
      const PipelineConfig pc = PipelineConfig::FromConfig(cfg, seed);
      const auto records = ReadMicrodata(protect_in);
      const SwapResult swapped = SwapProtect(records, pc.swap);
      const BlockTable truth = Tabulate(records, true);
      BlockTable tda = TdaProtect(truth, pc.tda, g.threads);
      Staging st(out);
      WriteMicrodata(swapped.released, st.File("swap_microdata.csv"));
      WriteBlockTable(swapped.table, st.File("swap.csv"));
      WriteBlockTable(tda, st.File("tda.csv"));
      if (protect_merged) {
        ReleasePair pair{swapped.table, std::move(tda)};
        const ColumnMapping mapping = ColumnMapping::FromConfig(cfg);
        WriteBlockTables(pair, st.File("merged.csv"), mapping);
      }
      st.Commit();
      for (const auto& w : swapped.warnings) std::cerr << "warning: " << w << "\n";
      std::cout << "protect: " << swapped.pairs << " swap pairs, sigma "
                << FormatDouble(pc.tda.sigma) << ", config "
                << pc.config_hash << "\n";
    } else if (*nonattack) {
      if (na_threshold) {
        cfg.Set("nonattack", "threshold", std::to_string(*na_threshold));
      }
      const std::int64_t threshold =
          cfg.GetInt("nonattack", "threshold").value_or(
              kDefaultMajorityThreshold);
      if (threshold < 1) throw ConfigError("threshold must be >= 1");
      std::vector<double> cutoffs(std::begin(kStandardCutoffs),
                                  std::end(kStandardCutoffs));
      if (auto v = cfg.GetDoubleList("nonattack", "cutoffs")) cutoffs = *v;

      BlockTable released, gt;
      if (!na_merged.empty()) {
        std::vector<fs::path> paths(na_merged.begin(), na_merged.end());
        ReleasePair pair =
            LoadBlockTables(paths, ColumnMapping::FromConfig(cfg), g.threads);
        released = std::move(pair.tda);
        gt = std::move(pair.swap);
      } else {
        if (na_tda.empty() || na_gt.empty()) {
          throw ConfigError("nonattack needs --tda and --gt, or --merged");
        }
        released = ReadBlockTable(na_tda, Provenance::kTda);
        gt = ReadBlockTable(na_gt, Provenance::kGroundTruth);
      }
      const PrecisionRecordSet set =
          RunNonattack(released, gt, threshold, g.threads);
      const std::string hash = HashHex(cfg.Canonical());
      Staging st(out);
      WritePrecisionCsv(set, st.File("precision.csv"));
      WriteTextFile(st.File("nonattack_summary.json"),
                    NonattackSummaryJson(set, cutoffs, hash));
      st.Commit();
      std::cout << "nonattack: " << set.entries.size() << " blocks, recall";
      for (double c : cutoffs) {
        std::cout << " @" << FormatDouble(c) << "=" << FormatDouble(RecallAt(set, c));
      }
      std::cout << "\n";
    } else if (*recon) {
      if (!recon_picker.empty()) cfg.Set("recon", "picker", "\"" + recon_picker + "\"");
      const ReleaseSpec spec = ReleaseSpec::FromConfig(cfg, ReleaseSpec{});
      ReconstructOptions opts =
          ReconstructOptions::FromConfig(cfg, ReconstructOptions{});
      opts.threads = g.threads;
      const auto records = ReadMicrodata(recon_in);
      const TabularRelease release = PublishRelease(records, spec);
      if (!recon_dump.empty()) {
        DumpConstraints(DeriveConstraints(release, recon_dump), std::cout);
        return 0;
      }
      std::uint64_t seed = 0;
      if (opts.picker == PickerKind::kRandom) {
        seed = ResolveSeed(g, cfg);
        opts.seed = seed;
      }
      const auto rec = Reconstruct(release, opts);
      Staging st(out);
      WriteReconstructed(rec, st.File("reconstructed.csv"));
      st.Commit();
      std::cout << "recon: " << release.blocks.size() << " blocks, "
                << rec.size() << " records, config " << Hash(cfg, seed)
                << "\n";
    } else if (*reid) {
      if (reid_tol) cfg.Set("recon", "age_tolerance", std::to_string(*reid_tol));
      const int tol =
          static_cast<int>(cfg.GetInt("recon", "age_tolerance").value_or(0));
      if (tol < 0) throw ConfigError("age tolerance must be >= 0");
      const bool voting_only =
          cfg.GetBool("recon", "voting_age_only").value_or(false);
      const auto rec = ReadReconstructed(reid_recon);
      const auto prior =
          PriorKnowledge::FromRecords(ReadMicrodata(reid_prior), voting_only);
      const ReidReport rr = LinkAndInfer(rec, prior, tol);
      Staging st(out);
      WriteTextFile(st.File("reid.json"),
                    ReidReportJson(rr, HashHex(cfg.Canonical())));
      st.Commit();
      const auto p = rr.overall.precision();
      std::cout << "reid: putative " << rr.overall.putative << ", confirmed "
                << rr.overall.confirmed << ", prior " << rr.overall.prior_total
                << ", precision " << (p ? FormatDouble(*p) : "n/a")
                << ", recall_linked " << FormatDouble(rr.overall.recall_linked())
                << ", recall_correct "
                << FormatDouble(rr.overall.recall_correct()) << "\n";
    } else if (*ruggles) {
      if (rg_p) Set(cfg, "ruggles", "p", *rg_p);
      if (rg_blocks) cfg.Set("ruggles", "blocks", std::to_string(*rg_blocks));
      if (rg_tol) cfg.Set("ruggles", "age_tolerance", std::to_string(*rg_tol));
      const std::uint64_t seed = ResolveSeed(g, cfg);
      DemographyConfig dc =
          DemographyConfig::FromConfig(cfg, DemographyConfig::NationalLike());
      dc.seed = seed;
      if (auto v = cfg.GetInt("ruggles", "blocks")) dc.n_blocks = *v;
      const double p = cfg.GetDouble("ruggles", "p").value_or(kDefaultRugglesP);
      const int tol = static_cast<int>(
          cfg.GetInt("ruggles", "age_tolerance")
              .value_or(kDefaultRugglesTolerance));
      const RugglesResult r = RugglesBaseline(dc, p, tol, g.threads);
      std::cout << "ruggles: match_rate " << FormatDouble(r.match_rate())
                << " (" << r.matched << "/" << r.records
                << " records, age/sex matched " << r.age_sex_matched
                << "), config " << Hash(cfg, seed) << "\n";
    } else if (*ingest) {
      std::vector<fs::path> paths(ingest_in.begin(), ingest_in.end());
      const ReleasePair pair =
          LoadBlockTables(paths, ColumnMapping::FromConfig(cfg), g.threads);
      Staging st(out);
      WriteBlockTable(pair.swap, st.File("swap.csv"));
      WriteBlockTable(pair.tda, st.File("tda.csv"));
      st.Commit();
      std::cout << "ingest: " << pair.swap.size() << " blocks from "
                << paths.size() << " file(s)\n";
    } else if (*report) {
      if (!rep_labels.empty() && rep_labels.size() != rep_in.size()) {
        throw ConfigError("--label must be given once per --precision file");
      }
      const std::int64_t threshold = rep_threshold.value_or(
          cfg.GetInt("nonattack", "threshold").value_or(
              kDefaultMajorityThreshold));
      BlockSizeBins bins = BlockSizeBins::Default();
      if (auto v = cfg.GetIntList("report", "bin_edges")) {
        bins = BlockSizeBins::FromLowerEdges(*v);
      }
      const std::string hash = HashHex(cfg.Canonical());
      Staging st(out);
      std::vector<CdfSeries> series;
      std::vector<LabeledWhiskers> whiskers;
      for (std::size_t i = 0; i < rep_in.size(); ++i) {
        const std::string label = rep_labels.empty()
                                      ? fs::path(rep_in[i]).stem().string()
                                      : rep_labels[i];
        const PrecisionRecordSet set = ReadPrecisionCsv(rep_in[i], threshold);
        const std::string cdf_name = "cdf_" + std::to_string(i) + ".csv";
        WriteCdfCsv(PrecisionCdf(set, label), st.File(cdf_name));
        series.push_back(ReadCdfCsv(st.File(cdf_name), label));
        WhiskerReport w = PerBinWhiskers(set, bins);
        WriteWhiskersCsv(w, st.File("whiskers_" + std::to_string(i) + ".csv"));
        for (const auto& note : w.notes) std::cerr << label << ": " << note << "\n";
        whiskers.push_back({label, std::move(w)});
      }
      WriteTextFile(st.File("cdf.svg"),
                    RenderCdfSvg(series, BureauReferencePoints(),
                                 "Majority-inference precision", hash));
      WriteTextFile(st.File("whiskers.svg"),
                    RenderWhiskersSvg(whiskers, "Precision by block size",
                                      hash));
      st.Commit();
      std::cout << "report: " << series.size() << " series written to "
                << out.string() << "\n";
    } else if (*pipeline) {
      const std::uint64_t seed = ResolveSeed(g, cfg);
      const PipelineConfig pc = PipelineConfig::FromConfig(cfg, seed);
      const PipelineResult r = RunPipeline(pc, g.threads);
      Staging st(out);
      WritePipelineArtifacts(r, pc, st.dir());
      st.Commit();
      std::cout << "pipeline: " << r.population.block_ids.size()
                << " blocks, recall@0.75 swap "
                << FormatDouble(RecallAt(r.swap_precision, 0.75)) << " tda "
                << FormatDouble(RecallAt(r.tda_precision, 0.75))
                << ", config " << pc.config_hash << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
