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

#include "reidbench/recon.h"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "reidbench/csv.h"
#include "reidbench/errors.h"
#include "reidbench/parallel.h"
#include "reidbench/random.h"

namespace reidbench {
namespace {

const char* AttributeName(Attribute a) {
  switch (a) {
    case Attribute::kAge:
      return "age";
    case Attribute::kSex:
      return "sex";
    case Attribute::kCategory:
      return "category";
  }
  return "?";
}

Attribute ParseAttribute(std::string_view name) {
  if (name == "age") return Attribute::kAge;
  if (name == "sex") return Attribute::kSex;
  if (name == "category") return Attribute::kCategory;
  throw ConfigError("unknown attribute '" + std::string(name) + "'");
}

int AttributeValue(const ReconCell& cell, Attribute a) {
  switch (a) {
    case Attribute::kAge:
      return cell.age_bin;
    case Attribute::kSex:
      return static_cast<int>(cell.sex);
    case Attribute::kCategory:
      return cell.category.code();
  }
  return -1;
}

std::vector<Attribute> Intersect(const std::vector<Attribute>& a,
                                 const std::vector<Attribute>& b) {
  std::vector<Attribute> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

// Sums a marginal down to a subset of its attributes.
std::map<MarginalKey, std::int64_t> Reduce(const Marginal& m,
                                           const std::vector<Attribute>& to) {
  std::map<MarginalKey, std::int64_t> out;
  for (const auto& [key, count] : m.counts) {
    MarginalKey k{-1, -1, -1};
    for (Attribute a : to) {
      k[static_cast<int>(a)] = key[static_cast<int>(a)];
    }
    out[k] += count;
  }
  return out;
}

// Candidate cells and per-marginal bookkeeping for the search.
struct SearchSpace {
  std::vector<ReconCell> cells;
  // proj[i][m]: dense key id of cell i in marginal m.
  std::vector<std::vector<int>> proj;
  // closes[i]: (marginal, key id) pairs whose last candidate cell is i.
  std::vector<std::vector<std::pair<int, int>>> closes;
  std::vector<std::vector<std::int64_t>> initial;  // remaining per key
  bool unsat = false;
};

SearchSpace BuildSpace(const BlockConstraints& c, std::vector<ReconCell> cells) {
  SearchSpace s;
  const std::size_t nm = c.marginals.size();
  std::vector<std::map<MarginalKey, int>> key_ids(nm);
  s.initial.resize(nm);
  for (std::size_t m = 0; m < nm; ++m) {
    for (const auto& [key, count] : c.marginals[m].counts) {
      key_ids[m].emplace(key, static_cast<int>(s.initial[m].size()));
      s.initial[m].push_back(count);
    }
  }
  std::vector<std::vector<int>> last_use(nm);
  for (std::size_t m = 0; m < nm; ++m) last_use[m].assign(s.initial[m].size(), -1);

  for (const auto& cell : cells) {
    std::vector<int> ids(nm);
    bool usable = true;
    for (std::size_t m = 0; m < nm && usable; ++m) {
      auto it = key_ids[m].find(Project(cell, c.marginals[m].attributes));
      usable = it != key_ids[m].end();
      if (usable) ids[m] = it->second;
    }
    if (!usable) continue;
    const int index = static_cast<int>(s.cells.size());
    for (std::size_t m = 0; m < nm; ++m) last_use[m][ids[m]] = index;
    s.cells.push_back(cell);
    s.proj.push_back(std::move(ids));
  }
  s.closes.resize(s.cells.size());
  for (std::size_t m = 0; m < nm; ++m) {
    for (std::size_t k = 0; k < last_use[m].size(); ++k) {
      if (last_use[m][k] < 0) {
        s.unsat = true;  // a released count no cell can supply
      } else {
        s.closes[last_use[m][k]].emplace_back(static_cast<int>(m),
                                              static_cast<int>(k));
      }
    }
  }
  return s;
}

// Cartesian product of the attribute values every covering marginal admits,
// in (age, sex, category) order.
std::vector<ReconCell> CandidateCells(const BlockConstraints& c) {
  std::array<std::optional<std::set<int>>, kNumAttributes> domain;
  for (const auto& m : c.marginals) {
    for (Attribute a : m.attributes) {
      std::set<int> values;
      for (const auto& [key, count] : m.counts) {
        if (count > 0) values.insert(key[static_cast<int>(a)]);
      }
      auto& d = domain[static_cast<int>(a)];
      if (!d) {
        d = std::move(values);
      } else {
        std::set<int> both;
        std::set_intersection(d->begin(), d->end(), values.begin(),
                              values.end(), std::inserter(both, both.end()));
        d = std::move(both);
      }
    }
  }
  for (int a = 0; a < kNumAttributes; ++a) {
    if (!domain[a]) {
      throw ValidationError(std::string("attribute ") +
                            AttributeName(static_cast<Attribute>(a)) +
                            " is not constrained by any marginal");
    }
  }
  std::vector<ReconCell> cells;
  for (int age : *domain[0]) {
    for (int sex : *domain[1]) {
      for (int cat : *domain[2]) {
        cells.push_back({age, static_cast<Sex>(sex),
                         RaceEthnicityCode::FromCode(cat)});
      }
    }
  }
  return cells;
}

class Enumerator {
 public:
  Enumerator(const SearchSpace& space, std::size_t cap)
      : s_(space), cap_(cap), remaining_(space.initial),
        chosen_(space.cells.size(), 0) {}

  SolveResult Run() {
    SolveResult r;
    if (s_.unsat) {
      r.unsat = true;
      return r;
    }
    if (cap_ > 0) Visit(0);
    r.solutions = std::move(found_);
    r.capped = capped_;
    r.unsat = r.solutions.empty() && !capped_;
    return r;
  }

 private:
  void Visit(std::size_t i) {
    if (i == s_.cells.size()) {
      Solution sol;
      for (std::size_t j = 0; j < chosen_.size(); ++j) {
        sol.insert(sol.end(), static_cast<std::size_t>(chosen_[j]),
                   s_.cells[j]);
      }
      found_.push_back(std::move(sol));
      if (found_.size() >= cap_) capped_ = true;
      return;
    }
    const auto& ids = s_.proj[i];
    std::int64_t hi = remaining_[0][ids[0]];
    for (std::size_t m = 1; m < ids.size(); ++m) {
      hi = std::min(hi, remaining_[m][ids[m]]);
    }
    std::int64_t lo = 0;
    // A key whose last cell is i must be used up exactly here.
    for (const auto& [m, k] : s_.closes[i]) {
      const std::int64_t need = remaining_[m][k];
      lo = std::max(lo, need);
      hi = std::min(hi, need);
    }
    for (std::int64_t n = hi; n >= lo && !capped_; --n) {
      for (std::size_t m = 0; m < ids.size(); ++m) remaining_[m][ids[m]] -= n;
      chosen_[i] = n;
      Visit(i + 1);
      for (std::size_t m = 0; m < ids.size(); ++m) remaining_[m][ids[m]] += n;
    }
    chosen_[i] = 0;
  }

  const SearchSpace& s_;
  std::size_t cap_;
  std::vector<std::vector<std::int64_t>> remaining_;
  std::vector<std::int64_t> chosen_;
  std::vector<Solution> found_;
  bool capped_ = false;
};

bool PairwiseDisjoint(const std::vector<Marginal>& marginals) {
  for (std::size_t i = 0; i < marginals.size(); ++i) {
    for (std::size_t j = i + 1; j < marginals.size(); ++j) {
      if (!Intersect(marginals[i].attributes, marginals[j].attributes)
               .empty()) {
        return false;
      }
    }
  }
  return true;
}

// With attribute-disjoint marginals any alignment of their expanded value
// lists is a solution; shuffling each list gives a random one.
Solution RandomProductSolution(const BlockConstraints& c, std::mt19937_64& rng) {
  std::vector<ReconCell> cells(static_cast<std::size_t>(c.total));
  for (const auto& m : c.marginals) {
    std::vector<MarginalKey> expanded;
    for (const auto& [key, count] : m.counts) {
      expanded.insert(expanded.end(), static_cast<std::size_t>(count), key);
    }
    std::shuffle(expanded.begin(), expanded.end(), rng);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      for (Attribute a : m.attributes) {
        const int v = expanded[i][static_cast<int>(a)];
        switch (a) {
          case Attribute::kAge:
            cells[i].age_bin = v;
            break;
          case Attribute::kSex:
            cells[i].sex = static_cast<Sex>(v);
            break;
          case Attribute::kCategory:
            cells[i].category = RaceEthnicityCode::FromCode(v);
            break;
        }
      }
    }
  }
  std::sort(cells.begin(), cells.end());
  return cells;
}

std::string AttributeList(const std::vector<Attribute>& attrs) {
  std::string out;
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    if (i > 0) out += ',';
    out += AttributeName(attrs[i]);
  }
  return out;
}

}  // namespace

AgeBins AgeBins::SexByAgeTable() {
  return FromLowerEdges({0,  5,  10, 15, 18, 20, 21, 22, 25, 30, 35, 40,
                         45, 50, 55, 60, 62, 65, 67, 70, 75, 80, 85});
}

AgeBins AgeBins::SingleYears(int max_age) {
  std::vector<int> edges;
  for (int a = 0; a <= max_age; ++a) edges.push_back(a);
  return FromLowerEdges(std::move(edges));
}

AgeBins AgeBins::FromLowerEdges(std::vector<int> edges) {
  if (edges.empty() || edges.front() != 0) {
    throw ConfigError("age bin edges must start at 0");
  }
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i] <= edges[i - 1]) {
      throw ConfigError("age bin edges must increase strictly");
    }
  }
  AgeBins bins;
  bins.edges_ = std::move(edges);
  return bins;
}

int AgeBins::IndexOf(int age) const {
  if (age < 0) throw ValidationError("negative age");
  auto it = std::upper_bound(edges_.begin(), edges_.end(), age);
  return static_cast<int>(it - edges_.begin()) - 1;
}

std::optional<int> AgeBins::upper(int bin) const {
  if (bin + 1 >= size()) return std::nullopt;
  return edges_[bin + 1] - 1;
}

int AgeBins::Representative(int bin) const {
  const auto hi = upper(bin);
  return hi ? (edges_[bin] + *hi) / 2 : edges_[bin];
}

MarginalKey Project(const ReconCell& cell,
                    const std::vector<Attribute>& attributes) {
  MarginalKey key{-1, -1, -1};
  for (Attribute a : attributes) {
    key[static_cast<int>(a)] = AttributeValue(cell, a);
  }
  return key;
}

ReleaseSpec ReleaseSpec::FromConfig(const Config& cfg, const ReleaseSpec& base) {
  ReleaseSpec spec = base;
  if (auto bins = cfg.GetString("recon", "age_bins")) {
    if (*bins == "table") {
      spec.age_bins = AgeBins::SexByAgeTable();
    } else if (*bins == "single_year") {
      spec.age_bins = AgeBins::SingleYears();
    } else {
      throw ConfigError("recon.age_bins: expected table or single_year");
    }
  }
  if (auto edges = cfg.GetIntList("recon", "age_edges")) {
    spec.age_bins = AgeBins::FromLowerEdges(
        std::vector<int>(edges->begin(), edges->end()));
  }
  if (auto marginals = cfg.GetStringList("recon", "marginals")) {
    spec.marginals.clear();
    for (const auto& text : *marginals) {
      std::vector<Attribute> attrs;
      std::stringstream ss(text);
      std::string name;
      while (std::getline(ss, name, ',')) {
        name.erase(0, name.find_first_not_of(' '));
        name.erase(name.find_last_not_of(' ') + 1);
        attrs.push_back(ParseAttribute(name));
      }
      spec.marginals.push_back(std::move(attrs));
    }
  }
  if (auto v = cfg.GetBool("recon", "voting_age_only")) spec.voting_age_only = *v;
  spec.Validate();
  return spec;
}

void ReleaseSpec::Validate() const {
  std::array<bool, kNumAttributes> covered{};
  if (marginals.empty()) throw ConfigError("release has no marginals");
  for (const auto& attrs : marginals) {
    if (attrs.empty()) throw ConfigError("empty marginal");
    if (!std::is_sorted(attrs.begin(), attrs.end()) ||
        std::adjacent_find(attrs.begin(), attrs.end()) != attrs.end()) {
      throw ConfigError("marginal attributes must be listed once, in "
                        "age, sex, category order");
    }
    for (Attribute a : attrs) covered[static_cast<int>(a)] = true;
  }
  for (int a = 0; a < kNumAttributes; ++a) {
    if (!covered[a]) {
      throw ConfigError(std::string("no released marginal covers ") +
                        AttributeName(static_cast<Attribute>(a)));
    }
  }
}

TabularRelease PublishRelease(const std::vector<PersonRecord>& records,
                              const ReleaseSpec& spec) {
  spec.Validate();
  TabularRelease release;
  release.spec = spec;
  for (const auto& r : records) {
    auto it = release.blocks.find(r.block_id);
    if (it == release.blocks.end()) {
      BlockRelease b;
      for (const auto& attrs : spec.marginals) {
        b.marginals.push_back(Marginal{attrs, {}});
      }
      it = release.blocks.emplace(r.block_id, std::move(b)).first;
    }
    if (spec.voting_age_only && !r.voting_age()) continue;
    const ReconCell cell{spec.age_bins.IndexOf(r.age), r.sex, r.category};
    ++it->second.total;
    for (auto& m : it->second.marginals) ++m.counts[Project(cell, m.attributes)];
  }
  return release;
}

BlockConstraints DeriveConstraints(const TabularRelease& release,
                                   std::string_view block_id) {
  auto it = release.blocks.find(block_id);
  if (it == release.blocks.end()) {
    throw AlignmentError("block " + std::string(block_id) +
                         " not in the release");
  }
  BlockConstraints c;
  c.block_id = std::string(block_id);
  c.total = it->second.total;
  c.age_bins = release.spec.age_bins;
  c.marginals = it->second.marginals;
  for (auto& m : c.marginals) {
    std::int64_t sum = 0;
    for (auto kv = m.counts.begin(); kv != m.counts.end();) {
      if (kv->second < 0) {
        throw ValidationError("negative released count in block " + c.block_id);
      }
      sum += kv->second;
      kv = kv->second == 0 ? m.counts.erase(kv) : std::next(kv);
    }
    if (sum != c.total) {
      throw ValidationError("block " + c.block_id + ": marginal " +
                            AttributeList(m.attributes) + " sums to " +
                            std::to_string(sum) + ", total is " +
                            std::to_string(c.total));
    }
  }
  for (std::size_t i = 0; i < c.marginals.size(); ++i) {
    for (std::size_t j = i + 1; j < c.marginals.size(); ++j) {
      const auto shared =
          Intersect(c.marginals[i].attributes, c.marginals[j].attributes);
      if (shared.empty()) continue;
      if (Reduce(c.marginals[i], shared) != Reduce(c.marginals[j], shared)) {
        throw ValidationError("block " + c.block_id + ": marginals " +
                              AttributeList(c.marginals[i].attributes) +
                              " and " +
                              AttributeList(c.marginals[j].attributes) +
                              " disagree on " + AttributeList(shared));
      }
    }
  }
  return c;
}

bool Satisfies(const BlockConstraints& c, const std::vector<ReconCell>& cells) {
  if (static_cast<std::int64_t>(cells.size()) != c.total) return false;
  for (const auto& m : c.marginals) {
    std::map<MarginalKey, std::int64_t> got;
    for (const auto& cell : cells) ++got[Project(cell, m.attributes)];
    if (got != m.counts) return false;
  }
  return true;
}

void DumpConstraints(const BlockConstraints& c, std::ostream& out) {
  out << "block " << c.block_id << " total " << c.total << '\n';
  for (const auto& m : c.marginals) {
    out << "marginal " << AttributeList(m.attributes) << '\n';
    for (const auto& [key, count] : m.counts) {
      out << "  ";
      for (std::size_t i = 0; i < m.attributes.size(); ++i) {
        if (i > 0) out << ',';
        const int v = key[static_cast<int>(m.attributes[i])];
        switch (m.attributes[i]) {
          case Attribute::kAge: {
            const auto hi = c.age_bins.upper(v);
            out << c.age_bins.lower(v) << '-'
                << (hi ? std::to_string(*hi) : std::string());
            break;
          }
          case Attribute::kSex:
            out << SexToChar(static_cast<Sex>(v));
            break;
          case Attribute::kCategory:
            out << 'c' << v;
            break;
        }
      }
      out << ' ' << count << '\n';
    }
  }
}

SolveResult SolveBlock(const BlockConstraints& c, std::size_t enumerate_cap) {
  if (c.total == 0) {
    SolveResult r;
    r.solutions.emplace_back();
    return r;
  }
  const SearchSpace space = BuildSpace(c, CandidateCells(c));
  return Enumerator(space, enumerate_cap).Run();
}

ReconstructOptions ReconstructOptions::FromConfig(
    const Config& cfg, const ReconstructOptions& base) {
  ReconstructOptions o = base;
  if (auto v = cfg.GetString("recon", "picker")) {
    if (*v == "first") {
      o.picker = PickerKind::kFirst;
    } else if (*v == "random") {
      o.picker = PickerKind::kRandom;
    } else {
      throw ConfigError("recon.picker: expected first or random");
    }
  }
  if (auto v = cfg.GetInt("recon", "seed")) o.seed = static_cast<std::uint64_t>(*v);
  if (auto v = cfg.GetInt("recon", "exhaustive_bound")) o.exhaustive_bound = *v;
  if (auto v = cfg.GetInt("recon", "enumerate_cap")) {
    if (*v < 1) throw ConfigError("recon.enumerate_cap must be positive");
    o.enumerate_cap = static_cast<std::size_t>(*v);
  }
  return o;
}

std::vector<ReconstructedRecord> ToRecords(const std::string& block_id,
                                           const Solution& solution,
                                           const AgeBins& bins) {
  std::vector<ReconstructedRecord> out;
  out.reserve(solution.size());
  for (const auto& cell : solution) {
    ReconstructedRecord r;
    r.block_id = block_id;
    r.age = bins.Representative(cell.age_bin);
    r.age_lower = bins.lower(cell.age_bin);
    r.age_upper = bins.upper(cell.age_bin);
    r.sex = cell.sex;
    r.category = cell.category;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ReconstructedRecord> Reconstruct(const TabularRelease& release,
                                             const ReconstructOptions& opts) {
  std::vector<const std::string*> ids;
  for (const auto& [id, b] : release.blocks) ids.push_back(&id);
  std::vector<std::vector<ReconstructedRecord>> per_block(ids.size());
  ParallelFor(ids.size(), opts.threads, [&](std::size_t i) {
    const BlockConstraints c = DeriveConstraints(release, *ids[i]);
    Solution chosen;
    if (opts.picker == PickerKind::kFirst) {
      SolveResult r = SolveBlock(c, 1);
      if (r.solutions.empty()) {
        throw ValidationError("block " + c.block_id + " is unsatisfiable");
      }
      chosen = std::move(r.solutions.front());
    } else {
      std::mt19937_64 rng = Substream(opts.seed, Stream::kPicker, i);
      if (c.total <= opts.exhaustive_bound) {
        SolveResult r = SolveBlock(c, opts.enumerate_cap);
        if (r.solutions.empty()) {
          throw ValidationError("block " + c.block_id + " is unsatisfiable");
        }
        std::uniform_int_distribution<std::size_t> pick(
            0, r.solutions.size() - 1);
        chosen = std::move(r.solutions[pick(rng)]);
      } else if (PairwiseDisjoint(c.marginals)) {
        chosen = RandomProductSolution(c, rng);
      } else {
        // Randomised cell order, then the first solution found.
        std::vector<ReconCell> cells = CandidateCells(c);
        std::shuffle(cells.begin(), cells.end(), rng);
        SolveResult r = Enumerator(BuildSpace(c, std::move(cells)), 1).Run();
        if (r.solutions.empty()) {
          throw ValidationError("block " + c.block_id + " is unsatisfiable");
        }
        chosen = std::move(r.solutions.front());
        std::sort(chosen.begin(), chosen.end());
      }
    }
    per_block[i] = ToRecords(c.block_id, chosen, c.age_bins);
  });
  std::vector<ReconstructedRecord> out;
  for (auto& v : per_block) {
    out.insert(out.end(), std::make_move_iterator(v.begin()),
               std::make_move_iterator(v.end()));
  }
  return out;
}

void WriteReconstructed(const std::vector<ReconstructedRecord>& records,
                        const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << "block_id,age,age_lower,age_upper,sex,race,hispanic\n";
  for (const auto& r : records) {
    out << CsvEscape(r.block_id) << ',' << r.age << ',' << r.age_lower << ',';
    if (r.age_upper) out << *r.age_upper;
    out << ',' << SexToChar(r.sex) << ',' << r.category.race() << ','
        << (r.category.hispanic() ? 1 : 0) << '\n';
  }
  out.flush();
  if (!out) throw Error("write failed for " + path.string());
}

std::vector<ReconstructedRecord> ReadReconstructed(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) ||
      SplitCsvLine(line) !=
          std::vector<std::string>{"block_id", "age", "age_lower", "age_upper",
                                   "sex", "race", "hispanic"}) {
    throw SchemaError(path.string() + ": unexpected reconstructed header");
  }
  std::vector<ReconstructedRecord> out;
  long row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto f = SplitCsvLine(line);
    auto fail = [&](const std::string& why) {
      return DataError(path.string() + " row " + std::to_string(row) + ": " +
                       why);
    };
    if (f.size() != 7) throw fail("expected 7 fields");
    ReconstructedRecord r;
    r.block_id = f[0];
    auto age = ParseInt64(f[1]);
    auto lo = ParseInt64(f[2]);
    auto race = ParseInt64(f[5]);
    auto hisp = ParseInt64(f[6]);
    if (!age || !lo || !race || !hisp || *hisp < 0 || *hisp > 1 ||
        *race < 0 || *race >= kNumRaces) {
      throw fail("malformed field");
    }
    r.age = static_cast<int>(*age);
    r.age_lower = static_cast<int>(*lo);
    if (!f[3].empty()) {
      auto hi = ParseInt64(f[3]);
      if (!hi) throw fail("malformed age_upper");
      r.age_upper = static_cast<int>(*hi);
    }
    try {
      r.sex = SexFromString(f[4]);
    } catch (const ValidationError& e) {
      throw fail(e.what());
    }
    r.category = RaceEthnicityCode::Encode(static_cast<int>(*race), *hisp == 1);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace reidbench
