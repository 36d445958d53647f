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

#include "reidbench/ingest.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <unordered_map>

#include "reidbench/csv.h"
#include "reidbench/errors.h"
#include "reidbench/parallel.h"

namespace reidbench {
namespace {

std::string CodeColumn(std::string_view prefix, int code) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "%03d", code);
  return std::string(prefix) + buf;
}

std::vector<std::string> PrefixedColumns(std::string_view prefix) {
  std::vector<std::string> cols;
  cols.reserve(kNumCategories);
  for (int c = 0; c < kNumCategories; ++c) cols.push_back(CodeColumn(prefix, c));
  return cols;
}

std::ofstream OpenForWrite(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  return out;
}

void FinishWrite(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error("write failed for " + path.string());
}

std::ifstream OpenForRead(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

using ColumnIndex = std::unordered_map<std::string, std::size_t>;

ColumnIndex IndexHeader(const std::vector<std::string>& header) {
  ColumnIndex index;
  for (std::size_t i = 0; i < header.size(); ++i) index.emplace(header[i], i);
  return index;
}

std::size_t Require(const ColumnIndex& index, const std::string& name,
                    const std::filesystem::path& path) {
  auto it = index.find(name);
  if (it == index.end()) {
    throw SchemaError(path.string() + ": missing column '" + name + "'");
  }
  return it->second;
}

std::int64_t ParseCount(const std::string& field,
                        const std::filesystem::path& path, long row,
                        const std::string& column) {
  auto v = ParseInt64(field);
  if (!v || *v < 0) {
    throw DataError(path.string() + " row " + std::to_string(row) +
                    ": column '" + column +
                    "' is not a non-negative integer: '" + field + "'");
  }
  return *v;
}

ReleasePair LoadOne(const std::filesystem::path& path,
                    const ColumnMapping& mapping) {
  std::ifstream in = OpenForRead(path);
  std::string line;
  if (!std::getline(in, line)) {
    throw SchemaError(path.string() + ": missing header row");
  }
  const ColumnIndex index = IndexHeader(SplitCsvLine(line));
  const std::size_t key_col = Require(index, mapping.block_key_column, path);
  std::vector<std::size_t> swap_cols, tda_cols;
  for (const auto& name : mapping.swap_columns) {
    swap_cols.push_back(Require(index, name, path));
  }
  for (const auto& name : mapping.tda_columns) {
    tda_cols.push_back(Require(index, name, path));
  }
  const std::size_t width = index.size();

  ReleasePair out;
  long row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto fields = SplitCsvLine(line);
    if (fields.size() < width) {
      throw DataError(path.string() + " row " + std::to_string(row) +
                      ": expected " + std::to_string(width) + " fields, got " +
                      std::to_string(fields.size()));
    }
    BlockHistogram swap, tda;
    swap.block_id = tda.block_id = fields[key_col];
    if (swap.block_id.empty()) {
      throw DataError(path.string() + " row " + std::to_string(row) +
                      ": empty block key");
    }
    for (int c = 0; c < kNumCategories; ++c) {
      swap.counts[c] = ParseCount(fields[swap_cols[c]], path, row,
                                  mapping.swap_columns[c]);
      tda.counts[c] =
          ParseCount(fields[tda_cols[c]], path, row, mapping.tda_columns[c]);
    }
    try {
      out.swap.Insert(std::move(swap));
      out.tda.Insert(std::move(tda));
    } catch (const ValidationError& e) {
      throw DataError(path.string() + " row " + std::to_string(row) + ": " +
                      e.what());
    }
  }
  return out;
}

void MergeInto(BlockTable& into, const BlockTable& from) {
  for (const auto& [id, h] : from) {
    if (into.Find(id) != nullptr) {
      throw DataError("block " + id + " appears in more than one input file");
    }
    into.Insert(h);
  }
}

}  // namespace

ColumnMapping ColumnMapping::Default() {
  ColumnMapping m;
  m.swap_columns = PrefixedColumns("swap_c");
  m.tda_columns = PrefixedColumns("tda_c");
  return m;
}

ColumnMapping ColumnMapping::FromConfig(const Config& cfg) {
  ColumnMapping m = Default();
  if (auto key = cfg.GetString("ingest", "block_key_column")) {
    m.block_key_column = *key;
  }
  if (auto p = cfg.GetString("ingest", "swap_prefix")) {
    m.swap_columns = PrefixedColumns(*p);
  }
  if (auto p = cfg.GetString("ingest", "tda_prefix")) {
    m.tda_columns = PrefixedColumns(*p);
  }
  if (auto cols = cfg.GetStringList("ingest", "swap_columns")) {
    m.swap_columns = *cols;
  }
  if (auto cols = cfg.GetStringList("ingest", "tda_columns")) {
    m.tda_columns = *cols;
  }
  m.Validate();
  return m;
}

void ColumnMapping::Validate() const {
  if (block_key_column.empty()) throw SchemaError("empty block key column");
  if (swap_columns.size() != kNumCategories ||
      tda_columns.size() != kNumCategories) {
    throw SchemaError("each release needs exactly 126 category columns");
  }
  std::set<std::string> seen{block_key_column};
  for (const auto* cols : {&swap_columns, &tda_columns}) {
    for (const auto& name : *cols) {
      if (!seen.insert(name).second) {
        throw SchemaError("column name '" + name + "' used more than once");
      }
    }
  }
}

ReleasePair LoadBlockTables(const std::vector<std::filesystem::path>& paths,
                            const ColumnMapping& mapping, int threads) {
  mapping.Validate();
  // Merge in sorted path order so error messages are stable too.
  std::vector<std::filesystem::path> sorted = paths;
  std::sort(sorted.begin(), sorted.end());
  std::vector<ReleasePair> parts(sorted.size());
  ParallelFor(sorted.size(), threads,
              [&](std::size_t i) { parts[i] = LoadOne(sorted[i], mapping); });
  ReleasePair merged;
  for (const auto& part : parts) {
    MergeInto(merged.swap, part.swap);
    MergeInto(merged.tda, part.tda);
  }
  return merged;
}

void WriteBlockTables(const ReleasePair& tables,
                      const std::filesystem::path& path,
                      const ColumnMapping& mapping) {
  mapping.Validate();
  CheckAligned(tables.swap, tables.tda);
  std::ofstream out = OpenForWrite(path);
  out << CsvEscape(mapping.block_key_column);
  for (const auto& c : mapping.swap_columns) out << ',' << CsvEscape(c);
  for (const auto& c : mapping.tda_columns) out << ',' << CsvEscape(c);
  out << '\n';
  auto it_tda = tables.tda.begin();
  for (const auto& [id, swap] : tables.swap) {
    out << CsvEscape(id);
    for (std::int64_t v : swap.counts) out << ',' << v;
    for (std::int64_t v : it_tda->second.counts) out << ',' << v;
    out << '\n';
    ++it_tda;
  }
  FinishWrite(out, path);
}

void WriteBlockTable(const BlockTable& table,
                     const std::filesystem::path& path) {
  std::ofstream out = OpenForWrite(path);
  out << "block_id";
  for (int c = 0; c < kNumCategories; ++c) out << ',' << CodeColumn("c", c);
  out << '\n';
  for (const auto& [id, h] : table) {
    out << CsvEscape(id);
    for (std::int64_t v : h.counts) out << ',' << v;
    out << '\n';
  }
  FinishWrite(out, path);
}

BlockTable ReadBlockTable(const std::filesystem::path& path,
                          Provenance provenance) {
  std::ifstream in = OpenForRead(path);
  std::string line;
  if (!std::getline(in, line)) {
    throw SchemaError(path.string() + ": missing header row");
  }
  const ColumnIndex index = IndexHeader(SplitCsvLine(line));
  const std::size_t key_col = Require(index, "block_id", path);
  std::vector<std::size_t> cols;
  const auto names = PrefixedColumns("c");
  for (const auto& name : names) cols.push_back(Require(index, name, path));

  BlockTable table(provenance);
  long row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto fields = SplitCsvLine(line);
    if (fields.size() < index.size()) {
      throw DataError(path.string() + " row " + std::to_string(row) +
                      ": short row");
    }
    BlockHistogram h;
    h.block_id = fields[key_col];
    for (int c = 0; c < kNumCategories; ++c) {
      h.counts[c] = ParseCount(fields[cols[c]], path, row, names[c]);
    }
    try {
      table.Insert(std::move(h));
    } catch (const ValidationError& e) {
      throw DataError(path.string() + " row " + std::to_string(row) + ": " +
                      e.what());
    }
  }
  return table;
}

void WriteMicrodata(const std::vector<PersonRecord>& records,
                    const std::filesystem::path& path) {
  std::ofstream out = OpenForWrite(path);
  out << "person_id,block_id,age,sex,race,hispanic\n";
  for (const auto& r : records) {
    out << CsvEscape(r.person_id) << ',' << CsvEscape(r.block_id) << ','
        << r.age << ',' << SexToChar(r.sex) << ',' << r.category.race() << ','
        << (r.category.hispanic() ? 1 : 0) << '\n';
  }
  FinishWrite(out, path);
}

std::vector<PersonRecord> ReadMicrodata(const std::filesystem::path& path) {
  std::ifstream in = OpenForRead(path);
  std::string line;
  if (!std::getline(in, line)) {
    throw SchemaError(path.string() + ": missing header row");
  }
  const ColumnIndex index = IndexHeader(SplitCsvLine(line));
  const std::size_t pid = Require(index, "person_id", path);
  const std::size_t block = Require(index, "block_id", path);
  const std::size_t age = Require(index, "age", path);
  const std::size_t sex = Require(index, "sex", path);
  const std::size_t race = Require(index, "race", path);
  const std::size_t hisp = Require(index, "hispanic", path);

  std::vector<PersonRecord> records;
  long row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto f = SplitCsvLine(line);
    if (f.size() < index.size()) {
      throw DataError(path.string() + " row " + std::to_string(row) +
                      ": short row");
    }
    try {
      PersonRecord r;
      r.person_id = f[pid];
      r.block_id = f[block];
      r.age = static_cast<int>(ParseCount(f[age], path, row, "age"));
      r.sex = SexFromString(f[sex]);
      const auto race_v = ParseCount(f[race], path, row, "race");
      const auto hisp_v = ParseCount(f[hisp], path, row, "hispanic");
      if (hisp_v > 1) throw ValidationError("hispanic must be 0 or 1");
      r.category = RaceEthnicityCode::Encode(
          static_cast<int>(std::min<std::int64_t>(race_v, kNumRaces)),
                                             hisp_v == 1);
      records.push_back(std::move(r));
    } catch (const ValidationError& e) {
      throw DataError(path.string() + " row " + std::to_string(row) + ": " +
                      e.what());
    }
  }
  return records;
}

}  // namespace reidbench
