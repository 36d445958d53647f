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

#ifndef REIDBENCH_INGEST_H_
#define REIDBENCH_INGEST_H_

#include <filesystem>
#include <string>
#include <vector>

#include "reidbench/config.h"
#include "reidbench/model.h"

namespace reidbench {

// Where the block key and the 126 category counts of each release live in a
// merged block file. Category columns are listed in code order.
struct ColumnMapping {
  std::string block_key_column = "block_id";
  std::vector<std::string> swap_columns;
  std::vector<std::string> tda_columns;

  // block_id, swap_c000..swap_c125, tda_c000..tda_c125.
  static ColumnMapping Default();
  // Reads [ingest] block_key_column and either swap_columns / tda_columns
  // (explicit 126-element lists) or swap_prefix / tda_prefix (prefix plus a
  // zero-padded three digit code). Missing keys keep the defaults.
  static ColumnMapping FromConfig(const Config& cfg);

  // Throws SchemaError unless each release has exactly 126 distinct names
  // and no name is reused across the key and the two releases.
  void Validate() const;
};

struct ReleasePair {
  BlockTable swap{Provenance::kSwap};
  BlockTable tda{Provenance::kTda};
  friend bool operator==(const ReleasePair&, const ReleasePair&) = default;
};

// Streams each file row by row and merges them. Extra columns are ignored.
// Throws SchemaError for a missing column, DataError (with file and row) for
// a bad count, and DataError when a block appears in more than one file.
// The result does not depend on the order of `paths`.
ReleasePair LoadBlockTables(const std::vector<std::filesystem::path>& paths,
                            const ColumnMapping& mapping, int threads = 1);

// Header plus one row per block in block-id order.
void WriteBlockTables(const ReleasePair& tables,
                      const std::filesystem::path& path,
                      const ColumnMapping& mapping);

// Single-release file: block_id,c000..c125.
void WriteBlockTable(const BlockTable& table,
                     const std::filesystem::path& path);
BlockTable ReadBlockTable(const std::filesystem::path& path,
                          Provenance provenance);

// Microdata schema: person_id,block_id,age,sex,race,hispanic.
void WriteMicrodata(const std::vector<PersonRecord>& records,
                    const std::filesystem::path& path);
std::vector<PersonRecord> ReadMicrodata(const std::filesystem::path& path);

}  // namespace reidbench

#endif  // REIDBENCH_INGEST_H_
