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

#ifndef REIDBENCH_CSV_H_
#define REIDBENCH_CSV_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace reidbench {

// Splits one comma-separated line. Double-quoted fields may contain commas
// and doubled quotes. A trailing '\r' is ignored.
std::vector<std::string> SplitCsvLine(std::string_view line);

// Quotes a field if it contains a comma, quote or newline.
std::string CsvEscape(std::string_view field);

// Shortest decimal form that parses back to the same double.
std::string FormatDouble(double v);

// Strict base-10 parse of the whole field; nullopt on any junk.
std::optional<std::int64_t> ParseInt64(std::string_view field);
std::optional<double> ParseDouble(std::string_view field);

}  // namespace reidbench

#endif  // REIDBENCH_CSV_H_
