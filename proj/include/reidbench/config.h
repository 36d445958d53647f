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

#ifndef REIDBENCH_CONFIG_H_
#define REIDBENCH_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace reidbench {

// Sectioned key/value text format (a small TOML subset):
//
//   # comment
//   [section]
//   key = 12
//   name = "text"
//   flag = true
//   weights = [0.5, 0.25, 0.25]
//
// Keys outside any section live in section "". Typed getters throw
// ConfigError on a type mismatch; absent keys yield nullopt.
class Config {
 public:
  static Config Parse(std::string_view text);
  static Config Load(const std::filesystem::path& path);

  bool Has(std::string_view section, std::string_view key) const;

  std::optional<std::string> GetString(std::string_view section,
                                       std::string_view key) const;
  std::optional<double> GetDouble(std::string_view section,
                                  std::string_view key) const;
  std::optional<std::int64_t> GetInt(std::string_view section,
                                     std::string_view key) const;
  std::optional<bool> GetBool(std::string_view section,
                              std::string_view key) const;
  std::optional<std::vector<double>> GetDoubleList(
      std::string_view section, std::string_view key) const;
  std::optional<std::vector<std::int64_t>> GetIntList(
      std::string_view section, std::string_view key) const;
  std::optional<std::vector<std::string>> GetStringList(
      std::string_view section, std::string_view key) const;

  // Programmatic override, e.g. from a command-line flag.
  void Set(std::string_view section, std::string_view key,
           std::string_view raw_value);

  // Canonical text (sorted sections and keys). Stable across whitespace and
  // ordering differences in the source file.
  std::string Canonical() const;

 private:
  struct Value {
    std::string raw;
    bool is_list = false;
    std::vector<std::string> items;
    int line = 0;
  };
  const Value* Lookup(std::string_view section, std::string_view key) const;
  static Value ParseValue(std::string_view text, int line);

  std::map<std::string, std::map<std::string, Value>> sections_;
};

// 64-bit FNV-1a, rendered as 16 hex digits.
std::string HashHex(std::string_view data);

}  // namespace reidbench

#endif  // REIDBENCH_CONFIG_H_
