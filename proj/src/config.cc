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

#include "reidbench/config.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "reidbench/errors.h"

namespace reidbench {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Strips a trailing # comment that is not inside a quoted string.
std::string_view StripComment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

std::string Unquote(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    return std::string(s.substr(1, s.size() - 2));
  }
  return std::string(s);
}

std::string Where(std::string_view section, std::string_view key) {
  return section.empty() ? std::string(key)
                         : std::string(section) + "." + std::string(key);
}

double ToDouble(std::string_view text, std::string_view section,
                std::string_view key) {
  double v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(Where(section, key) + ": expected a number, got '" +
                      std::string(text) + "'");
  }
  return v;
}

std::int64_t ToInt(std::string_view text, std::string_view section,
                   std::string_view key) {
  std::int64_t v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(Where(section, key) + ": expected an integer, got '" +
                      std::string(text) + "'");
  }
  return v;
}

}  // namespace

Config::Value Config::ParseValue(std::string_view text, int line) {
  Value v;
  v.raw = std::string(text);
  v.line = line;
  if (!text.empty() && text.front() == '[') {
    if (text.back() != ']') {
      throw ConfigError("line " + std::to_string(line) + ": unterminated list");
    }
    v.is_list = true;
    std::string_view body = Trim(text.substr(1, text.size() - 2));
    while (!body.empty()) {
      std::size_t comma = std::string_view::npos;
      bool quoted = false;
      for (std::size_t i = 0; i < body.size(); ++i) {
        if (body[i] == '"') quoted = !quoted;
        if (body[i] == ',' && !quoted) {
          comma = i;
          break;
        }
      }
      std::string_view item = Trim(body.substr(0, comma));
      if (!item.empty()) v.items.push_back(Unquote(item));
      if (comma == std::string_view::npos) break;
      body = Trim(body.substr(comma + 1));
    }
  }
  return v;
}

Config Config::Parse(std::string_view text) {
  Config cfg;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw_line;
  std::string pending;  // multi-line list accumulator
  int pending_line = 0;
  int line_no = 0;
  std::string pending_key;
  while (std::getline(in, raw_line)) {
    ++line_no;
    std::string_view line = Trim(StripComment(raw_line));
    if (!pending_key.empty()) {
      pending += " ";
      pending += line;
      if (!line.empty() && line.back() == ']') {
        cfg.sections_[section][pending_key] =
            ParseValue(Trim(pending), pending_line);
        pending_key.clear();
        pending.clear();
      }
      continue;
    }
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(line_no) +
                          ": malformed section header");
      }
      section = std::string(Trim(line.substr(1, line.size() - 2)));
      cfg.sections_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected key = value");
    }
    std::string key(Trim(line.substr(0, eq)));
    std::string_view value = Trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    }
    if (!value.empty() && value.front() == '[' && value.back() != ']') {
      pending_key = key;
      pending = std::string(value);
      pending_line = line_no;
      continue;
    }
    cfg.sections_[section][key] = ParseValue(value, line_no);
  }
  if (!pending_key.empty()) {
    throw ConfigError("line " + std::to_string(pending_line) +
                      ": unterminated list");
  }
  return cfg;
}

Config Config::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return Parse(buf.str());
}

const Config::Value* Config::Lookup(std::string_view section,
                                    std::string_view key) const {
  auto s = sections_.find(std::string(section));
  if (s == sections_.end()) return nullptr;
  auto k = s->second.find(std::string(key));
  return k == s->second.end() ? nullptr : &k->second;
}

bool Config::Has(std::string_view section, std::string_view key) const {
  return Lookup(section, key) != nullptr;
}

std::optional<std::string> Config::GetString(std::string_view section,
                                             std::string_view key) const {
  const Value* v = Lookup(section, key);
  if (v == nullptr) return std::nullopt;
  if (v->is_list) throw ConfigError(Where(section, key) + ": expected scalar");
  return Unquote(v->raw);
}

std::optional<double> Config::GetDouble(std::string_view section,
                                        std::string_view key) const {
  auto s = GetString(section, key);
  if (!s) return std::nullopt;
  return ToDouble(*s, section, key);
}

std::optional<std::int64_t> Config::GetInt(std::string_view section,
                                           std::string_view key) const {
  auto s = GetString(section, key);
  if (!s) return std::nullopt;
  return ToInt(*s, section, key);
}

std::optional<bool> Config::GetBool(std::string_view section,
                                    std::string_view key) const {
  auto s = GetString(section, key);
  if (!s) return std::nullopt;
  if (*s == "true") return true;
  if (*s == "false") return false;
  throw ConfigError(Where(section, key) + ": expected true or false");
}

std::optional<std::vector<double>> Config::GetDoubleList(
    std::string_view section, std::string_view key) const {
  const Value* v = Lookup(section, key);
  if (v == nullptr) return std::nullopt;
  if (!v->is_list) throw ConfigError(Where(section, key) + ": expected list");
  std::vector<double> out;
  out.reserve(v->items.size());
  for (const auto& item : v->items) out.push_back(ToDouble(item, section, key));
  return out;
}

std::optional<std::vector<std::int64_t>> Config::GetIntList(
    std::string_view section, std::string_view key) const {
  const Value* v = Lookup(section, key);
  if (v == nullptr) return std::nullopt;
  if (!v->is_list) throw ConfigError(Where(section, key) + ": expected list");
  std::vector<std::int64_t> out;
  out.reserve(v->items.size());
  for (const auto& item : v->items) out.push_back(ToInt(item, section, key));
  return out;
}

std::optional<std::vector<std::string>> Config::GetStringList(
    std::string_view section, std::string_view key) const {
  const Value* v = Lookup(section, key);
  if (v == nullptr) return std::nullopt;
  if (!v->is_list) throw ConfigError(Where(section, key) + ": expected list");
  return v->items;
}

void Config::Set(std::string_view section, std::string_view key,
                 std::string_view raw_value) {
  sections_[std::string(section)][std::string(key)] =
      ParseValue(Trim(raw_value), 0);
}

std::string Config::Canonical() const {
  std::string out;
  for (const auto& [section, entries] : sections_) {
    out += "[" + section + "]\n";
    for (const auto& [key, value] : entries) {
      if (!value.is_list) {
        out += key + " = " + value.raw + "\n";
        continue;
      }
      out += key + " = [";
      for (std::size_t i = 0; i < value.items.size(); ++i) {
        if (i > 0) out += ", ";
        out += value.items[i];
      }
      out += "]\n";
    }
  }
  return out;
}

std::string HashHex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace reidbench
