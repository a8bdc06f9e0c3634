// Copyright 2026 The Trajformer Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "trajformer/common/kv_config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "trajformer/common/error.hpp"

namespace trajformer {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::pair<std::string, std::string> split_assignment(std::string_view line,
                                                     const std::string& where) {
  const auto eq = line.find('=');
  if (eq == std::string_view::npos) {
    fail(ErrorKind::kMalformedConfig, where + ": expected key = value");
  }
  const auto key = trim(line.substr(0, eq));
  const auto value = trim(line.substr(eq + 1));
  if (key.empty()) fail(ErrorKind::kMalformedConfig, where + ": empty key");
  return {std::string(key), std::string(value)};
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::string_view text, std::string_view origin) {
  KeyValueConfig config;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    auto [key, value] = split_assignment(
        line, std::string(origin) + ":" + std::to_string(line_no));
    config.values_[key] = value;
  }
  return config;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kMissingFile, "cannot open config " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path);
}

void KeyValueConfig::set_assignment(std::string_view assignment) {
  auto [key, value] = split_assignment(assignment, "--set " + std::string(assignment));
  values_[key] = value;
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
  values_[key] = value;
}

void KeyValueConfig::merge(const KeyValueConfig& other) {
  for (const auto& [k, v] : other.values_) values_[k] = v;
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  try {
    std::size_t used = 0;
    const double d = std::stod(*v, &used);
    if (used != v->size()) throw std::invalid_argument(*v);
    return d;
  } catch (const std::exception&) {
    fail(ErrorKind::kMalformedConfig, "config key '" + key + "': not a number: " + *v);
  }
}

std::int64_t KeyValueConfig::get_int(const std::string& key, std::int64_t fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  std::int64_t out = 0;
  const auto* end = v->data() + v->size();
  const auto [ptr, ec] = std::from_chars(v->data(), end, out);
  if (ec != std::errc() || ptr != end) {
    fail(ErrorKind::kMalformedConfig, "config key '" + key + "': not an integer: " + *v);
  }
  return out;
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  fail(ErrorKind::kMalformedConfig, "config key '" + key + "': not a boolean: " + *v);
}

}  // namespace trajformer
