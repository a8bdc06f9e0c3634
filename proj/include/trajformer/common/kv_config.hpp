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

#ifndef TRAJFORMER_COMMON_KV_CONFIG_HPP_
#define TRAJFORMER_COMMON_KV_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace trajformer {

// Flat `key = value` configuration. Lines starting with '#' and blank lines
// are ignored; a later assignment to the same key wins.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::string_view text, std::string_view origin = "<string>");
  static KeyValueConfig load(const std::string& path);

  // Parses a single "key=value" override (as passed with --set).
  void set_assignment(std::string_view assignment);
  void set(const std::string& key, const std::string& value);
  void merge(const KeyValueConfig& other);

  bool contains(const std::string& key) const { return values_.contains(key); }
  std::optional<std::string> get(const std::string& key) const;

  // Typed accessors throw kMalformedConfig on unparsable values.
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace trajformer

#endif  // TRAJFORMER_COMMON_KV_CONFIG_HPP_
