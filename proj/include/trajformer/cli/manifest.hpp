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

#ifndef TRAJFORMER_CLI_MANIFEST_HPP_
#define TRAJFORMER_CLI_MANIFEST_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trajformer/common/kv_config.hpp"

namespace trajformer::cli {

inline constexpr std::string_view kToolVersion = "0.1.0";

struct FileRef {
  std::string path;
  std::string fnv1a64;  // hex digest of the file bytes
};

FileRef file_ref(const std::filesystem::path& path);

// Describes one command invocation. Holds no timestamps so that identical
// runs produce identical manifests.
struct RunManifest {
  std::string command;
  std::uint64_t seed = 0;
  KeyValueConfig config;
  std::optional<FileRef> dataset;
  std::optional<FileRef> checkpoint;
  std::vector<FileRef> artifacts;
};

std::string to_json(const RunManifest& manifest);
void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);

}  // namespace trajformer::cli

#endif  // TRAJFORMER_CLI_MANIFEST_HPP_
