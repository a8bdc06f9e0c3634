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

#include "trajformer/cli/manifest.hpp"

#include <fstream>

#include <json.hpp>

#include "trajformer/common/error.hpp"
#include "trajformer/common/hash.hpp"

namespace trajformer::cli {

namespace {

nlohmann::ordered_json ref_json(const FileRef& ref) {
  return {{"path", ref.path}, {"fnv1a64", ref.fnv1a64}};
}

}  // namespace

FileRef file_ref(const std::filesystem::path& path) {
  return {path.string(), hash_file(path.string())};
}

std::string to_json(const RunManifest& manifest) {
  nlohmann::ordered_json j;
  j["tool"] = "trajformer";
  j["version"] = kToolVersion;
  j["command"] = manifest.command;
  j["seed"] = manifest.seed;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [key, value] : manifest.config.values()) config[key] = value;
  j["config"] = std::move(config);
  j["dataset"] = manifest.dataset ? ref_json(*manifest.dataset) : nullptr;
  j["checkpoint"] = manifest.checkpoint ? ref_json(*manifest.checkpoint) : nullptr;
  nlohmann::ordered_json artifacts = nlohmann::ordered_json::array();
  for (const auto& a : manifest.artifacts) artifacts.push_back(ref_json(a));
  j["artifacts"] = std::move(artifacts);
  return j.dump(2) + "\n";
}

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kIo, "cannot write " + path.string());
  out << to_json(manifest);
  if (!out) fail(ErrorKind::kIo, "failed writing " + path.string());
}

}  // namespace trajformer::cli
