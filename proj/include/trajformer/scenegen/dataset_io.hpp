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

#ifndef TRAJFORMER_SCENEGEN_DATASET_IO_HPP_
#define TRAJFORMER_SCENEGEN_DATASET_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "trajformer/scenegen/scene.hpp"

namespace trajformer::scene {

struct Dataset {
  std::vector<Scene> scenes;

  std::size_t size() const noexcept { return scenes.size(); }
  bool empty() const noexcept { return scenes.empty(); }
  friend bool operator==(const Dataset&, const Dataset&) = default;
};

// Recipe for a synthetic dataset. Scene i uses seed seed_base + i; its kind
// and difficulty are drawn from a stream derived from that seed, so a scene
// does not depend on the total count.
struct DatasetSpec {
  std::uint32_t count = 0;
  std::uint64_t seed_base = 0;
  // Shifted sets default to stop scenes at difficulty [0.7, 1]; regular sets
  // to straight/turn/fork at difficulty [0, 0.6].
  bool shifted = false;
  std::vector<ScenarioKind> kinds;  // overrides the default kinds when set
  float difficulty_min = -1.0f;     // negative: use the default range
  float difficulty_max = -1.0f;
  int horizon = kDefaultHorizon;
};

Dataset make_dataset(const DatasetSpec& spec);

void write_dataset(std::ostream& out, const Dataset& dataset);
void save_dataset(const std::filesystem::path& path, const Dataset& dataset);
// Throws kMalformedFile on bad magic or truncation, kMissingFile when absent.
Dataset read_dataset(std::istream& in);
Dataset load_dataset(const std::filesystem::path& path);

}  // namespace trajformer::scene

#endif  // TRAJFORMER_SCENEGEN_DATASET_IO_HPP_
