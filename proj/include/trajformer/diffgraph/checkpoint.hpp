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

#ifndef TRAJFORMER_DIFFGRAPH_CHECKPOINT_HPP_
#define TRAJFORMER_DIFFGRAPH_CHECKPOINT_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "trajformer/diffgraph/parameters.hpp"

// Named-tensor archive:
//   "SVMPCKPT" | version u32 | count u32 |
//   count x { name (u32 length + UTF-8) | rank u32 | dims u32[rank] | f32[] }
// All integers and floats little-endian.
namespace trajformer::dg {

inline constexpr char kCheckpointMagic[8] = {'S', 'V', 'M', 'P', 'C', 'K', 'P', 'T'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

using NamedTensors = std::vector<std::pair<std::string, Tensor>>;

void write_checkpoint(const std::string& path, const NamedTensors& tensors);
void save_checkpoint(const std::string& path, const ParameterSet& params);

// Throws kMissingFile or kMalformedFile.
NamedTensors read_checkpoint(const std::string& path);

// Loads every parameter by name. A missing name or different shape is a
// kShapeMismatch error; params are untouched unless the whole file fits.
void load_checkpoint(const std::string& path, ParameterSet& params);

}  // namespace trajformer::dg

#endif  // TRAJFORMER_DIFFGRAPH_CHECKPOINT_HPP_
