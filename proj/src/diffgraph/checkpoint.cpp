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

#include "trajformer/diffgraph/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <map>

#include "trajformer/common/binary_io.hpp"
#include "trajformer/common/error.hpp"

namespace trajformer::dg {

namespace {
constexpr std::uint32_t kMaxNameLength = 4096;
constexpr std::uint32_t kMaxRank = 8;
}  // namespace

void write_checkpoint(const std::string& path, const NamedTensors& tensors) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kIo, "cannot write checkpoint " + path);
  out.write(kCheckpointMagic, sizeof(kCheckpointMagic));
  binary::write_u32(out, kCheckpointVersion);
  binary::write_u32(out, static_cast<std::uint32_t>(tensors.size()));
  for (const auto& [name, t] : tensors) {
    binary::write_string(out, name);
    binary::write_u32(out, static_cast<std::uint32_t>(t.rank()));
    for (auto d : t.shape()) binary::write_u32(out, static_cast<std::uint32_t>(d));
    for (float v : t.data()) binary::write_f32(out, v);
  }
  if (!out) fail(ErrorKind::kIo, "write failed for checkpoint " + path);
}

void save_checkpoint(const std::string& path, const ParameterSet& params) {
  NamedTensors tensors;
  tensors.reserve(params.size());
  for (const auto& p : params.items()) tensors.emplace_back(p.name, *p.tensor);
  write_checkpoint(path, tensors);
}

NamedTensors read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kMissingFile, "cannot open checkpoint " + path);
  char magic[sizeof(kCheckpointMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0) {
    fail(ErrorKind::kMalformedFile, path + ": not an SVMPCKPT archive");
  }
  const auto version = binary::read_u32(in, "checkpoint version");
  if (version != kCheckpointVersion) {
    fail(ErrorKind::kMalformedFile, path + ": unsupported checkpoint version " + std::to_string(version));
  }
  const auto count = binary::read_u32(in, "checkpoint count");
  NamedTensors tensors;
  for (std::uint32_t i = 0; i < count; ++i) {
    std::string name = binary::read_string(in, kMaxNameLength, "tensor name");
    const auto rank = binary::read_u32(in, "tensor rank");
    if (rank == 0 || rank > kMaxRank) {
      fail(ErrorKind::kMalformedFile, path + ": bad rank for " + name);
    }
    Shape shape(rank);
    for (auto& d : shape) {
      d = binary::read_u32(in, "tensor dims");
      if (d == 0) fail(ErrorKind::kMalformedFile, path + ": zero dimension in " + name);
    }
    Tensor t(shape);
    for (float& v : t.data()) v = binary::read_f32(in, "tensor payload");
    tensors.emplace_back(std::move(name), std::move(t));
  }
  return tensors;
}

void load_checkpoint(const std::string& path, ParameterSet& params) {
  const NamedTensors tensors = read_checkpoint(path);
  std::map<std::string, const Tensor*> by_name;
  for (const auto& [name, t] : tensors) by_name[name] = &t;
  for (const auto& p : params.items()) {
    const auto it = by_name.find(p.name);
    if (it == by_name.end()) {
      fail(ErrorKind::kShapeMismatch, path + ": checkpoint lacks tensor " + p.name);
    }
    if (it->second->shape() != p.tensor->shape()) {
      throw ShapeError("load_checkpoint " + p.name, p.tensor->shape_string(),
                       it->second->shape_string());
    }
  }
  if (by_name.size() != params.size()) {
    fail(ErrorKind::kShapeMismatch, path + ": checkpoint has " + std::to_string(by_name.size()) +
                                        " tensors, model expects " + std::to_string(params.size()));
  }
  for (const auto& p : params.items()) {
    const Tensor& src = *by_name.at(p.name);
    std::copy(src.data().begin(), src.data().end(), p.tensor->data().begin());
  }
}

}  // namespace trajformer::dg
