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

#include "trajformer/model/config.hpp"

#include <charconv>
#include <functional>
#include <utility>
#include <vector>

#include "trajformer/common/error.hpp"

namespace trajformer::model {

namespace {

struct IntField {
  const char* key;
  int ModelConfig::*member;
};

constexpr IntField kIntFields[] = {
    {"k", &ModelConfig::k},
    {"horizon", &ModelConfig::horizon},
    {"raster_channels", &ModelConfig::raster_channels},
    {"raster_height", &ModelConfig::raster_height},
    {"raster_width", &ModelConfig::raster_width},
    {"patch_size", &ModelConfig::patch_size},
    {"encoder_layers", &ModelConfig::encoder_layers},
    {"encoder_dim", &ModelConfig::encoder_dim},
    {"encoder_heads", &ModelConfig::encoder_heads},
    {"encoder_mlp_ratio", &ModelConfig::encoder_mlp_ratio},
    {"latent_dim", &ModelConfig::latent_dim},
    {"noise_dim", &ModelConfig::noise_dim},
    {"decoder_layers", &ModelConfig::decoder_layers},
    {"decoder_hidden", &ModelConfig::decoder_hidden},
    {"decoder_heads", &ModelConfig::decoder_heads},
};

struct FloatField {
  const char* key;
  float ModelConfig::*member;
};

constexpr FloatField kFloatFields[] = {
    {"dropout", &ModelConfig::dropout},
    {"uncertainty_scale", &ModelConfig::uncertainty_scale},
};

constexpr std::string_view kPrefix = "model.";

std::string format_float(float v) {
  // Shortest text that reads back to the same value.
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace

void ModelConfig::validate() const {
  auto check = [](bool ok, const std::string& what) {
    if (!ok) fail(ErrorKind::kInvalidArgument, "invalid model config: " + what);
  };
  check(k >= 1, "k must be >= 1");
  check(horizon >= 1, "horizon must be >= 1");
  check(raster_channels >= 1 && raster_height >= 1 && raster_width >= 1, "raster extent");
  check(patch_size >= 1, "patch_size must be >= 1");
  check(raster_height % patch_size == 0 && raster_width % patch_size == 0,
        "raster height and width must be divisible by patch_size");
  check(encoder_layers >= 0 && decoder_layers >= 0, "layer counts must be >= 0");
  check(encoder_dim >= 1 && encoder_heads >= 1 && encoder_dim % encoder_heads == 0,
        "encoder_dim must be divisible by encoder_heads");
  check(encoder_mlp_ratio >= 1, "encoder_mlp_ratio must be >= 1");
  check(latent_dim >= 1, "latent_dim must be >= 1");
  check(noise_dim >= 0, "noise_dim must be >= 0");
  check(decoder_hidden >= 1 && decoder_heads >= 1 && decoder_hidden % decoder_heads == 0,
        "decoder_hidden must be divisible by decoder_heads");
  check(slot_dim() % decoder_heads == 0, "latent_dim + noise_dim must be divisible by decoder_heads");
  check(dropout >= 0.0f && dropout < 1.0f, "dropout must be in [0, 1)");
  check(uncertainty_scale > 0.0f, "uncertainty_scale must be positive");
}

void ModelConfig::apply(const KeyValueConfig& kv) {
  for (const auto& [key, value] : kv.values()) {
    if (!key.starts_with(kPrefix)) continue;
    const std::string name = key.substr(kPrefix.size());
    bool known = false;
    if (name == "preset") {
      preset = value;
      known = true;
    }
    for (const auto& f : kIntFields) {
      if (name == f.key) {
        const auto v = kv.get_int(key, 0);
        if (v < -1'000'000'000 || v > 1'000'000'000) {
          fail(ErrorKind::kMalformedConfig, "value out of range for " + key);
        }
        this->*f.member = static_cast<int>(v);
        known = true;
      }
    }
    for (const auto& f : kFloatFields) {
      if (name == f.key) {
        this->*f.member = static_cast<float>(kv.get_double(key, 0.0));
        known = true;
      }
    }
    if (!known) fail(ErrorKind::kMalformedConfig, "unknown model key: " + key);
  }
}

void ModelConfig::write(KeyValueConfig& kv) const {
  const std::string p(kPrefix);
  kv.set(p + "preset", preset);
  for (const auto& f : kIntFields) kv.set(p + f.key, std::to_string(this->*f.member));
  for (const auto& f : kFloatFields) kv.set(p + f.key, format_float(this->*f.member));
}

ModelConfig ModelConfig::desk() { return ModelConfig{}; }

ModelConfig ModelConfig::paper() {
  ModelConfig c;
  c.preset = "paper";
  c.patch_size = 16;
  c.encoder_layers = 12;
  c.encoder_dim = 768;
  c.encoder_heads = 12;
  c.latent_dim = 512;
  c.noise_dim = 8;
  c.decoder_layers = 8;
  c.decoder_hidden = 2048;
  c.decoder_heads = 8;
  return c;
}

ModelConfig ModelConfig::from_preset(std::string_view name) {
  if (name == "desk") return desk();
  if (name == "paper") return paper();
  fail(ErrorKind::kInvalidArgument, "unknown preset '" + std::string(name) + "' (expected desk or paper)");
}

}  // namespace trajformer::model
