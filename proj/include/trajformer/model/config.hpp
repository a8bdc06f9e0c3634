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

#ifndef TRAJFORMER_MODEL_CONFIG_HPP_
#define TRAJFORMER_MODEL_CONFIG_HPP_

#include <string>
#include <string_view>

#include "trajformer/common/kv_config.hpp"

namespace trajformer::model {

struct ModelConfig {
  std::string preset = "desk";

  int k = 5;          // hypotheses
  int horizon = 25;   // future steps T

  int raster_channels = 12;
  int raster_height = 64;
  int raster_width = 64;
  int patch_size = 8;

  int encoder_layers = 4;
  int encoder_dim = 128;
  int encoder_heads = 4;
  int encoder_mlp_ratio = 4;
  int latent_dim = 64;

  int noise_dim = 8;
  int decoder_layers = 2;
  int decoder_hidden = 256;  // feed-forward width inside each decoder block
  int decoder_heads = 4;

  float dropout = 0.1f;
  // U_hat = horizon * log(2 pi) + uncertainty_scale * head output.
  float uncertainty_scale = 10.0f;

  int patch_count() const { return (raster_height / patch_size) * (raster_width / patch_size); }
  int patch_dim() const { return raster_channels * patch_size * patch_size; }
  int slot_dim() const { return latent_dim + noise_dim; }

  // Throws kInvalidArgument naming the violated constraint.
  void validate() const;

  // Keys use the `model.` prefix, e.g. model.encoder_layers.
  void apply(const KeyValueConfig& kv);
  void write(KeyValueConfig& kv) const;

  static ModelConfig desk();
  static ModelConfig paper();
  // "desk" or "paper"; throws kInvalidArgument otherwise.
  static ModelConfig from_preset(std::string_view name);

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

}  // namespace trajformer::model

#endif  // TRAJFORMER_MODEL_CONFIG_HPP_
