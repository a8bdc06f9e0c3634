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

#ifndef TRAJFORMER_MODEL_ENCODER_HPP_
#define TRAJFORMER_MODEL_ENCODER_HPP_

#include <span>
#include <vector>

#include "trajformer/diffgraph/tensor.hpp"
#include "trajformer/model/config.hpp"
#include "trajformer/model/layers.hpp"
#include "trajformer/scenegen/raster.hpp"

namespace trajformer::model {

// Splits a C x H x W raster into (H/P)(W/P) patches in row-major patch
// order; each patch is flattened channel-major to C*P*P values.
// Throws kInvalidArgument if H or W is not divisible by P.
dg::Tensor patchify(const scene::RasterTensor& raster, int patch_size);

// Stacks patchified rasters into [B, N, C*P*P].
dg::Tensor patchify_batch(std::span<const scene::RasterTensor> rasters, int patch_size);

scene::RasterConfig raster_config(const ModelConfig& config);

// ViT-style encoder: linear patch embedding, prepended class token, learned
// position embedding, pre-norm blocks, final norm, class-token readout and
// a linear projection to latent_dim. Parameters are named enc.*.
class Encoder {
 public:
  Encoder(dg::ParameterSet& params, const ModelConfig& config, Rng& rng);

  // patches [B, N, C*P*P] -> latent [B, latent_dim].
  dg::Var operator()(const ForwardContext& ctx, dg::Var patches) const;

 private:
  ModelConfig config_;
  Linear embed_;
  std::shared_ptr<dg::Tensor> class_token_;  // [1, D]
  std::shared_ptr<dg::Tensor> position_;     // [N + 1, D]
  std::vector<TransformerBlock> blocks_;
  LayerNorm norm_;
  Linear head_;
};

}  // namespace trajformer::model

#endif  // TRAJFORMER_MODEL_ENCODER_HPP_
