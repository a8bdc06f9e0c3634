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

#include "trajformer/model/encoder.hpp"

#include <string>

#include "trajformer/common/error.hpp"
#include "trajformer/diffgraph/ops.hpp"

namespace trajformer::model {

dg::Tensor patchify(const scene::RasterTensor& raster, int p) {
  if (p <= 0 || raster.height % p != 0 || raster.width % p != 0) {
    fail(ErrorKind::kInvalidArgument,
         "patchify: raster " + std::to_string(raster.height) + "x" + std::to_string(raster.width) +
             " is not divisible by patch size " + std::to_string(p));
  }
  const int rows = raster.height / p;
  const int cols = raster.width / p;
  const int c = raster.channels;
  dg::Tensor out({static_cast<std::int64_t>(rows) * cols, static_cast<std::int64_t>(c) * p * p});
  float* dst = out.raw();
  for (int pr = 0; pr < rows; ++pr) {
    for (int pc = 0; pc < cols; ++pc) {
      for (int ch = 0; ch < c; ++ch) {
        for (int y = 0; y < p; ++y) {
          for (int x = 0; x < p; ++x) *dst++ = raster.at(ch, pr * p + y, pc * p + x);
        }
      }
    }
  }
  return out;
}

dg::Tensor patchify_batch(std::span<const scene::RasterTensor> rasters, int patch_size) {
  if (rasters.empty()) fail(ErrorKind::kInvalidArgument, "patchify_batch: empty batch");
  const dg::Tensor first = patchify(rasters.front(), patch_size);
  dg::Tensor out({static_cast<std::int64_t>(rasters.size()), first.dim(0), first.dim(1)});
  const std::size_t stride = first.numel();
  std::copy(first.data().begin(), first.data().end(), out.data().begin());
  for (std::size_t b = 1; b < rasters.size(); ++b) {
    const dg::Tensor t = patchify(rasters[b], patch_size);
    if (t.shape() != first.shape()) {
      throw ShapeError("patchify_batch", t.shape_string(), first.shape_string(), "rasters differ");
    }
    std::copy(t.data().begin(), t.data().end(), out.data().begin() + static_cast<std::ptrdiff_t>(b * stride));
  }
  return out;
}

scene::RasterConfig raster_config(const ModelConfig& config) {
  scene::RasterConfig rc;
  rc.channels = config.raster_channels;
  rc.height = config.raster_height;
  rc.width = config.raster_width;
  // Keep the default 0.5 m pixels and place the ego three quarters down.
  rc.ego_row = config.raster_height * 3 / 4;
  rc.ego_col = config.raster_width / 2;
  return rc;
}

Encoder::Encoder(dg::ParameterSet& params, const ModelConfig& config, Rng& rng) : config_(config) {
  config.validate();
  const int d = config.encoder_dim;
  embed_ = Linear(params, "enc.patch", config.patch_dim(), d, rng);
  class_token_ = params.add("enc.cls", dg::truncated_normal({1, d}, kInitStd, rng));
  position_ = params.add("enc.pos", dg::truncated_normal({config.patch_count() + 1, d}, kInitStd, rng));
  for (int i = 0; i < config.encoder_layers; ++i) {
    blocks_.emplace_back(params, "enc.block" + std::to_string(i), d, config.encoder_heads,
                         d * config.encoder_mlp_ratio, rng);
  }
  norm_ = LayerNorm(params, "enc.norm", d);
  head_ = Linear(params, "enc.head", d, config.latent_dim, rng);
}

dg::Var Encoder::operator()(const ForwardContext& ctx, dg::Var patches) const {
  const auto& s = patches.shape();
  if (s.size() != 3 || s[1] != config_.patch_count() || s[2] != config_.patch_dim()) {
    throw ShapeError("encode", dg::shape_to_string(s),
                     dg::shape_to_string({-1, config_.patch_count(), config_.patch_dim()}),
                     "patch batch does not match the encoder");
  }
  const std::int64_t batch = s[0];
  const std::int64_t d = config_.encoder_dim;
  const dg::Var tokens = embed_(ctx, patches);
  // Broadcast the class token over the batch.
  const dg::Var cls = dg::add(ctx.graph.constant(dg::Tensor({batch, 1, d})), ctx.param(class_token_));
  dg::Var x = dg::add(dg::concat({cls, tokens}, 1), ctx.param(position_));
  x = ctx.drop(x);
  for (const auto& block : blocks_) x = block(ctx, x);
  const dg::Var readout = dg::reshape(dg::slice(x, 1, 0, 1), {batch, d});
  return head_(ctx, norm_(ctx, readout));
}

}  // namespace trajformer::model
