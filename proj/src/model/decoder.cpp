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

#include "trajformer/model/decoder.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "trajformer/common/error.hpp"
#include "trajformer/common/rng.hpp"
#include "trajformer/diffgraph/ops.hpp"

namespace trajformer::model {

dg::Tensor sample_noise(int k, int noise_dim, std::span<const std::uint64_t> seeds) {
  if (k < 1 || noise_dim < 1 || seeds.empty()) {
    fail(ErrorKind::kInvalidArgument, "sample_noise: need k >= 1, noise_dim >= 1 and a seed per row");
  }
  dg::Tensor out({static_cast<std::int64_t>(seeds.size()), k, noise_dim});
  float* p = out.raw();
  for (std::uint64_t seed : seeds) {
    Rng rng(seed);
    for (int i = 0; i < k * noise_dim; ++i) *p++ = static_cast<float>(rng.normal());
  }
  return out;
}

dg::Tensor replicate_and_noise(const dg::Tensor& latent, int k, int noise_dim, std::uint64_t seed) {
  if (latent.shape().size() != 1) {
    throw ShapeError("replicate_and_noise", latent.shape_string(), "[L]", "latent must be a vector");
  }
  if (k < 1 || noise_dim < 0) fail(ErrorKind::kInvalidArgument, "replicate_and_noise: k >= 1, noise_dim >= 0");
  const std::int64_t l = latent.dim(0);
  dg::Tensor out({k, l + noise_dim});
  Rng rng(seed);
  for (int row = 0; row < k; ++row) {
    float* dst = out.raw() + row * (l + noise_dim);
    std::copy(latent.data().begin(), latent.data().end(), dst);
    for (int j = 0; j < noise_dim; ++j) dst[l + j] = static_cast<float>(rng.normal());
  }
  return out;
}

dg::Var replicate_and_noise(dg::Var latent, int k, const dg::Tensor* noise) {
  if (latent.shape().size() != 2) {
    throw ShapeError("replicate_and_noise", dg::shape_to_string(latent.shape()), "[B,L]");
  }
  const std::int64_t b = latent.dim(0);
  const std::int64_t l = latent.dim(1);
  dg::Graph& g = *latent.graph();
  const dg::Var repeated = dg::add(g.constant(dg::Tensor({b, k, l})), dg::reshape(latent, {b, 1, l}));
  if (noise == nullptr) return repeated;
  const auto& ns = noise->shape();
  if (ns.size() != 3 || ns[0] != b || ns[1] != k) {
    throw ShapeError("replicate_and_noise", noise->shape_string(),
                     dg::shape_to_string({b, k, -1}), "noise does not match batch and K");
  }
  return dg::concat({repeated, g.constant(*noise)}, 2);
}

Decoder::Decoder(dg::ParameterSet& params, const ModelConfig& config, Rng& rng) : config_(config) {
  config.validate();
  const int w = config.slot_dim();
  for (int i = 0; i < config.decoder_layers; ++i) {
    blocks_.emplace_back(params, "dec.block" + std::to_string(i), w, config.decoder_heads,
                         config.decoder_hidden, rng);
  }
  norm_ = LayerNorm(params, "dec.norm", w);
  traj_fc1_ = Linear(params, "dec.traj.fc1", w, config.decoder_hidden, rng);
  traj_fc2_ = Linear(params, "dec.traj.fc2", config.decoder_hidden, 2 * config.horizon, rng);
  confidence_ = Linear(params, "dec.conf", w, 1, rng);
  unc_fc1_ = Linear(params, "dec.unc.fc1", w, config.decoder_hidden, rng);
  unc_fc2_ = Linear(params, "dec.unc.fc2", config.decoder_hidden, 1, rng);

  // cumsum_[s*2+c, t*2+c] = 1 for s <= t turns offsets into positions.
  const int n = 2 * config.horizon;
  cumsum_ = dg::Tensor({n, n});
  for (int s = 0; s < config.horizon; ++s) {
    for (int t = s; t < config.horizon; ++t) {
      for (int c = 0; c < 2; ++c) cumsum_.raw()[(s * 2 + c) * n + t * 2 + c] = 1.0f;
    }
  }
}

DecoderOutputs Decoder::operator()(const ForwardContext& ctx, dg::Var slots) const {
  const auto& s = slots.shape();
  if (s.size() != 3 || s[1] != config_.k || s[2] != config_.slot_dim()) {
    throw ShapeError("decode", dg::shape_to_string(s),
                     dg::shape_to_string({-1, config_.k, config_.slot_dim()}),
                     "slots do not match the decoder");
  }
  const std::int64_t b = s[0];
  dg::Var x = slots;
  for (const auto& block : blocks_) x = block(ctx, x);
  x = norm_(ctx, x);

  DecoderOutputs out;
  const dg::Var offsets = traj_fc2_(ctx, dg::gelu(traj_fc1_(ctx, x)));
  out.trajectories = dg::matmul(offsets, ctx.graph.constant(cumsum_));
  out.logits = dg::reshape(confidence_(ctx, x), {b, config_.k});
  out.log_confidences = dg::log_softmax(out.logits, 1);
  out.confidences = dg::softmax(out.logits, 1);

  const dg::Var pooled = dg::mean(x, 1);
  const dg::Var raw = dg::reshape(unc_fc2_(ctx, dg::gelu(unc_fc1_(ctx, pooled))), {b});
  const float floor = static_cast<float>(config_.horizon * std::log(2.0 * std::numbers::pi));
  out.uncertainty = dg::add_scalar(dg::scale(raw, config_.uncertainty_scale), floor);
  return out;
}

}  // namespace trajformer::model
