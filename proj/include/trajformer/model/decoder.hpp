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

#ifndef TRAJFORMER_MODEL_DECODER_HPP_
#define TRAJFORMER_MODEL_DECODER_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "trajformer/diffgraph/tensor.hpp"
#include "trajformer/model/config.hpp"
#include "trajformer/model/layers.hpp"

namespace trajformer::model {

// Standard-normal noise [B, K, noise_dim]; row b is drawn from seeds[b].
// noise_dim must be positive.
dg::Tensor sample_noise(int k, int noise_dim, std::span<const std::uint64_t> seeds);

// Single-latent form: latent [L] -> [K, L + noise_dim], row k = [latent | S_k].
dg::Tensor replicate_and_noise(const dg::Tensor& latent, int k, int noise_dim, std::uint64_t seed);

// Batched form: latent [B, L] and noise [B, K, n] -> slots [B, K, L + n].
// With noise_dim 0 pass an invalid/empty noise tensor and k explicitly.
dg::Var replicate_and_noise(dg::Var latent, int k, const dg::Tensor* noise);

struct DecoderOutputs {
  dg::Var trajectories;     // [B, K, 2T], (x, y) interleaved per step, absolute ego frame
  dg::Var logits;           // [B, K]
  dg::Var log_confidences;  // [B, K]
  dg::Var confidences;      // [B, K], softmax over K
  dg::Var uncertainty;      // [B]
};

// Self-attention over the K slots only (no positional encoding, so the
// stack is permutation equivariant), then three heads: per-slot offsets
// summed into waypoints, per-slot confidence logit, and a pooled scalar
// uncertainty. Parameters are named dec.*.
class Decoder {
 public:
  Decoder(dg::ParameterSet& params, const ModelConfig& config, Rng& rng);

  DecoderOutputs operator()(const ForwardContext& ctx, dg::Var slots) const;

 private:
  ModelConfig config_;
  std::vector<TransformerBlock> blocks_;
  LayerNorm norm_;
  Linear traj_fc1_, traj_fc2_;
  Linear confidence_;
  Linear unc_fc1_, unc_fc2_;
  dg::Tensor cumsum_;  // [2T, 2T]
};

}  // namespace trajformer::model

#endif  // TRAJFORMER_MODEL_DECODER_HPP_
