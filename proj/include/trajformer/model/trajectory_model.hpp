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

#ifndef TRAJFORMER_MODEL_TRAJECTORY_MODEL_HPP_
#define TRAJFORMER_MODEL_TRAJECTORY_MODEL_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "trajformer/diffgraph/parameters.hpp"
#include "trajformer/model/config.hpp"
#include "trajformer/model/decoder.hpp"
#include "trajformer/model/encoder.hpp"
#include "trajformer/scenegen/scene.hpp"

namespace trajformer::model {

// K hypotheses for one scene, copied out of the graph.
struct TrajectoryBundle {
  int k = 0;
  int horizon = 0;
  std::vector<float> trajectories;  // K x T x 2
  std::vector<float> confidences;   // K, sums to 1
  float uncertainty = 0.0f;

  scene::Point2 point(int hypothesis, int step) const {
    const std::size_t i = (static_cast<std::size_t>(hypothesis) * horizon + step) * 2;
    return {trajectories[i], trajectories[i + 1]};
  }
  friend bool operator==(const TrajectoryBundle&, const TrajectoryBundle&) = default;
};

struct ModelOutputs {
  dg::Var latent;  // [B, latent_dim]
  DecoderOutputs decoded;
};

class TrajectoryModel {
 public:
  TrajectoryModel(const ModelConfig& config, std::uint64_t init_seed);
  TrajectoryModel(const TrajectoryModel&) = delete;
  TrajectoryModel& operator=(const TrajectoryModel&) = delete;

  const ModelConfig& config() const noexcept { return config_; }
  dg::ParameterSet& parameters() noexcept { return params_; }
  const dg::ParameterSet& parameters() const noexcept { return params_; }
  const Encoder& encoder() const noexcept { return encoder_; }
  const Decoder& decoder() const noexcept { return decoder_; }

  // patches [B, N, C*P*P]; noise [B, K, noise_dim] or null when noise_dim is 0.
  ModelOutputs forward(const ForwardContext& ctx, const dg::Tensor& patches,
                       const dg::Tensor* noise) const;

  // Rasterizes and runs the model without gradients, in chunks of
  // batch_size scenes. noise_seeds holds one seed per scene.
  std::vector<TrajectoryBundle> predict(std::span<const scene::Scene> scenes,
                                        std::span<const std::uint64_t> noise_seeds,
                                        std::size_t batch_size = 32) const;

  void save(const std::string& path) const;
  // Throws kShapeMismatch if the archive does not fit this configuration.
  void load(const std::string& path);

 private:
  ModelConfig config_;
  dg::ParameterSet params_;
  Rng init_rng_;
  Encoder encoder_;
  Decoder decoder_;
};

std::vector<TrajectoryBundle> to_bundles(const DecoderOutputs& outputs);

// Per-scene inference noise: fixed by (run seed, scene seed) so a scene gets
// the same hypotheses wherever it appears.
std::uint64_t inference_noise_seed(std::uint64_t seed, const scene::Scene& scene);

// Rasterizes and patchifies a batch of scenes for `config`.
dg::Tensor scene_patches(std::span<const scene::Scene> scenes, const ModelConfig& config);

}  // namespace trajformer::model

#endif  // TRAJFORMER_MODEL_TRAJECTORY_MODEL_HPP_
