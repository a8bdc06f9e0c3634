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

#include "trajformer/model/trajectory_model.hpp"

#include <algorithm>

#include "trajformer/common/error.hpp"
#include "trajformer/common/hash.hpp"
#include "trajformer/diffgraph/checkpoint.hpp"

namespace trajformer::model {

TrajectoryModel::TrajectoryModel(const ModelConfig& config, std::uint64_t init_seed)
    : config_(config),
      init_rng_(derive_seed(init_seed, "init")),
      encoder_(params_, config_, init_rng_),
      decoder_(params_, config_, init_rng_) {}

ModelOutputs TrajectoryModel::forward(const ForwardContext& ctx, const dg::Tensor& patches,
                                      const dg::Tensor* noise) const {
  if (config_.noise_dim > 0 && noise == nullptr) {
    fail(ErrorKind::kInvalidArgument, "forward: noise required when noise_dim > 0");
  }
  if (config_.noise_dim == 0) noise = nullptr;
  if (noise != nullptr && noise->shape().size() == 3 && noise->dim(2) != config_.noise_dim) {
    throw ShapeError("forward", noise->shape_string(),
                     dg::shape_to_string({-1, config_.k, config_.noise_dim}), "noise width");
  }
  ModelOutputs out;
  out.latent = encoder_(ctx, ctx.graph.constant(patches));
  const dg::Var slots = replicate_and_noise(out.latent, config_.k, noise);
  out.decoded = decoder_(ctx, slots);
  return out;
}

std::vector<TrajectoryBundle> TrajectoryModel::predict(std::span<const scene::Scene> scenes,
                                                       std::span<const std::uint64_t> noise_seeds,
                                                       std::size_t batch_size) const {
  if (scenes.size() != noise_seeds.size()) {
    fail(ErrorKind::kInvalidArgument, "predict: one noise seed per scene required");
  }
  batch_size = std::max<std::size_t>(batch_size, 1);
  std::vector<TrajectoryBundle> result;
  result.reserve(scenes.size());
  for (std::size_t start = 0; start < scenes.size(); start += batch_size) {
    const std::size_t n = std::min(batch_size, scenes.size() - start);
    const dg::Tensor patches = scene_patches(scenes.subspan(start, n), config_);
    dg::Tensor noise;
    if (config_.noise_dim > 0) noise = sample_noise(config_.k, config_.noise_dim, noise_seeds.subspan(start, n));
    dg::Graph graph(false);
    const ForwardContext ctx{graph};
    const ModelOutputs out = forward(ctx, patches, config_.noise_dim > 0 ? &noise : nullptr);
    for (auto& b : to_bundles(out.decoded)) result.push_back(std::move(b));
  }
  return result;
}

void TrajectoryModel::save(const std::string& path) const { dg::save_checkpoint(path, params_); }

void TrajectoryModel::load(const std::string& path) { dg::load_checkpoint(path, params_); }

std::vector<TrajectoryBundle> to_bundles(const DecoderOutputs& outputs) {
  const dg::Tensor& traj = outputs.trajectories.value();
  const dg::Tensor& conf = outputs.confidences.value();
  const dg::Tensor& unc = outputs.uncertainty.value();
  const auto b = traj.dim(0);
  const auto k = traj.dim(1);
  const auto width = traj.dim(2);
  std::vector<TrajectoryBundle> bundles(static_cast<std::size_t>(b));
  for (std::int64_t i = 0; i < b; ++i) {
    TrajectoryBundle& tb = bundles[static_cast<std::size_t>(i)];
    tb.k = static_cast<int>(k);
    tb.horizon = static_cast<int>(width / 2);
    const float* t = traj.raw() + i * k * width;
    tb.trajectories.assign(t, t + k * width);
    const float* c = conf.raw() + i * k;
    tb.confidences.assign(c, c + k);
    tb.uncertainty = unc.raw()[i];
  }
  return bundles;
}

std::uint64_t inference_noise_seed(std::uint64_t seed, const scene::Scene& scene) {
  return derive_seed(seed, "infer", scene.seed);
}

dg::Tensor scene_patches(std::span<const scene::Scene> scenes, const ModelConfig& config) {
  const scene::RasterConfig rc = raster_config(config);
  std::vector<scene::RasterTensor> rasters;
  rasters.reserve(scenes.size());
  for (const auto& s : scenes) rasters.push_back(scene::rasterize(s, rc));
  return patchify_batch(rasters, config.patch_size);
}

}  // namespace trajformer::model
