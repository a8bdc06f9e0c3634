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

#include "trajformer/trainer/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <numeric>
#include <ostream>

#include "trajformer/common/error.hpp"
#include "trajformer/common/hash.hpp"
#include "trajformer/common/rng.hpp"
#include "trajformer/losses/losses.hpp"
#include "trajformer/trainer/optimizer.hpp"
#include "trajformer/trainer/schedule.hpp"

namespace trajformer::train {

namespace {

// Per-scene patch tensors are reused every epoch unless the dataset is too
// large to hold them, in which case batches are rasterized on demand.
constexpr std::size_t kCacheBudgetFloats = std::size_t{1} << 27;  // 512 MiB

class BatchSource {
 public:
  BatchSource(const model::ModelConfig& config, const scene::Dataset& dataset)
      : config_(config), dataset_(dataset) {
    const auto per_scene =
        static_cast<std::size_t>(config.patch_count()) * static_cast<std::size_t>(config.patch_dim());
    if (per_scene * dataset.size() <= kCacheBudgetFloats) {
      cache_.reserve(dataset.size());
      for (const auto& s : dataset.scenes) {
        cache_.push_back(model::scene_patches(std::span<const scene::Scene>(&s, 1), config));
      }
    }
  }

  dg::Tensor patches(std::span<const std::size_t> indices) const {
    const auto n = static_cast<std::int64_t>(indices.size());
    if (cache_.empty()) {
      std::vector<scene::Scene> scenes;
      scenes.reserve(indices.size());
      for (std::size_t i : indices) scenes.push_back(dataset_.scenes[i]);
      return model::scene_patches(scenes, config_);
    }
    dg::Tensor out({n, config_.patch_count(), config_.patch_dim()});
    const std::size_t stride = cache_.front().numel();
    for (std::size_t b = 0; b < indices.size(); ++b) {
      std::copy_n(cache_[indices[b]].raw(), stride, out.raw() + b * stride);
    }
    return out;
  }

  dg::Tensor ground_truth(std::span<const std::size_t> indices) const {
    const int t = config_.horizon;
    dg::Tensor out({static_cast<std::int64_t>(indices.size()), 2 * t});
    for (std::size_t b = 0; b < indices.size(); ++b) {
      const auto& pts = dataset_.scenes[indices[b]].future.points;
      for (int s = 0; s < t; ++s) {
        out[b * 2 * t + 2 * s] = pts[static_cast<std::size_t>(s)].x;
        out[b * 2 * t + 2 * s + 1] = pts[static_cast<std::size_t>(s)].y;
      }
    }
    return out;
  }

 private:
  const model::ModelConfig& config_;
  const scene::Dataset& dataset_;
  std::vector<dg::Tensor> cache_;
};

struct StepLosses {
  double l_pose = 0.0;
  double l_uncertainty = 0.0;
  double grad_norm = 0.0;
};

StepLosses train_step(const TrainConfig& config, model::TrajectoryModel& model, Optimizer& opt,
                      const BatchSource& source, std::span<const std::size_t> batch,
                      std::int64_t step, double lr) {
  const model::ModelConfig& mc = model.config();
  const dg::Tensor patches = source.patches(batch);
  dg::Tensor noise;
  if (mc.noise_dim > 0) {
    std::vector<std::uint64_t> seeds(batch.size());
    const std::uint64_t step_seed = derive_seed(config.seed, "noise", static_cast<std::uint64_t>(step));
    for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = derive_seed(step_seed, "slot", i);
    noise = model::sample_noise(mc.k, mc.noise_dim, seeds);
  }

  dg::Graph graph(true);
  Rng dropout_rng(derive_seed(config.seed, "dropout", static_cast<std::uint64_t>(step)));
  const model::ForwardContext ctx{graph, true, &dropout_rng, mc.dropout};
  losses::LossValues loss;
  try {
    const auto out = model.forward(ctx, patches, mc.noise_dim > 0 ? &noise : nullptr);
    const dg::Var gt = graph.constant(source.ground_truth(batch));
    loss = losses::total_loss(out.decoded.trajectories, out.decoded.log_confidences,
                              out.decoded.uncertainty, gt, static_cast<float>(config.lambda));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kNonFinite) throw;
    fail(ErrorKind::kDivergence, "step " + std::to_string(step) + ": " + e.what());
  }
  const double total = loss.total.value().item();
  if (!std::isfinite(total) || total > 1e6) {
    fail(ErrorKind::kDivergence,
         "step " + std::to_string(step) + ": batch loss " + std::to_string(total));
  }

  graph.backward(loss.total);
  const auto& items = model.parameters().items();
  std::vector<std::unique_ptr<dg::Tensor>> owned;
  std::vector<dg::Tensor*> grads(items.size(), nullptr);
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (const dg::Tensor* g = graph.parameter_grad(items[i].tensor.get())) {
      owned.push_back(std::make_unique<dg::Tensor>(*g));
      grads[i] = owned.back().get();
    }
  }
  double norm = 0.0;
  try {
    norm = clip_grad_norm(grads, config.grad_clip);
    opt.step(std::vector<const dg::Tensor*>(grads.begin(), grads.end()), lr);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kNonFinite) throw;
    fail(ErrorKind::kDivergence, "step " + std::to_string(step) + ": " + e.what());
  }
  return {loss.l_pose_mean.value().item(), loss.l_uncertainty.value().item(), norm};
}

}  // namespace

void write_train_log_header(std::ostream& out) { out << "step,lr,l_pose,l_uncertainty\n"; }

void write_train_log_row(std::ostream& out, const TrainLogRow& row) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%lld,%.9g,%.9g,%.9g\n", static_cast<long long>(row.step), row.lr,
                row.l_pose, row.l_uncertainty);
  out << buf;
}

FitResult fit(const TrainConfig& config, model::TrajectoryModel& model,
              const scene::Dataset& dataset, const FitOptions& options) {
  config.validate();
  if (dataset.empty()) fail(ErrorKind::kEmptyDataset, "cannot train on an empty dataset");
  if (static_cast<std::size_t>(config.batch_size) > dataset.size()) {
    fail(ErrorKind::kInvalidArgument, "batch_size " + std::to_string(config.batch_size) +
                                          " exceeds dataset size " +
                                          std::to_string(dataset.size()));
  }
  const model::ModelConfig& mc = model.config();
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (dataset.scenes[i].future.points.size() != static_cast<std::size_t>(mc.horizon)) {
      fail(ErrorKind::kShapeMismatch,
           "scene " + std::to_string(i) + " has a future of " +
               std::to_string(dataset.scenes[i].future.points.size()) +
               " points, model horizon is " + std::to_string(mc.horizon));
    }
  }

  std::ofstream log_file;
  if (!options.out_dir.empty()) {
    std::filesystem::create_directories(options.out_dir);
    const auto path = std::filesystem::path(options.out_dir) / "train.csv";
    log_file.open(path, std::ios::binary | std::ios::trunc);
    if (!log_file) fail(ErrorKind::kIo, "cannot write " + path.string());
    write_train_log_header(log_file);
  }

  const BatchSource source(mc, dataset);
  const auto batch = static_cast<std::size_t>(config.batch_size);
  const auto steps_per_epoch = static_cast<std::int64_t>((dataset.size() + batch - 1) / batch);

  FitResult result;
  std::int64_t step = 0;
  int epoch = 0;
  std::vector<std::size_t> order(dataset.size());

  auto run_phase = [&](Phase phase, int epochs, Optimizer& opt, const CosineSchedule& schedule) {
    for (int e = 0; e < epochs; ++e) {
      ++epoch;
      std::iota(order.begin(), order.end(), std::size_t{0});
      Rng shuffle(derive_seed(config.seed, "shuffle", static_cast<std::uint64_t>(epoch)));
      for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[shuffle.below(i)]);

      for (std::int64_t s = 0; s < steps_per_epoch; ++s) {
        const std::size_t begin = static_cast<std::size_t>(s) * batch;
        const std::size_t end = std::min(order.size(), begin + batch);
        const std::span<const std::size_t> ids(order.data() + begin, end - begin);
        const double lr = schedule(opt.steps());
        const StepLosses l = train_step(config, model, opt, source, ids, step, lr);
        const TrainLogRow row{step, phase, epoch, lr, l.l_pose, l.l_uncertainty, l.grad_norm};
        result.log.push_back(row);
        if (log_file.is_open()) {
          write_train_log_row(log_file, row);
          log_file.flush();
        }
        if (options.on_step) options.on_step(row);
        ++step;
      }
      if (!options.out_dir.empty()) {
        const auto path = std::filesystem::path(options.out_dir) / ("ckpt_epoch_" + std::to_string(epoch));
        model.save(path.string());
        result.checkpoints.push_back(path.string());
      }
    }
  };

  if (config.epochs_adamw > 0) {
    const std::int64_t total = steps_per_epoch * config.epochs_adamw;
    const std::int64_t warmup = resolved_warmup(config, total);
    AdamW opt(model.parameters(), AdamWOptions{.weight_decay = config.weight_decay});
    run_phase(Phase::kAdamW, config.epochs_adamw, opt,
              CosineSchedule{config.lr_adamw, config.min_lr, warmup, std::max<std::int64_t>(1, total - warmup), false});
  }
  if (config.epochs_sgd > 0) {
    const std::int64_t total = steps_per_epoch * config.epochs_sgd;
    Sgd opt(model.parameters(), SgdOptions{config.momentum, config.weight_decay});
    run_phase(Phase::kSgd, config.epochs_sgd, opt,
              CosineSchedule{config.lr_sgd, config.min_lr, resolved_warmup(config, total),
                             resolved_restart_period(config, total), true});
  }
  return result;
}

}  // namespace trajformer::train
