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

#ifndef TRAJFORMER_TRAINER_TRAINER_HPP_
#define TRAJFORMER_TRAINER_TRAINER_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "trajformer/model/trajectory_model.hpp"
#include "trajformer/scenegen/dataset_io.hpp"
#include "trajformer/trainer/train_config.hpp"

namespace trajformer::train {

enum class Phase { kAdamW, kSgd };

struct TrainLogRow {
  std::int64_t step = 0;
  Phase phase = Phase::kAdamW;
  int epoch = 0;  // 1-based, counted across both phases
  double lr = 0.0;
  double l_pose = 0.0;  // batch mean
  double l_uncertainty = 0.0;
  double grad_norm = 0.0;  // before clipping

  friend bool operator==(const TrainLogRow&, const TrainLogRow&) = default;
};

struct FitOptions {
  // train.csv and ckpt_epoch_<n> go here; empty keeps everything in memory.
  std::string out_dir = {};
  std::function<void(const TrainLogRow&)> on_step = {};
};

struct FitResult {
  std::vector<TrainLogRow> log;
  std::vector<std::string> checkpoints;
};

// AdamW phase then SGD phase with fresh optimizer state. Throws
// kEmptyDataset, kShapeMismatch if scene futures do not match the model
// horizon, and kDivergence when a batch loss is non-finite or above 1e6.
FitResult fit(const TrainConfig& config, model::TrajectoryModel& model,
              const scene::Dataset& dataset, const FitOptions& options = {});

// step,lr,l_pose,l_uncertainty
void write_train_log_header(std::ostream& out);
void write_train_log_row(std::ostream& out, const TrainLogRow& row);

}  // namespace trajformer::train

#endif  // TRAJFORMER_TRAINER_TRAINER_HPP_
