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

#ifndef TRAJFORMER_TRAINER_TRAIN_CONFIG_HPP_
#define TRAJFORMER_TRAINER_TRAIN_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <string_view>

#include "trajformer/common/kv_config.hpp"

namespace trajformer::train {

struct TrainConfig {
  std::string preset = "desk";

  int epochs_adamw = 10;
  int epochs_sgd = 10;
  double lr_adamw = 1e-4;
  double lr_sgd = 1e-3;
  double weight_decay = 1e-2;
  double momentum = 0.9;
  int batch_size = 32;
  // -1 picks 5% of the phase's steps.
  std::int64_t warmup_steps = -1;
  double min_lr = 1e-6;
  // SGD restart period in steps; -1 splits the post-warm-up phase into two cycles.
  std::int64_t restart_period = -1;
  double grad_clip = 1.0;
  std::uint64_t seed = 0;
  double lambda = 1.0;

  // Throws kInvalidArgument naming the violated constraint.
  void validate() const;

  // Keys use the `train.` prefix; unknown train keys are kMalformedConfig.
  void apply(const KeyValueConfig& kv);
  void write(KeyValueConfig& kv) const;

  static TrainConfig desk();
  static TrainConfig paper();
  static TrainConfig from_preset(std::string_view name);

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

std::int64_t resolved_warmup(const TrainConfig& config, std::int64_t phase_steps);
std::int64_t resolved_restart_period(const TrainConfig& config, std::int64_t phase_steps);

}  // namespace trajformer::train

#endif  // TRAJFORMER_TRAINER_TRAIN_CONFIG_HPP_
