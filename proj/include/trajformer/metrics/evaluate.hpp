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

#ifndef TRAJFORMER_METRICS_EVALUATE_HPP_
#define TRAJFORMER_METRICS_EVALUATE_HPP_

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "trajformer/metrics/metrics.hpp"
#include "trajformer/model/trajectory_model.hpp"
#include "trajformer/scenegen/dataset_io.hpp"

namespace trajformer::metrics {

struct PerSceneEval {
  std::size_t scene_id = 0;  // index in the dataset
  std::uint64_t seed = 0;
  scene::ScenarioKind kind = scene::ScenarioKind::kStraight;
  double min_ade = 0.0;
  double min_fde = 0.0;
  double cnll = 0.0;
  double uncertainty = 0.0;
  double top1_ade = 0.0;  // ADE of the most confident hypothesis
};

struct EvalSummary {
  std::size_t scenes = 0;
  double r_auc_cnll = 0.0;
  double cnll = 0.0;
  double min_ade = 0.0;
  double min_fde = 0.0;
};

struct EvalResult {
  std::vector<model::TrajectoryBundle> predictions;
  std::vector<PerSceneEval> scenes;
  RetentionCurve retention;  // cNLL retained by ascending U_hat
  EvalSummary summary;
};

// Scores precomputed predictions (one bundle per scene, same order).
// Throws kEmptyDataset for an empty dataset.
EvalResult evaluate_predictions(const scene::Dataset& dataset,
                                std::vector<model::TrajectoryBundle> predictions);

// Runs inference with per-scene noise seeds derived from `seed`, then scores.
EvalResult evaluate(const model::TrajectoryModel& model, const scene::Dataset& dataset,
                    std::uint64_t seed, std::size_t batch_size = 32);

// Per-scene noise seeds used by evaluate and the predict command.
std::vector<std::uint64_t> inference_seeds(const scene::Dataset& dataset, std::uint64_t seed);

void write_metrics_csv(std::ostream& out, const std::vector<PerSceneEval>& scenes);
void write_retention_csv(std::ostream& out, const RetentionCurve& curve);
// `key = value` lines: scenes, R-AUC_cNLL, cNLL, minADE_k5, minFDE_k5.
void write_summary(std::ostream& out, const EvalSummary& summary);
// scene_id,k,c_k,U_hat,t,x,y with one row per (scene, hypothesis, step).
void write_predictions_csv(std::ostream& out, const std::vector<model::TrajectoryBundle>& predictions);

}  // namespace trajformer::metrics

#endif  // TRAJFORMER_METRICS_EVALUATE_HPP_
