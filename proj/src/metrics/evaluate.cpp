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

#include "trajformer/metrics/evaluate.hpp"

#include <cstdio>
#include <ostream>
#include <string>

#include "trajformer/common/error.hpp"

namespace trajformer::metrics {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

std::vector<std::uint64_t> inference_seeds(const scene::Dataset& dataset, std::uint64_t seed) {
  std::vector<std::uint64_t> seeds;
  seeds.reserve(dataset.size());
  for (const auto& s : dataset.scenes) seeds.push_back(model::inference_noise_seed(seed, s));
  return seeds;
}

EvalResult evaluate_predictions(const scene::Dataset& dataset,
                                std::vector<model::TrajectoryBundle> predictions) {
  if (dataset.empty()) fail(ErrorKind::kEmptyDataset, "evaluation dataset contains no scenes");
  if (predictions.size() != dataset.size()) {
    fail(ErrorKind::kInvalidArgument, "evaluate: one prediction per scene required");
  }
  EvalResult r;
  std::vector<double> errors, uncertainties;
  double sum_cnll = 0.0, sum_ade = 0.0, sum_fde = 0.0;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& s = dataset.scenes[i];
    const auto& p = predictions[i];
    PerSceneEval e;
    e.scene_id = i;
    e.seed = s.seed;
    e.kind = s.kind;
    e.min_ade = min_ade(p, s.future);
    e.min_fde = min_fde(p, s.future);
    e.cnll = cnll(p, s.future);
    e.uncertainty = p.uncertainty;
    e.top1_ade = ade(p, most_confident(p), s.future);
    errors.push_back(e.cnll);
    uncertainties.push_back(e.uncertainty);
    sum_cnll += e.cnll;
    sum_ade += e.min_ade;
    sum_fde += e.min_fde;
    r.scenes.push_back(e);
  }
  const auto n = static_cast<double>(dataset.size());
  r.retention = retention_curve(errors, uncertainties);
  r.summary.scenes = dataset.size();
  r.summary.r_auc_cnll = r.retention.area;
  r.summary.cnll = sum_cnll / n;
  r.summary.min_ade = sum_ade / n;
  r.summary.min_fde = sum_fde / n;
  r.predictions = std::move(predictions);
  return r;
}

EvalResult evaluate(const model::TrajectoryModel& model, const scene::Dataset& dataset,
                    std::uint64_t seed, std::size_t batch_size) {
  if (dataset.empty()) fail(ErrorKind::kEmptyDataset, "evaluation dataset contains no scenes");
  for (const auto& s : dataset.scenes) {
    if (static_cast<int>(s.future.points.size()) != model.config().horizon) {
      fail(ErrorKind::kShapeMismatch, "dataset horizon " + std::to_string(s.future.points.size()) +
                                          " does not match model horizon " +
                                          std::to_string(model.config().horizon));
    }
  }
  const auto seeds = inference_seeds(dataset, seed);
  return evaluate_predictions(dataset, model.predict(dataset.scenes, seeds, batch_size));
}

void write_metrics_csv(std::ostream& out, const std::vector<PerSceneEval>& scenes) {
  out << "scene_id,seed,kind,min_ade,min_fde,cnll,uncertainty,top1_ade\n";
  for (const auto& e : scenes) {
    out << e.scene_id << ',' << e.seed << ',' << scene::to_string(e.kind) << ',' << num(e.min_ade)
        << ',' << num(e.min_fde) << ',' << num(e.cnll) << ',' << num(e.uncertainty) << ','
        << num(e.top1_ade) << '\n';
  }
}

void write_retention_csv(std::ostream& out, const RetentionCurve& curve) {
  out << "fraction,value\n";
  for (std::size_t i = 0; i < curve.fractions.size(); ++i) {
    out << num(curve.fractions[i]) << ',' << num(curve.values[i]) << '\n';
  }
}

void write_summary(std::ostream& out, const EvalSummary& s) {
  out << "scenes = " << s.scenes << '\n'
      << "R-AUC_cNLL = " << num(s.r_auc_cnll) << '\n'
      << "cNLL = " << num(s.cnll) << '\n'
      << "minADE_k5 = " << num(s.min_ade) << '\n'
      << "minFDE_k5 = " << num(s.min_fde) << '\n';
}

void write_predictions_csv(std::ostream& out, const std::vector<model::TrajectoryBundle>& predictions) {
  out << "scene_id,k,c_k,U_hat,t,x,y\n";
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const auto& b = predictions[i];
    for (int k = 0; k < b.k; ++k) {
      for (int t = 0; t < b.horizon; ++t) {
        const auto p = b.point(k, t);
        out << i << ',' << k << ',' << num(b.confidences[static_cast<std::size_t>(k)]) << ','
            << num(b.uncertainty) << ',' << t << ',' << num(p.x) << ',' << num(p.y) << '\n';
      }
    }
  }
}

}  // namespace trajformer::metrics
