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

#ifndef TRAJFORMER_METRICS_METRICS_HPP_
#define TRAJFORMER_METRICS_METRICS_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "trajformer/model/trajectory_model.hpp"
#include "trajformer/scenegen/scene.hpp"

// Per-scene displacement and likelihood metrics plus retention curves.
// Everything here is computed in double precision from the float outputs.
namespace trajformer::metrics {

using model::TrajectoryBundle;
using scene::GroundTruthTrajectory;

// Mean L2 distance over steps between hypothesis k and the ground truth.
double ade(const TrajectoryBundle& bundle, int k, const GroundTruthTrajectory& gt);
// L2 distance at the last step.
double fde(const TrajectoryBundle& bundle, int k, const GroundTruthTrajectory& gt);

double min_ade(const TrajectoryBundle& bundle, const GroundTruthTrajectory& gt);
// Minimum over hypotheses of the final-step error, independent of which
// hypothesis wins on ADE.
double min_fde(const TrajectoryBundle& bundle, const GroundTruthTrajectory& gt);

// Index of the most confident hypothesis (lowest index on ties).
int most_confident(const TrajectoryBundle& bundle);

// -log sum_k c_k N(gt; traj_k, I) over the 2T coordinates, with log c_k
// floored at -1e9. Throws kInvalidArgument unless sum c = 1 within 1e-5.
double cnll(const TrajectoryBundle& bundle, const GroundTruthTrajectory& gt);

struct RetentionCurve {
  std::vector<double> fractions;
  std::vector<double> values;
  double area = 0.0;  // mean of values
};

// {0.01, 0.02, ..., 1.00}
std::vector<double> default_fractions();

// Scenes are retained from least to most uncertain (ties by index). The
// value at fraction f is the sum of errors of the ceil(f N) retained scenes
// divided by N; rejected scenes count as zero error.
RetentionCurve retention_curve(std::span<const double> errors, std::span<const double> uncertainties,
                               std::span<const double> fractions);
inline RetentionCurve retention_curve(std::span<const double> errors,
                                      std::span<const double> uncertainties) {
  return retention_curve(errors, uncertainties, default_fractions());
}

// Spearman rank correlation with average ranks for ties. Returns 0 when
// either input is constant.
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace trajformer::metrics

#endif  // TRAJFORMER_METRICS_METRICS_HPP_
