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

#ifndef TRAJFORMER_LOSSES_LOSSES_HPP_
#define TRAJFORMER_LOSSES_LOSSES_HPP_

#include "trajformer/diffgraph/graph.hpp"

// Training objective. Each predicted trajectory is the mean of a 2T-dim
// Gaussian with identity covariance; the mixture weights are the
// confidences.
namespace trajformer::losses {

// T * log(2 pi): the NLL of a unit-covariance 2T-dim Gaussian at its mean.
double gaussian_floor(int horizon);

// -log sum_k c_k N(gt; traj_k, I) per sample.
//   trajectories [B, K, 2T], log_confidences [B, K], ground_truth [B, 2T] -> [B]
// Computed as -logsumexp_k(log c_k - |traj_k - gt|^2 / 2 - T log 2 pi).
dg::Var mixture_nll_log(dg::Var trajectories, dg::Var log_confidences, dg::Var ground_truth);

// Same with probabilities; log c_k is floored at -1e9 so c_k = 0 is finite.
// Throws kInvalidArgument if some row of c does not sum to 1 within 1e-5.
dg::Var mixture_nll(dg::Var trajectories, dg::Var confidences, dg::Var ground_truth);

// sqrt(mean((l_pose - u_hat)^2)) with l_pose detached. Both are [B], B >= 1.
dg::Var uncertainty_loss(dg::Var l_pose, dg::Var u_hat);

struct LossValues {
  dg::Var l_pose;         // [B] per-sample NLL
  dg::Var l_pose_mean;    // [1]
  dg::Var l_uncertainty;  // [1]
  dg::Var total;          // [1] = l_pose_mean + lambda * l_uncertainty
};

LossValues total_loss(dg::Var trajectories, dg::Var log_confidences, dg::Var u_hat,
                      dg::Var ground_truth, float lambda = 1.0f);

}  // namespace trajformer::losses

#endif  // TRAJFORMER_LOSSES_LOSSES_HPP_
