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

#include "trajformer/losses/losses.hpp"

#include <cmath>
#include <numbers>

#include "trajformer/common/error.hpp"
#include "trajformer/diffgraph/ops.hpp"

namespace trajformer::losses {

namespace {

void check_shapes(const char* op, dg::Var traj, dg::Var weights, dg::Var gt) {
  const auto& t = traj.shape();
  const auto& w = weights.shape();
  const auto& g = gt.shape();
  if (t.size() != 3 || t[2] % 2 != 0) {
    throw ShapeError(op, dg::shape_to_string(t), "[B,K,2T]", "trajectories");
  }
  if (w.size() != 2 || w[0] != t[0] || w[1] != t[1]) {
    throw ShapeError(op, dg::shape_to_string(w), dg::shape_to_string({t[0], t[1]}), "confidences");
  }
  if (g.size() != 2 || g[0] != t[0] || g[1] != t[2]) {
    throw ShapeError(op, dg::shape_to_string(g), dg::shape_to_string({t[0], t[2]}), "ground truth");
  }
}

}  // namespace

double gaussian_floor(int horizon) { return horizon * std::log(2.0 * std::numbers::pi); }

dg::Var mixture_nll_log(dg::Var trajectories, dg::Var log_confidences, dg::Var ground_truth) {
  check_shapes("mixture_nll", trajectories, log_confidences, ground_truth);
  const auto b = trajectories.dim(0);
  const auto width = trajectories.dim(2);
  const int horizon = static_cast<int>(width / 2);
  const dg::Var diff = dg::sub(trajectories, dg::reshape(ground_truth, {b, 1, width}));
  const dg::Var sq = dg::sum(dg::mul(diff, diff), 2);  // [B, K]
  const dg::Var component =
      dg::add_scalar(dg::sub(log_confidences, dg::scale(sq, 0.5f)),
                     -static_cast<float>(gaussian_floor(horizon)));
  return dg::scale(dg::reshape(dg::logsumexp(component, 1), {b}), -1.0f);
}

dg::Var mixture_nll(dg::Var trajectories, dg::Var confidences, dg::Var ground_truth) {
  check_shapes("mixture_nll", trajectories, confidences, ground_truth);
  const dg::Tensor& c = confidences.value();
  const auto k = c.dim(1);
  for (std::int64_t i = 0; i < c.dim(0); ++i) {
    double total = 0.0;
    for (std::int64_t j = 0; j < k; ++j) total += c.raw()[i * k + j];
    if (std::abs(total - 1.0) > 1e-5) {
      fail(ErrorKind::kInvalidArgument, "mixture_nll: confidences must sum to 1");
    }
  }
  return mixture_nll_log(trajectories, dg::log(confidences), ground_truth);
}

dg::Var uncertainty_loss(dg::Var l_pose, dg::Var u_hat) {
  if (l_pose.shape().size() != 1 || l_pose.shape() != u_hat.shape()) {
    throw ShapeError("uncertainty_loss", dg::shape_to_string(l_pose.shape()),
                     dg::shape_to_string(u_hat.shape()), "expected equal [B] vectors");
  }
  const dg::Var residual = dg::sub(u_hat, dg::detach(l_pose));
  return dg::sqrt(dg::mean(dg::mul(residual, residual)));
}

LossValues total_loss(dg::Var trajectories, dg::Var log_confidences, dg::Var u_hat,
                      dg::Var ground_truth, float lambda) {
  LossValues v;
  v.l_pose = mixture_nll_log(trajectories, log_confidences, ground_truth);
  v.l_pose_mean = dg::mean(v.l_pose);
  v.l_uncertainty = uncertainty_loss(v.l_pose, u_hat);
  v.total = lambda == 0.0f ? v.l_pose_mean
                           : dg::add(v.l_pose_mean, dg::scale(v.l_uncertainty, lambda));
  return v;
}

}  // namespace trajformer::losses
