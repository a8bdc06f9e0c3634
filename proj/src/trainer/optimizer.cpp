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

#include "trajformer/trainer/optimizer.hpp"

#include <cmath>

#include "trajformer/common/error.hpp"

namespace trajformer::train {

namespace {

std::vector<dg::Tensor> zeros_like(const dg::ParameterSet& params) {
  std::vector<dg::Tensor> out;
  out.reserve(params.size());
  for (const auto& p : params.items()) out.emplace_back(p.tensor->shape());
  return out;
}

}  // namespace

Optimizer::Optimizer(dg::ParameterSet& params) : params_(params) {}

void Optimizer::step(std::span<const dg::Tensor* const> grads, double lr) {
  const auto& items = params_.items();
  if (grads.size() != items.size()) {
    fail(ErrorKind::kInvalidArgument, "optimizer: got " + std::to_string(grads.size()) +
                                          " gradients for " + std::to_string(items.size()) +
                                          " parameters");
  }
  for (std::size_t i = 0; i < items.size(); ++i) {
    const dg::Tensor* g = grads[i];
    if (!g) continue;
    if (g->shape() != items[i].tensor->shape()) {
      throw ShapeError("optimizer." + items[i].name, items[i].tensor->shape_string(),
                       g->shape_string());
    }
    if (!g->all_finite()) fail(ErrorKind::kNonFinite, "non-finite gradient for " + items[i].name);
  }
  ++steps_;
  for (std::size_t i = 0; i < items.size(); ++i) update(i, *items[i].tensor, grads[i], lr);
}

AdamW::AdamW(dg::ParameterSet& params, AdamWOptions options)
    : Optimizer(params), options_(options), m_(zeros_like(params)), v_(zeros_like(params)) {}

void AdamW::update(std::size_t index, dg::Tensor& weight, const dg::Tensor* grad, double lr) {
  const double b1 = options_.beta1;
  const double b2 = options_.beta2;
  const double t = static_cast<double>(steps_);
  const double c1 = 1.0 - std::pow(b1, t);
  const double c2 = 1.0 - std::pow(b2, t);
  const double decay = 1.0 - lr * options_.weight_decay;
  float* w = weight.raw();
  float* m = m_[index].raw();
  float* v = v_[index].raw();
  for (std::size_t j = 0; j < weight.numel(); ++j) {
    const double g = grad ? (*grad)[j] : 0.0;
    const double mj = b1 * m[j] + (1.0 - b1) * g;
    const double vj = b2 * v[j] + (1.0 - b2) * g * g;
    m[j] = static_cast<float>(mj);
    v[j] = static_cast<float>(vj);
    const double step = (mj / c1) / (std::sqrt(vj / c2) + options_.eps);
    w[j] = static_cast<float>(static_cast<double>(w[j]) * decay - lr * step);
  }
}

Sgd::Sgd(dg::ParameterSet& params, SgdOptions options)
    : Optimizer(params), options_(options), buf_(zeros_like(params)) {}

void Sgd::update(std::size_t index, dg::Tensor& weight, const dg::Tensor* grad, double lr) {
  float* w = weight.raw();
  float* b = buf_[index].raw();
  for (std::size_t j = 0; j < weight.numel(); ++j) {
    const double g = (grad ? (*grad)[j] : 0.0) + options_.weight_decay * w[j];
    const double bj = options_.momentum * b[j] + g;
    b[j] = static_cast<float>(bj);
    w[j] = static_cast<float>(w[j] - lr * bj);
  }
}

double clip_grad_norm(std::span<dg::Tensor* const> grads, double max_norm) {
  double sq = 0.0;
  for (const dg::Tensor* g : grads) {
    if (!g) continue;
    for (float x : g->data()) sq += static_cast<double>(x) * x;
  }
  const double norm = std::sqrt(sq);
  if (norm > max_norm && norm > 0.0) {
    const auto scale = static_cast<float>(max_norm / norm);
    for (dg::Tensor* g : grads) {
      if (!g) continue;
      for (float& x : g->data()) x *= scale;
    }
  }
  return norm;
}

}  // namespace trajformer::train
