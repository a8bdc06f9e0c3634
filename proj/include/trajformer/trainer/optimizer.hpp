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

#ifndef TRAJFORMER_TRAINER_OPTIMIZER_HPP_
#define TRAJFORMER_TRAINER_OPTIMIZER_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "trajformer/diffgraph/parameters.hpp"

namespace trajformer::train {

// Gradients are passed aligned with params.items(); a null entry is a zero
// gradient. Any non-finite gradient aborts with kNonFinite before a single
// weight is touched.
class Optimizer {
 public:
  explicit Optimizer(dg::ParameterSet& params);
  virtual ~Optimizer() = default;
  Optimizer(const Optimizer&) = delete;
  Optimizer& operator=(const Optimizer&) = delete;

  void step(std::span<const dg::Tensor* const> grads, double lr);
  std::int64_t steps() const noexcept { return steps_; }

 protected:
  virtual void update(std::size_t index, dg::Tensor& weight, const dg::Tensor* grad, double lr) = 0;

  dg::ParameterSet& params_;
  std::int64_t steps_ = 0;
};

struct AdamWOptions {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 1e-2;
};

// Decoupled weight decay: w <- w (1 - lr wd), then the Adam update.
class AdamW final : public Optimizer {
 public:
  AdamW(dg::ParameterSet& params, AdamWOptions options = {});

  const std::vector<dg::Tensor>& first_moments() const noexcept { return m_; }
  const std::vector<dg::Tensor>& second_moments() const noexcept { return v_; }

 protected:
  void update(std::size_t index, dg::Tensor& weight, const dg::Tensor* grad, double lr) override;

 private:
  AdamWOptions options_;
  std::vector<dg::Tensor> m_;
  std::vector<dg::Tensor> v_;
};

struct SgdOptions {
  double momentum = 0.9;
  double weight_decay = 1e-2;  // L2 term added to the gradient
};

class Sgd final : public Optimizer {
 public:
  Sgd(dg::ParameterSet& params, SgdOptions options = {});

  const std::vector<dg::Tensor>& momentum_buffers() const noexcept { return buf_; }

 protected:
  void update(std::size_t index, dg::Tensor& weight, const dg::Tensor* grad, double lr) override;

 private:
  SgdOptions options_;
  std::vector<dg::Tensor> buf_;
};

// Scales grads in place so their global L2 norm is at most max_norm.
// Returns the norm before clipping.
double clip_grad_norm(std::span<dg::Tensor* const> grads, double max_norm);

}  // namespace trajformer::train

#endif  // TRAJFORMER_TRAINER_OPTIMIZER_HPP_
