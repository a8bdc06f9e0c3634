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

#ifndef TRAJFORMER_MODEL_LAYERS_HPP_
#define TRAJFORMER_MODEL_LAYERS_HPP_

#include <memory>
#include <string>

#include "trajformer/common/rng.hpp"
#include "trajformer/diffgraph/graph.hpp"
#include "trajformer/diffgraph/parameters.hpp"

namespace trajformer::model {

// Per-forward state shared by all layers. Dropout is active only when
// training is set and a generator is supplied.
struct ForwardContext {
  dg::Graph& graph;
  bool training = false;
  Rng* dropout_rng = nullptr;
  float dropout = 0.0f;

  dg::Var param(const std::shared_ptr<dg::Tensor>& t) const { return graph.parameter(t); }
  dg::Var drop(dg::Var x) const;
};

// Weights drawn from a truncated normal (std 0.02), biases zero.
struct Linear {
  std::shared_ptr<dg::Tensor> weight;  // [in, out]
  std::shared_ptr<dg::Tensor> bias;    // [out]

  Linear() = default;
  Linear(dg::ParameterSet& params, const std::string& name, int in, int out, Rng& rng);
  // Applies to the last axis of x.
  dg::Var operator()(const ForwardContext& ctx, dg::Var x) const;
};

struct LayerNorm {
  std::shared_ptr<dg::Tensor> gain;  // ones
  std::shared_ptr<dg::Tensor> bias;  // zeros

  LayerNorm() = default;
  LayerNorm(dg::ParameterSet& params, const std::string& name, int dim);
  dg::Var operator()(const ForwardContext& ctx, dg::Var x) const;
};

// Multi-head self-attention over axis 1 of a [B, N, D] input.
struct SelfAttention {
  Linear query, key, value, out;
  int heads = 1;

  SelfAttention() = default;
  SelfAttention(dg::ParameterSet& params, const std::string& name, int dim, int heads, Rng& rng);
  dg::Var operator()(const ForwardContext& ctx, dg::Var x) const;
};

// Pre-norm block: x + drop(attn(ln(x))), then x + drop(fc2(gelu(fc1(ln(x))))).
struct TransformerBlock {
  LayerNorm norm1, norm2;
  SelfAttention attention;
  Linear fc1, fc2;

  TransformerBlock() = default;
  TransformerBlock(dg::ParameterSet& params, const std::string& name, int dim, int heads, int hidden,
                   Rng& rng);
  dg::Var operator()(const ForwardContext& ctx, dg::Var x) const;
};

inline constexpr float kInitStd = 0.02f;

}  // namespace trajformer::model

#endif  // TRAJFORMER_MODEL_LAYERS_HPP_
