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

#include "trajformer/model/layers.hpp"

#include "trajformer/diffgraph/ops.hpp"

namespace trajformer::model {

dg::Var ForwardContext::drop(dg::Var x) const {
  if (!training || dropout_rng == nullptr || dropout <= 0.0f) return x;
  return dg::dropout(x, dropout, *dropout_rng);
}

Linear::Linear(dg::ParameterSet& params, const std::string& name, int in, int out, Rng& rng) {
  weight = params.add(name + ".w", dg::truncated_normal({in, out}, kInitStd, rng));
  bias = params.add(name + ".b", dg::Tensor({out}));
}

dg::Var Linear::operator()(const ForwardContext& ctx, dg::Var x) const {
  return dg::add(dg::matmul(x, ctx.param(weight)), ctx.param(bias));
}

LayerNorm::LayerNorm(dg::ParameterSet& params, const std::string& name, int dim) {
  dg::Tensor ones({dim});
  ones.fill(1.0f);
  gain = params.add(name + ".g", std::move(ones));
  bias = params.add(name + ".b", dg::Tensor({dim}));
}

dg::Var LayerNorm::operator()(const ForwardContext& ctx, dg::Var x) const {
  const dg::Var normed = dg::layer_norm(x, -1);
  return dg::add(dg::mul(normed, ctx.param(gain)), ctx.param(bias));
}

SelfAttention::SelfAttention(dg::ParameterSet& params, const std::string& name, int dim, int h,
                             Rng& rng)
    : query(params, name + ".q", dim, dim, rng),
      key(params, name + ".k", dim, dim, rng),
      value(params, name + ".v", dim, dim, rng),
      out(params, name + ".o", dim, dim, rng),
      heads(h) {}

dg::Var SelfAttention::operator()(const ForwardContext& ctx, dg::Var x) const {
  const dg::Var mixed =
      dg::scaled_dot_product_attention(query(ctx, x), key(ctx, x), value(ctx, x), heads);
  return out(ctx, mixed);
}

TransformerBlock::TransformerBlock(dg::ParameterSet& params, const std::string& name, int dim,
                                   int heads, int hidden, Rng& rng)
    : norm1(params, name + ".ln1", dim),
      norm2(params, name + ".ln2", dim),
      attention(params, name + ".attn", dim, heads, rng),
      fc1(params, name + ".fc1", dim, hidden, rng),
      fc2(params, name + ".fc2", hidden, dim, rng) {}

dg::Var TransformerBlock::operator()(const ForwardContext& ctx, dg::Var x) const {
  x = dg::add(x, ctx.drop(attention(ctx, norm1(ctx, x))));
  const dg::Var h = dg::gelu(fc1(ctx, norm2(ctx, x)));
  return dg::add(x, ctx.drop(fc2(ctx, h)));
}

}  // namespace trajformer::model
