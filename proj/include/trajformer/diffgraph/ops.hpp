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

#ifndef TRAJFORMER_DIFFGRAPH_OPS_HPP_
#define TRAJFORMER_DIFFGRAPH_OPS_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "trajformer/common/rng.hpp"
#include "trajformer/diffgraph/graph.hpp"

// Differentiable tensor operations. Every op validates shapes and throws
// ShapeError naming the op and both shapes on mismatch.
namespace trajformer::dg {

// a[..., m, k] x b[k, n] -> [..., m, n]; or batched a[B, m, k] x b[B, k, n].
Var matmul(Var a, Var b);

// Elementwise with NumPy-style broadcasting.
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);

Var scale(Var x, float factor);
Var add_scalar(Var x, float offset);
Var exp(Var x);
// Natural log; non-positive inputs map to the floor -1e9 with zero gradient.
Var log(Var x);
// Gradient at 0 is defined as 0.
Var sqrt(Var x);
Var gelu(Var x);

Var softmax(Var x, int axis);
Var log_softmax(Var x, int axis);
Var logsumexp(Var x, int axis);
Var layer_norm(Var x, int axis, float eps = 1e-5f);

Var reshape(Var x, Shape shape);
Var concat(std::span<const Var> xs, int axis);
Var concat(std::initializer_list<Var> xs, int axis);
Var slice(Var x, int axis, std::int64_t start, std::int64_t length);

// Reductions over one axis drop that axis; the no-axis forms reduce all
// elements to shape {1}.
Var sum(Var x, int axis);
Var sum(Var x);
Var mean(Var x, int axis);
Var mean(Var x);

// Multi-head softmax(Q K^T / sqrt(d_head)) V. Q is [B, N, D] (or [N, D]),
// K and V are [B, M, D]; the head outputs are concatenated back to D.
Var scaled_dot_product_attention(Var q, Var k, Var v, int heads);

// Copy of the value cut from the tape.
Var detach(Var x);

// Inverted dropout with a mask drawn from rng; identity when p == 0.
Var dropout(Var x, float p, Rng& rng);

inline Var operator+(Var a, Var b) { return add(a, b); }
inline Var operator-(Var a, Var b) { return sub(a, b); }
inline Var operator*(Var a, Var b) { return mul(a, b); }
inline Var operator*(Var a, float s) { return scale(a, s); }
inline Var operator*(float s, Var a) { return scale(a, s); }

// Log-space floor used for zero probabilities.
inline constexpr float kLogFloor = -1e9f;

}  // namespace trajformer::dg

#endif  // TRAJFORMER_DIFFGRAPH_OPS_HPP_
