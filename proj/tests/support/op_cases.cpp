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

#include "op_cases.hpp"

#include <cmath>

#include "../unit/test_util.hpp"
#include "trajformer/common/hash.hpp"
#include "trajformer/diffgraph/ops.hpp"

namespace trajformer::testing {

namespace {

using dg::Graph;
using dg::Shape;
using dg::Tensor;
using dg::Var;

// sum(out * R) with a fixed random R, so every output element matters.
Var weighted_sum(Graph& g, Var out, std::uint64_t seed) {
  Rng rng(seed);
  return dg::sum(dg::mul(out, g.constant(random_tensor(out.shape(), rng))));
}

// Shape with some dims collapsed to 1 and possibly leading dims dropped.
Shape broadcast_partner(const Shape& s, Rng& rng) {
  Shape out(s.begin() + static_cast<std::ptrdiff_t>(rng.below(s.size())), s.end());
  for (auto& d : out) {
    if (rng.bernoulli(0.4)) d = 1;
  }
  return out;
}

}  // namespace

std::vector<OpCase> make_op_cases(std::uint64_t seed) {
  Rng rng(derive_seed(seed, "op-cases"));
  const std::uint64_t wseed = derive_seed(seed, "weights");
  std::vector<OpCase> cases;
  auto add_case = [&](std::string name, Tensor x, auto build) {
    cases.push_back(OpCase{std::move(name),
                           [build, wseed](Graph& g, Var v) { return weighted_sum(g, build(g, v), wseed); },
                           std::move(x)});
  };

  // matmul: broadcast lhs, rhs, batched.
  {
    const auto m = 1 + static_cast<std::int64_t>(rng.below(4));
    const auto k = 1 + static_cast<std::int64_t>(rng.below(4));
    const auto n = 1 + static_cast<std::int64_t>(rng.below(4));
    const auto b = 1 + static_cast<std::int64_t>(rng.below(3));
    Shape lhs = rng.bernoulli(0.5) ? Shape{m, k} : Shape{b, m, k};
    Tensor rhs = random_tensor({k, n}, rng);
    Tensor lhs_t = random_tensor(lhs, rng);
    add_case("matmul.lhs", random_tensor(lhs, rng),
             [rhs](Graph& g, Var x) { return dg::matmul(x, g.constant(rhs)); });
    add_case("matmul.rhs", random_tensor({k, n}, rng),
             [lhs_t](Graph& g, Var x) { return dg::matmul(g.constant(lhs_t), x); });
    Tensor batched = random_tensor({b, k, n}, rng);
    add_case("matmul.batched", random_tensor({b, m, k}, rng),
             [batched](Graph& g, Var x) { return dg::matmul(x, g.constant(batched)); });
  }

  // Broadcasting binaries, differentiated through either operand.
  {
    const Shape big = random_shape(rng, 1, 3);
    const Shape small = broadcast_partner(big, rng);
    Tensor big_c = random_tensor(big, rng);
    Tensor small_c = random_tensor(small, rng);
    add_case("add.lhs", random_tensor(big, rng),
             [small_c](Graph& g, Var x) { return dg::add(x, g.constant(small_c)); });
    add_case("add.rhs_broadcast", random_tensor(small, rng),
             [big_c](Graph& g, Var x) { return dg::add(g.constant(big_c), x); });
    add_case("sub.lhs", random_tensor(big, rng),
             [small_c](Graph& g, Var x) { return dg::sub(x, g.constant(small_c)); });
    add_case("sub.rhs_broadcast", random_tensor(small, rng),
             [big_c](Graph& g, Var x) { return dg::sub(g.constant(big_c), x); });
    add_case("mul.lhs", random_tensor(big, rng),
             [small_c](Graph& g, Var x) { return dg::mul(x, g.constant(small_c)); });
    add_case("mul.rhs_broadcast", random_tensor(small, rng),
             [big_c](Graph& g, Var x) { return dg::mul(g.constant(big_c), x); });
    add_case("mul.self", random_tensor(big, rng), [](Graph&, Var x) { return dg::mul(x, x); });
  }

  // Elementwise.
  {
    const Shape s = random_shape(rng, 1, 3);
    const auto factor = static_cast<float>(rng.uniform(-2.0, 2.0));
    add_case("scale", random_tensor(s, rng), [factor](Graph&, Var x) { return dg::scale(x, factor); });
    add_case("add_scalar", random_tensor(s, rng),
             [factor](Graph&, Var x) { return dg::add_scalar(x, factor); });
    add_case("exp", random_tensor(s, rng), [](Graph&, Var x) { return dg::exp(x); });
    add_case("gelu", random_tensor(s, rng), [](Graph&, Var x) { return dg::gelu(x); });
    Tensor positive = random_tensor(s, rng);
    for (float& v : positive.data()) v = std::abs(v) + 0.5f;
    add_case("log", positive, [](Graph&, Var x) { return dg::log(x); });
    add_case("sqrt", positive, [](Graph&, Var x) { return dg::sqrt(x); });
  }

  // Axis ops.
  {
    const Shape s = random_shape(rng, 1, 3);
    const int axis = static_cast<int>(rng.below(s.size()));
    add_case("softmax", random_tensor(s, rng), [axis](Graph&, Var x) { return dg::softmax(x, axis); });
    add_case("log_softmax", random_tensor(s, rng),
             [axis](Graph&, Var x) { return dg::log_softmax(x, axis); });
    add_case("logsumexp", random_tensor(s, rng),
             [axis](Graph&, Var x) { return dg::logsumexp(x, axis); });
    add_case("sum.axis", random_tensor(s, rng), [axis](Graph&, Var x) { return dg::sum(x, axis); });
    add_case("mean.axis", random_tensor(s, rng), [axis](Graph&, Var x) { return dg::mean(x, axis); });
    add_case("sum.all", random_tensor(s, rng), [](Graph&, Var x) { return dg::sum(x); });
    add_case("mean.all", random_tensor(s, rng), [](Graph&, Var x) { return dg::mean(x); });

    // layer_norm needs a non-degenerate spread along the normalized axis.
    Shape ln = s;
    ln[static_cast<std::size_t>(axis)] = 3 + static_cast<std::int64_t>(rng.below(4));
    add_case("layer_norm", random_tensor(ln, rng),
             [axis](Graph&, Var x) { return dg::layer_norm(x, axis, 1e-5f); });
  }

  // Structural.
  {
    const Shape s = random_shape(rng, 1, 3);
    const int axis = static_cast<int>(rng.below(s.size()));
    Shape other = s;
    other[static_cast<std::size_t>(axis)] = 1 + static_cast<std::int64_t>(rng.below(3));
    Tensor other_c = random_tensor(other, rng);
    const bool first = rng.bernoulli(0.5);
    add_case("concat", random_tensor(s, rng), [other_c, axis, first](Graph& g, Var x) {
      Var c = g.constant(other_c);
      return first ? dg::concat({x, c}, axis) : dg::concat({c, x}, axis);
    });
    const auto dim = s[static_cast<std::size_t>(axis)];
    const auto start = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(dim)));
    const auto length = 1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(dim - start)));
    add_case("slice", random_tensor(s, rng),
             [axis, start, length](Graph&, Var x) { return dg::slice(x, axis, start, length); });
    const auto numel = static_cast<std::int64_t>(dg::shape_numel(s));
    add_case("reshape", random_tensor(s, rng),
             [numel](Graph&, Var x) { return dg::reshape(x, {numel}); });
  }

  // Attention through each of Q, K, V.
  {
    const int heads = 1 + static_cast<int>(rng.below(3));
    const auto dh = 1 + static_cast<std::int64_t>(rng.below(3));
    const auto d = heads * dh;
    const auto n = 1 + static_cast<std::int64_t>(rng.below(4));
    const auto m = 1 + static_cast<std::int64_t>(rng.below(4));
    const bool batched = rng.bernoulli(0.5);
    const auto b = 1 + static_cast<std::int64_t>(rng.below(3));
    const Shape qs = batched ? Shape{b, n, d} : Shape{n, d};
    const Shape ks = batched ? Shape{b, m, d} : Shape{m, d};
    Tensor q = random_tensor(qs, rng);
    Tensor k = random_tensor(ks, rng);
    Tensor v = random_tensor(ks, rng);
    add_case("attention.q", q, [k, v, heads](Graph& g, Var x) {
      return dg::scaled_dot_product_attention(x, g.constant(k), g.constant(v), heads);
    });
    add_case("attention.k", k, [q, v, heads](Graph& g, Var x) {
      return dg::scaled_dot_product_attention(g.constant(q), x, g.constant(v), heads);
    });
    add_case("attention.v", v, [q, k, heads](Graph& g, Var x) {
      return dg::scaled_dot_product_attention(g.constant(q), g.constant(k), x, heads);
    });
  }
  return cases;
}

}  // namespace trajformer::testing
