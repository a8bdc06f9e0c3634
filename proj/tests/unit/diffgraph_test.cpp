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

#include <cmath>
#include <fstream>
#include <numbers>

#include "../support/op_cases.hpp"
#include "doctest.h"
#include "test_util.hpp"
#include "trajformer/common/error.hpp"
#include "trajformer/diffgraph/checkpoint.hpp"
#include "trajformer/diffgraph/grad_check.hpp"
#include "trajformer/diffgraph/ops.hpp"

namespace dg = trajformer::dg;
using trajformer::Error;
using trajformer::ErrorKind;
using trajformer::Rng;
using trajformer::ShapeError;
using trajformer::testing::random_shape;
using trajformer::testing::random_tensor;

TEST_CASE("softmax of equal logits is uniform, even for huge logits") {
  dg::Graph g(false);
  for (float v : {0.0f, 1000.0f}) {
    dg::Var y = dg::softmax(g.constant(dg::Tensor::from({v, v})), 0);
    CHECK(y.value()[0] == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(y.value()[1] == doctest::Approx(0.5).epsilon(1e-7));
  }
}

TEST_CASE("layer_norm of a constant vector is zero") {
  dg::Graph g(false);
  dg::Var y = dg::layer_norm(g.constant(dg::Tensor::from({5, 5, 5, 5})), 0, 1e-5f);
  for (float v : y.value().data()) CHECK(std::abs(v) < 1e-6f);
}

TEST_CASE("shape mismatch names the op and both shapes") {
  dg::Graph g(false);
  dg::Var a = g.constant(dg::Tensor({2, 3}));
  dg::Var b = g.constant(dg::Tensor({4, 5}));
  try {
    dg::matmul(a, b);
    FAIL("expected ShapeError");
  } catch (const ShapeError& e) {
    CHECK(e.op() == "matmul");
    CHECK(e.lhs() == "[2,3]");
    CHECK(e.rhs() == "[4,5]");
    CHECK(e.kind() == ErrorKind::kShapeMismatch);
  }
  CHECK_THROWS_AS(dg::add(a, b), ShapeError);
  CHECK_THROWS_AS(dg::concat({a, b}, 0), ShapeError);
  CHECK_THROWS_AS(dg::reshape(a, {5}), ShapeError);
}

TEST_CASE("backward of x*x at 3 is 6") {
  dg::Graph g;
  dg::Var x = g.input(dg::Tensor::scalar(3.0f).set_requires_grad(true));
  g.backward(dg::mul(x, x));
  REQUIRE(g.grad(x) != nullptr);
  CHECK((*g.grad(x))[0] == 6.0f);
}

TEST_CASE("grad of sum(A*B) wrt A is B broadcast to A") {
  Rng rng(3);
  dg::Graph g;
  dg::Var a = g.input(random_tensor({2, 3}, rng).set_requires_grad(true));
  const dg::Tensor b = random_tensor({3}, rng);
  g.backward(dg::sum(dg::mul(a, g.constant(b))));
  const dg::Tensor& grad = *g.grad(a);
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 3; ++c) CHECK(grad[static_cast<std::size_t>(r * 3 + c)] == b[static_cast<std::size_t>(c)]);
  }
}

TEST_CASE("backward rejects a non-scalar loss") {
  dg::Graph g;
  dg::Var x = g.input(dg::Tensor({3}, 1.0f).set_requires_grad(true));
  dg::Var y = dg::scale(x, 2.0f);
  CHECK_THROWS_AS(g.backward(y), Error);
}

TEST_CASE("shared subexpressions accumulate gradient from every use") {
  dg::Graph g;
  dg::Var x = g.input(dg::Tensor::scalar(2.0f).set_requires_grad(true));
  dg::Var sq = dg::mul(x, x);
  g.backward(dg::add(sq, dg::scale(sq, 3.0f)));  // 4 x^2
  CHECK((*g.grad(x))[0] == doctest::Approx(16.0));
}

TEST_CASE("grad_check closed forms") {
  SUBCASE("sum of squares") {
    const dg::Tensor x = dg::Tensor::from({1, 2, 3});
    dg::Graph g;
    dg::Var xv = g.input(dg::Tensor(x).set_requires_grad(true));
    g.backward(dg::sum(dg::mul(xv, xv)));
    const dg::Tensor& grad = *g.grad(xv);
    CHECK(grad[0] == 2.0f);
    CHECK(grad[1] == 4.0f);
    CHECK(grad[2] == 6.0f);
    const double err = dg::grad_check([](dg::Graph&, dg::Var v) { return dg::sum(dg::mul(v, v)); }, x, 1e-3);
    CHECK(err < 1e-4);
  }
  SUBCASE("logsumexp gives softmax weights") {
    const dg::Tensor x = dg::Tensor::from({0, 0});
    dg::Graph g;
    dg::Var xv = g.input(dg::Tensor(x).set_requires_grad(true));
    g.backward(dg::logsumexp(xv, 0));
    CHECK((*g.grad(xv))[0] == doctest::Approx(0.5));
    CHECK((*g.grad(xv))[1] == doctest::Approx(0.5));
    CHECK(dg::grad_check([](dg::Graph&, dg::Var v) { return dg::logsumexp(v, 0); }, x, 1e-3) < 1e-3);
  }
  SUBCASE("constant function") {
    const double err = dg::grad_check(
        [](dg::Graph& g, dg::Var) { return g.constant(dg::Tensor::scalar(4.0f)); },
        dg::Tensor::from({1, 2}), 1e-3);
    CHECK(err == 0.0);
  }
}

TEST_CASE("grad_check rejects non-deterministic functions and bad steps") {
  auto counter = std::make_shared<int>(0);
  dg::ScalarFunction f = [counter](dg::Graph&, dg::Var x) {
    return dg::add_scalar(dg::sum(x), static_cast<float>((*counter)++));
  };
  try {
    dg::grad_check(f, dg::Tensor::from({1}), 1e-3);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNonDeterministic);
  }
  CHECK_THROWS_AS(dg::grad_check([](dg::Graph&, dg::Var x) { return dg::sum(x); }, dg::Tensor::from({1}), 0.0),
                  Error);
}

TEST_CASE("every op passes grad_check over seeded random shapes") {
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    for (const auto& c : trajformer::testing::make_op_cases(trial)) {
      const auto r = dg::grad_check(c.f, c.x, dg::GradCheckOptions{1e-3, 0, trial});
      INFO("trial " << trial << " op " << c.name << " shape " << c.x.shape_string());
      CHECK(r.max_relative_error < 1e-2);
    }
  }
}

TEST_CASE("softmax is shift invariant") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto shape = random_shape(rng, 1, 3);
    const dg::Tensor x = random_tensor(shape, rng, 3.0);
    const auto c = static_cast<float>(rng.uniform(-50, 50));
    dg::Graph g(false);
    dg::Var a = dg::softmax(g.constant(x), -1);
    dg::Var b = dg::softmax(dg::add_scalar(g.constant(x), c), -1);
    for (std::size_t i = 0; i < x.numel(); ++i) CHECK(std::abs(a.value()[i] - b.value()[i]) < 1e-6f);
  }
}

TEST_CASE("logsumexp is bracketed by max and max + log n") {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = 1 + static_cast<std::int64_t>(rng.below(20));
    const dg::Tensor x = random_tensor({n}, rng, 10.0);
    dg::Graph g(false);
    const float lse = dg::logsumexp(g.constant(x), 0).value()[0];
    float mx = x[0];
    for (float v : x.data()) mx = std::max(mx, v);
    CHECK(lse >= mx - 1e-5f);
    CHECK(lse <= mx + std::log(static_cast<float>(n)) + 1e-5f);
  }
}

TEST_CASE("forward passes are bitwise deterministic") {
  Rng rng(13);
  const dg::Tensor x = random_tensor({2, 5, 8}, rng);
  const dg::Tensor w = random_tensor({8, 8}, rng);
  auto run = [&] {
    dg::Graph g(false);
    dg::Var h = dg::matmul(g.constant(x), g.constant(w));
    h = dg::scaled_dot_product_attention(h, h, h, 2);
    return dg::gelu(dg::layer_norm(h, -1)).value();
  };
  CHECK(run().bitwise_equal(run()));
}

TEST_CASE("non-finite results are rejected") {
  dg::Graph g(false);
  CHECK_THROWS_AS(dg::exp(g.constant(dg::Tensor::from({1000}))), Error);
  CHECK_THROWS_AS(g.constant(dg::Tensor::from({std::numeric_limits<float>::quiet_NaN()})), Error);
}

TEST_CASE("log floors zero at -1e9 without NaN") {
  dg::Graph g;
  dg::Var c = g.input(dg::Tensor::from({0.0f, 0.5f}).set_requires_grad(true));
  dg::Var y = dg::log(c);
  CHECK(y.value()[0] == dg::kLogFloor);
  g.backward(dg::sum(y));
  CHECK((*g.grad(c))[0] == 0.0f);
  CHECK((*g.grad(c))[1] == doctest::Approx(2.0));
}

TEST_CASE("graph records ops in topological order") {
  dg::Graph g;
  dg::Var x = g.input(dg::Tensor::from({1, 2}).set_requires_grad(true));
  dg::Var y = dg::sum(dg::gelu(x));
  const auto records = g.records();
  REQUIRE(records.size() == 3);
  CHECK(records[1].op == dg::OpKind::kGelu);
  CHECK(records[2].inputs == std::vector<dg::NodeId>{1});
  CHECK(records[2].output == y.id());
}

TEST_CASE("checkpoint archive round-trips and validates") {
  trajformer::testing::TempDir dir("ckpt");
  Rng rng(5);
  dg::ParameterSet params;
  params.add("enc.w", random_tensor({3, 4}, rng));
  params.add("dec.b", random_tensor({7}, rng));
  const auto path = dir.file("model.ckpt");
  dg::save_checkpoint(path, params);

  SUBCASE("header bytes") {
    std::ifstream in(path, std::ios::binary);
    char magic[8];
    in.read(magic, 8);
    CHECK(std::string(magic, 8) == "SVMPCKPT");
    unsigned char word[4];
    in.read(reinterpret_cast<char*>(word), 4);
    CHECK(word[0] == 1);
    in.read(reinterpret_cast<char*>(word), 4);
    CHECK(word[0] == 2);
  }
  SUBCASE("values restored by name") {
    dg::ParameterSet other;
    other.add("enc.w", dg::Tensor({3, 4}));
    other.add("dec.b", dg::Tensor({7}));
    dg::load_checkpoint(path, other);
    CHECK(other.find("enc.w")->bitwise_equal(*params.find("enc.w")));
    CHECK(other.find("dec.b")->bitwise_equal(*params.find("dec.b")));
  }
  SUBCASE("shape mismatch") {
    dg::ParameterSet other;
    other.add("enc.w", dg::Tensor({4, 3}));
    other.add("dec.b", dg::Tensor({7}));
    CHECK_THROWS_AS(dg::load_checkpoint(path, other), ShapeError);
  }
  SUBCASE("bad magic and missing file") {
    std::ofstream(dir.file("junk.ckpt")) << "not a checkpoint";
    try {
      dg::read_checkpoint(dir.file("junk.ckpt"));
      FAIL("expected error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kMalformedFile);
    }
    try {
      dg::read_checkpoint(dir.file("absent.ckpt"));
      FAIL("expected error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kMissingFile);
    }
  }
}
